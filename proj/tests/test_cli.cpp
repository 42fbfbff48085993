#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Invocation {
    int status = -1;
    std::string out;
};

Invocation run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + IVFN_CLI_PATH + " " + args + " 2>/dev/null";
    Invocation r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

}  // namespace

TEST(Cli, IntegrateSaks) {
    Invocation r = run("integrate --fixture saks_A_counterexample --region 0,2 --format json");
    ASSERT_EQ(r.status, 0);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["kind"], "integrate");
    EXPECT_EQ(doc["levels"].back()["upper"], 1.0);
}

TEST(Cli, List) {
    Invocation r = run("list --format json");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out)["rows"].size(), 12u);
}

TEST(Cli, BadArgumentsExitTwo) {
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("integrate --fixture no_such").status, 2);
    EXPECT_EQ(run("integrate --fixture saks_A_counterexample --format xml").status, 2);
    EXPECT_EQ(run("integrate --fixture saks_A_counterexample --e-min 1/3").status, 2);
    EXPECT_EQ(run("walsh --stage 17").status, 2);
    EXPECT_EQ(run("verify --criteria 12").status, 2);
    EXPECT_EQ(run("planar --fixture centred_squares --mode sideways").status, 2);
}

TEST(Cli, CsvExports) {
    Invocation sign = run("walsh --stage 3 --format csv");
    ASSERT_EQ(sign.status, 0);
    EXPECT_EQ(sign.out, "1,1,1,1\n1,1,-1,-1\n1,-1,1,-1\n1,-1,-1,1\n");
    Invocation lim = run("integrate --function poly:0,0,1 --e-min 2^-4 --format csv");
    ASSERT_EQ(lim.status, 0);
    EXPECT_EQ(lim.out, "e,upper,lower\n1/2^3,1.0,1.0\n1/2^4,1.0,1.0\n");
}

TEST(Cli, DensityJsonHasReference) {
    Invocation r = run("density --function poly:0,0,1 --set [0,1/2] --e-min 2^-6 --format json");
    ASSERT_EQ(r.status, 0);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["lebesgue_ref"].get<double>(), 0.25, 1e-12);
}

TEST(Cli, ConfigFileAndOverrides) {
    std::string path = ::testing::TempDir() + "ivfn_cli_test.conf";
    {
        std::ofstream out(path);
        out << "# coarse run\ne_min = 2^-5\nformat = csv\n";
    }
    Invocation from_file = run("integrate --function length --config " + path);
    ASSERT_EQ(from_file.status, 0);
    EXPECT_EQ(from_file.out, "e,upper,lower\n1/2^3,1.0,1.0\n1/2^4,1.0,1.0\n1/2^5,1.0,1.0\n");
    Invocation from_env = run("integrate --function length --e-min 2^-4", "IVFN_CONFIG=" + path);
    ASSERT_EQ(from_env.status, 0);
    EXPECT_EQ(from_env.out, "e,upper,lower\n1/2^3,1.0,1.0\n1/2^4,1.0,1.0\n");
    {
        std::ofstream out(path);
        out << "colour = blue\n";
    }
    EXPECT_EQ(run("integrate --function length --config " + path).status, 2);
    std::remove(path.c_str());
}

TEST(Cli, SameCommandSameBytes) {
    std::string args = "klimit --fixture k_convention_jump --e-min 2^-8 --threads 3 --format json";
    Invocation a = run(args), b = run(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run("klimit --fixture k_convention_jump --e-min 2^-8 --threads 1 --format json").out, a.out);
}

TEST(Cli, VerifySubsetPasses) {
    Invocation r = run("verify --criteria 1,10 --format json");
    EXPECT_EQ(r.status, 0);
    auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["passed"], 2);
}

TEST(Cli, PlanarAndAround) {
    Invocation p = run("planar --fixture area --format json");
    ASSERT_EQ(p.status, 0);
    EXPECT_TRUE(nlohmann::json::parse(p.out)["holds"].get<bool>());
    Invocation a = run("around --function step:0 --region -1,1 --set '(-1,0)' --part avoiding --e-min 2^-6 --format json");
    ASSERT_EQ(a.status, 0);
    auto doc = nlohmann::json::parse(a.out);
    EXPECT_EQ(doc["levels"].back()["upper"], 1.0);
    EXPECT_EQ(doc["levels"].back()["lower"], 0.0);
}
