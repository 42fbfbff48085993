#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivfn/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Runs the acceptance criteria and prints one line each."};
    ivfn::AcceptanceOptions options;
    std::vector<int> ids;
    app.add_option("--criteria", ids, "criterion ids (default: all)")->delimiter(',')->check(CLI::Range(1, ivfn::kCriterionCount));
    app.add_option("--threads", options.threads, "worker threads")->check(CLI::Range(1, 64));
    app.add_option("--cli", options.cli_path, "command-line binary for the determinism check");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (ids.empty())
        for (int id = 1; id <= ivfn::kCriterionCount; ++id) ids.push_back(id);

    int failed = 0;
    for (int id : ids) {
        ivfn::CriterionResult r = ivfn::run_criterion(id, options);
        std::printf("%s\n", ivfn::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(ids.size()) - failed, ids.size());
    return failed ? 1 : 0;
}
