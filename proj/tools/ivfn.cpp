#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivfn/acceptance.hpp"
#include "ivfn/catalog.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/io.hpp"

namespace {

using namespace ivfn;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr const char* kConfigEnv = "IVFN_CONFIG";

// Settings shared by every verb. Empty strings mean "not given".
struct Settings {
    std::string config_path;
    std::string fixture;
    std::string function;
    std::string region;
    std::string e_min;
    std::string e_max;
    std::string tol;
    std::string mode;
    std::string format = "table";
    std::string permanent;
    std::string set;
    std::string part = "meeting";
    std::string threads;
    std::string grid_density;
    std::string hint_budget;
    std::vector<int> criteria;
    int stage = 3;
    bool j_table = false;
};

std::string trim(std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(number) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

// Values from the config file fill settings the command line left empty.
void apply_config(Settings& s, const std::map<std::string, std::string>& config) {
    const std::map<std::string, std::string*> keys{
        {"e_min", &s.e_min},         {"e_max", &s.e_max},     {"tol", &s.tol},
        {"mode", &s.mode},           {"threads", &s.threads}, {"grid_density", &s.grid_density},
        {"hint_budget", &s.hint_budget}, {"region", &s.region}, {"fixture", &s.fixture}};
    for (const auto& [key, value] : config) {
        if (key == "format") continue;
        auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("unknown config key '" + key + "'");
        if (it->second->empty()) *it->second = value;
    }
}

int parse_int(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(text, &used);
        if (used == text.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw ParseError(std::string("bad ") + what + " '" + text + "'");
}

/// "2^-12" or any power-of-two dyadic such as "1/4096"; returns 12.
int schedule_level(const std::string& text) {
    Dyadic d = text.rfind("2^", 0) == 0 ? Dyadic::pow2(parse_int(text.substr(2), "norm bound")) : Dyadic::parse(text);
    for (int k = -8; k <= Dyadic::kMaxExponent; ++k)
        if (d == Dyadic::pow2(-k)) return k;
    throw ParseError("norm bound must be a power of two: '" + text + "'");
}

SearchConfig make_config(const Settings& s, int first, int last) {
    SearchConfig cfg;
    if (!s.e_max.empty()) first = schedule_level(s.e_max);
    if (!s.e_min.empty()) last = schedule_level(s.e_min);
    if (first > last) throw ParseError("e-max must not be finer than e-min");
    cfg.e_schedule = SearchConfig::default_schedule(first, last);
    if (!s.tol.empty()) {
        try {
            cfg.tol = std::stod(s.tol);
        } catch (const std::logic_error&) {
            throw ParseError("bad tolerance '" + s.tol + "'");
        }
    }
    if (!s.threads.empty()) cfg.threads = parse_int(s.threads, "thread count");
    if (!s.grid_density.empty()) cfg.grid_density = parse_int(s.grid_density, "grid density");
    if (!s.hint_budget.empty()) cfg.hint_budget = parse_int(s.hint_budget, "hint budget");
    if (cfg.threads < 1) throw ParseError("threads must be >= 1");
    cfg.validate();
    return cfg;
}

SearchConfig line_config(const Settings& s) { return make_config(s, 3, 12); }

SearchConfig planar_config(const Settings& s) {
    std::vector<Dyadic> d = planar_default_schedule();
    return make_config(s, d.front().exponent(), d.back().exponent());
}

std::vector<double> parse_coefficients(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::logic_error&) {
            throw ParseError("bad coefficient '" + item + "'");
        }
    }
    if (out.empty()) throw ParseError("polynomial needs coefficients");
    return out;
}

/// "length", "poly:c0,c1,..." (Stieltjes difference of the polynomial) or
/// "step:a" (Stieltjes difference of the unit step at a).
struct InlineFunction {
    IntervalFunction g;
    std::optional<PointFunction> f;
};

InlineFunction parse_function(const std::string& spec) {
    if (spec == "length") return {length_function(), std::nullopt};
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "poly" && !arg.empty()) {
        PointFunction f = polynomial(parse_coefficients(arg), "poly(" + arg + ")");
        return {stieltjes(f), f};
    }
    if (kind == "step" && !arg.empty()) {
        PointFunction f = unit_step(Dyadic::parse(arg));
        return {stieltjes(f), f};
    }
    throw ParseError("unknown function '" + spec + "'; use length, poly:c0,c1,... or step:a");
}

struct Target {
    IntervalFunction g;
    Region region;
    std::vector<PointConvention> permanent;
    std::optional<PointFunction> f;
};

Target line_target(const Settings& s) {
    if (!s.fixture.empty() && !s.function.empty()) throw ParseError("give either --fixture or --function");
    Target t;
    if (!s.function.empty()) {
        InlineFunction fn = parse_function(s.function);
        t.g = fn.g;
        t.f = fn.f;
        t.region = Region::interval(0, 1);
    } else {
        if (s.fixture.empty()) throw ParseError("--fixture or --function is required");
        Fixture fx = fixture(s.fixture);
        t.g = fx.g;
        t.region = fx.region;
        t.permanent = fx.permanent;
    }
    if (!s.region.empty()) t.region = Region::parse(s.region);
    if (!s.permanent.empty()) {
        t.permanent.clear();
        std::stringstream in(s.permanent);
        std::string item;
        while (std::getline(in, item, ',')) t.permanent.push_back(PointConvention::parse(trim(item)));
    }
    return t;
}

MeasurableSet required_set(const Settings& s) {
    if (s.set.empty()) throw ParseError("--set is required");
    return MeasurableSet::parse(s.set);
}

Json verb_integrate(const Settings& s) {
    Target t = line_target(s);
    return to_json(estimate_norm_limits(t.g, t.region, line_config(s)));
}

Json verb_klimit(const Settings& s) {
    Target t = line_target(s);
    SearchConfig cfg = line_config(s);
    std::string mode = s.mode.empty() ? "fixed" : s.mode;
    if (mode == "fixed") return to_json(estimate_k_limits(t.g, t.region, t.permanent, cfg));
    if (mode == "free") {
        std::vector<Dyadic> pts;
        for (const PointConvention& p : t.permanent) pts.push_back(p.point);
        return to_json(estimate_k_prime_limits(t.g, t.region, pts, cfg));
    }
    throw ParseError("klimit mode is fixed or free");
}

Json verb_sigmalimit(const Settings& s) {
    Target t = line_target(s);
    return to_json(estimate_sigma_limit(t.g, t.region, line_config(s)));
}

Json verb_variation(const Settings& s) {
    Target t = line_target(s);
    return to_json(variation(t.g, t.region, line_config(s), s.j_table));
}

Json verb_density(const Settings& s) {
    Target t = line_target(s);
    return to_json(density_integral(t.g, required_set(s), t.region, line_config(s), t.f ? &*t.f : nullptr));
}

Json verb_around(const Settings& s) {
    Target t = line_target(s);
    MeasurableSet e = required_set(s);
    SearchConfig cfg = line_config(s);
    if (s.part == "meeting") return to_json(around_limits(t.g, e, t.region, cfg, AroundPart::meeting));
    if (s.part == "avoiding") return to_json(around_limits(t.g, e, t.region, cfg, AroundPart::avoiding));
    if (s.part == "chain") return to_json(around_chain_check(t.g, e, t.region, cfg));
    throw ParseError("around part is meeting, avoiding or chain");
}

Json verb_planar(const Settings& s) {
    if (s.fixture.empty()) throw ParseError("--fixture is required");
    SearchConfig cfg = planar_config(s);
    std::vector<std::string> fubini = fubini_fixture_names();
    if (std::find(fubini.begin(), fubini.end(), s.fixture) != fubini.end()) {
        FubiniFixture f = fubini_fixture(s.fixture);
        return to_json(fubini_chain(f.g, f.name, f.region, cfg));
    }
    PlanarFixture f = planar_fixture(s.fixture);
    std::string mode = s.mode.empty() ? "extended" : s.mode;
    PlanarMode m;
    if (mode == "extended") m = PlanarMode::extended;
    else if (mode == "restricted") m = PlanarMode::restricted;
    else throw ParseError("planar mode is extended or restricted");
    return to_json(estimate_norm_limits_2d(f.g, f.region, m, cfg, 0.0, f.permanent));
}

Json verb_walsh(const Settings& s) {
    auto t = sign_table(s.stage);
    Json out = to_json(*t);
    if (t->stage() <= kMaxDenseStage) {
        OrthogonalityReport orth = orthogonality_check(*t);
        out["max_off_diagonal"] = orth.max_off_diagonal;
        out["diagonal_is_size"] = orth.diagonal_is_size;
    }
    out["symmetric"] = is_symmetric(*t);
    if (t->stage() <= kMaxSpanStage) {
        SpanReport span = span_check(*t);
        out["determinant"] = span.determinant.str();
        out["unit_rows_solvable"] = span.unit_rows_solvable;
    }
    return out;
}

Json verb_list() { return fixture_manifest(); }

struct Verified {
    Json doc;
    bool pass;
};

Verified verb_verify(const Settings& s) {
    AcceptanceOptions options;
    if (!s.threads.empty()) options.threads = parse_int(s.threads, "thread count");
    std::vector<int> ids = s.criteria;
    if (ids.empty())
        for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
    Json rows = Json::array();
    int passed = 0;
    for (int id : ids) {
        CriterionResult r = run_criterion(id, options);
        passed += r.pass;
        rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    return {Json{{"passed", passed}, {"total", ids.size()}, {"rows", rows}}, passed == static_cast<int>(ids.size())};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upper and lower limits of interval functions."};
    app.require_subcommand(1);
    app.fallthrough();
    Settings s;
    const char* env = std::getenv(kConfigEnv);
    if (env) s.config_path = env;

    app.add_option("--config", s.config_path, std::string("key=value file (default from $") + kConfigEnv + ")");
    app.add_option("--format", s.format, "table, json or csv");
    app.add_option("--threads", s.threads, "worker threads");
    app.add_option("--e-min", s.e_min, "finest norm bound, e.g. 2^-12");
    app.add_option("--e-max", s.e_max, "coarsest norm bound");
    app.add_option("--tol", s.tol, "convergence tolerance");
    app.add_option("--grid-density", s.grid_density, "extra grid levels");
    app.add_option("--hint-budget", s.hint_budget, "hint budget");

    auto line_options = [&](CLI::App* sub) {
        sub->add_option("--fixture", s.fixture, "fixture name (see list)");
        sub->add_option("--function", s.function, "length, poly:c0,c1,... or step:a");
        sub->add_option("--region", s.region, "\"0,2\" or \"[0,1]+[2,3]\"");
        sub->add_option("--permanent", s.permanent, "\"point:conv,...\" with conv one of )( )[ ]( ][");
        return sub;
    };
    std::map<std::string, CLI::App*> verbs;
    verbs["integrate"] = line_options(app.add_subcommand("integrate", "norm-limit estimates"));
    verbs["klimit"] = line_options(app.add_subcommand("klimit", "limits over divisions holding permanent points"));
    verbs["klimit"]->add_option("--mode", s.mode, "fixed (conventions enforced) or free");
    verbs["sigmalimit"] = line_options(app.add_subcommand("sigmalimit", "limits over refinements at singular points"));
    verbs["variation"] = line_options(app.add_subcommand("variation", "variation and b.v. verdict"));
    verbs["variation"]->add_flag("--j-table", s.j_table, "include j(y) at scanned points");
    verbs["density"] = line_options(app.add_subcommand("density", "density integral over a set"));
    verbs["density"]->add_option("--set", s.set, "\"[0,1/2]+{3/4}\"");
    verbs["around"] = line_options(app.add_subcommand("around", "limits around a set"));
    verbs["around"]->add_option("--set", s.set, "\"[0,1/2]+{3/4}\"");
    verbs["around"]->add_option("--part", s.part, "meeting, avoiding or chain");
    verbs["planar"] = app.add_subcommand("planar", "rectangle limits and iterated chains");
    verbs["planar"]->add_option("--fixture", s.fixture, "planar or iterated fixture name");
    verbs["planar"]->add_option("--mode", s.mode, "extended or restricted");
    verbs["walsh"] = app.add_subcommand("walsh", "sign table of a stage");
    verbs["walsh"]->add_option("--stage", s.stage, "stage n, table size 2^(n-1)");
    verbs["verify"] = app.add_subcommand("verify", "run the acceptance criteria");
    verbs["verify"]->add_option("--criteria", s.criteria, "ids, e.g. 1,5,10")->delimiter(',');
    verbs["list"] = app.add_subcommand("list", "fixture registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string verb;
    for (const auto& [name, sub] : verbs)
        if (sub->parsed()) verb = name;

    try {
        if (!s.config_path.empty()) {
            auto config = read_config(s.config_path);
            if (auto it = config.find("format"); it != config.end() && app.count("--format") == 0) s.format = it->second;
            apply_config(s, config);
        }
        Format format = parse_format(s.format);
        for (int id : s.criteria)
            if (id < 1 || id > kCriterionCount) throw ParseError("no criterion " + std::to_string(id));

        Json payload;
        bool pass = true;
        if (verb == "integrate") payload = verb_integrate(s);
        else if (verb == "klimit") payload = verb_klimit(s);
        else if (verb == "sigmalimit") payload = verb_sigmalimit(s);
        else if (verb == "variation") payload = verb_variation(s);
        else if (verb == "density") payload = verb_density(s);
        else if (verb == "around") payload = verb_around(s);
        else if (verb == "planar") payload = verb_planar(s);
        else if (verb == "walsh") payload = verb_walsh(s);
        else if (verb == "list") payload = verb_list();
        else {
            Verified v = verb_verify(s);
            payload = v.doc;
            pass = v.pass;
        }
        std::string text = verb == "walsh" && format == Format::csv
                               ? sign_table_csv(*sign_table(s.stage))
                               : render(document(verb, payload), format);
        std::fwrite(text.data(), 1, text.size(), stdout);
        return pass ? kExitOk : kExitFailure;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnknownFixture& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedFormat& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const StageTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
