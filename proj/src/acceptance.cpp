#include "ivfn/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <sstream>

#include "ivfn/catalog.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/io.hpp"

namespace ivfn {
namespace {

constexpr double kExactTol = 1e-9;
constexpr double kConvergenceTol = 1e-6;
constexpr double kDensityTol = 1e-4;
constexpr double kDeterminantTol = 1e-10;
constexpr double kContinuityTol = 1e-3;
constexpr int kFinestLevel = 12;
constexpr int kRandomPointSets = 1000;
constexpr int kMaxRandomIntervals = 6;
constexpr int kCantorDepth = 12;
constexpr double kCantorPackSum = 0.99;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SearchConfig base_config(const AcceptanceOptions& o) {
    SearchConfig cfg;
    cfg.e_schedule = SearchConfig::default_schedule(3, kFinestLevel);
    cfg.threads = o.threads;
    return cfg;
}

SearchConfig planar_config(const AcceptanceOptions& o) {
    SearchConfig cfg;
    cfg.e_schedule = planar_default_schedule();
    cfg.threads = o.threads;
    return cfg;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;
    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

// 1: upper estimates over three regions and the defect at 1.
void saks(Outcome& out, const AcceptanceOptions& o) {
    Fixture f = fixture("saks_A_counterexample");
    SearchConfig cfg = base_config(o);
    const std::pair<Region, double> cases[] = {
        {Region::interval(0, 1), 1.0}, {Region::interval(1, 2), 0.0}, {Region::interval(0, 2), 1.0}};
    for (const auto& [r, want] : cases) {
        double up = estimate_norm_limits(f.g, r, cfg).finest().upper;
        out.detail << "upper" << r.str() << "=" << fmt(up) << " ";
        out.check(std::fabs(up - want) <= kExactTol, "upper over " + r.str());
    }
    double worst = 0.0;
    for (int n = 1; n <= 15; ++n) {
        Dyadic h = Dyadic::pow2(-2 * n);
        double d = additivity_defect(f.g, Dyadic(1) - h, 1, Dyadic(1) + h);
        worst = std::max(worst, std::fabs(d - 1.0));
    }
    out.detail << "defect(1) off by " << fmt(worst);
    out.check(worst == 0.0, "defect at 1");
}

// 2: independent bracket optimum against the 4^m walk.
void bracket_exactness(Outcome& out, const AcceptanceOptions&) {
    std::mt19937_64 rng(20240611);
    std::size_t compared = 0, mismatches = 0;
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        std::vector<Dyadic> special = f.g.special_points(f.region, 8);
        const Span& comp = f.region.components().front();
        constexpr int kLevel = 10;
        std::int64_t k0 = comp.lo.ceil_at(kLevel) + 1, k1 = comp.hi.floor_at(kLevel) - 1;
        std::uniform_int_distribution<std::int64_t> at(k0, k1);
        std::uniform_int_distribution<int> count(1, kMaxRandomIntervals);
        std::bernoulli_distribution use_special(0.3);
        for (int s = 0; s < kRandomPointSets; ++s) {
            Region r = Region::interval(comp.lo, comp.hi);
            std::vector<Dyadic> pts{comp.lo, comp.hi};
            int m = count(rng);
            while (static_cast<int>(pts.size()) < m + 1) {
                Dyadic p(at(rng), kLevel);
                if (!special.empty() && use_special(rng)) {
                    std::uniform_int_distribution<std::size_t> pick(0, special.size() - 1);
                    p = special[pick(rng)];
                }
                if (comp.lo < p && p < comp.hi && std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
            }
            std::sort(pts.begin(), pts.end());
            for (Sense sense : {Sense::max, Sense::min}) {
                double a = extremal_sum(f.g, pts, r, sense).value;
                double b = extremal_sum_exhaustive(f.g, pts, r, sense).value;
                ++compared;
                if (a != b) ++mismatches;
            }
        }
    }
    out.detail << compared << " optima compared, " << mismatches << " mismatches";
    out.check(mismatches == 0, "optimizer agrees with enumeration");
}

// 3: upper k-limits with fixed conventions at the permanent points.
void k_convention(Outcome& out, const AcceptanceOptions& o) {
    Fixture f = fixture("k_convention_jump");
    SearchConfig cfg = base_config(o);
    LimitReport g = estimate_k_limits(f.g, f.region, f.permanent, cfg);
    LimitReport h = estimate_k_limits(*f.rebracketed, f.region, f.permanent, cfg);
    out.detail << "g: " << g.verdict.str() << ", h: " << h.verdict.str();
    out.check(std::fabs(g.finest().upper - 2.0) <= kConvergenceTol, "upper k-limit of g is 2");
    out.check(std::fabs(h.finest().upper - 1.0) <= kConvergenceTol, "upper k-limit of h is 1");
}

std::vector<PointConvention> chain_points(const Fixture& f, const SearchConfig& cfg) {
    if (!f.permanent.empty()) return f.permanent;
    std::vector<PointConvention> out;
    for (const DefectReport& d : singularity_scan(f.g, f.region, cfg)) {
        if (out.size() >= 10) break;
        out.push_back(PointConvention::parse(d.y, "]["));
    }
    if (out.empty()) {
        const Span& c = f.region.components().front();
        out.push_back(PointConvention::parse(midpoint(c.lo, c.hi), "]["));
    }
    return out;
}

// 4: lower_N <= lower_k' <= lower_k <= upper_k <= upper_k' <= upper_N.
void inequality_chain(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = base_config(o);
    std::size_t levels = 0;
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        LimitChain c = estimate_limit_chain(f.g, f.region, chain_points(f, cfg), cfg);
        for (std::size_t k = 0; k < c.norm.levels.size(); ++k) {
            const LevelEstimate &n = c.norm.levels[k], &p = c.all_conventions.levels[k], &x = c.fixed.levels[k];
            if (!std::isfinite(n.upper) || !std::isfinite(n.lower)) continue;
            ++levels;
            bool ok = n.lower <= p.lower && p.lower <= x.lower && x.lower <= x.upper && x.upper <= p.upper &&
                      p.upper <= n.upper;
            out.check(ok, name + " at e=" + n.e.str());
        }
    }
    out.detail << levels << " levels over " << fixture_names().size() << " fixtures";
}

// 5: extended against restricted planar upper estimates.
void planar_gap(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = planar_config(o);
    for (const std::string& name : planar_fixture_names()) {
        PlanarFixture f = planar_fixture(name);
        double ext = estimate_norm_limits_2d(f.g, f.region, PlanarMode::extended, cfg, 0.0, f.permanent).report.finest().upper;
        double res =
            estimate_norm_limits_2d(f.g, f.region, PlanarMode::restricted, cfg, 0.0, f.permanent).report.finest().upper;
        out.detail << name << " extended=" << fmt(ext) << " restricted=" << fmt(res) << " ";
        out.check(std::fabs(ext - f.extended_upper) <= kExactTol, name + " extended");
        out.check(std::fabs(res - f.restricted_upper) <= kExactTol, name + " restricted");
    }
}

// 6: the four-term chain, and the product collapse.
void fubini(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = planar_config(o);
    for (const std::string& name : fubini_fixture_names()) {
        FubiniFixture f = fubini_fixture(name);
        FubiniChain c = fubini_chain(f.g, name, f.region, cfg);
        out.detail << name << (c.holds ? " holds" : " broken") << (c.strict_somewhere ? " (strict) " : " ");
        out.check(c.holds, name + " chain");
        if (name == "product") {
            IntervalFunction fx = stieltjes(polynomial({0, 0, 1}, "x^2"));
            IntervalFunction fy = stieltjes(polynomial({0, -1, 1}, "y^2-y"));
            double px = estimate_norm_limits(fx, Region::interval(0, 1), cfg).finest().upper;
            double py = estimate_norm_limits(fy, Region::interval(0, 2), cfg).finest().upper;
            double want = px * py, worst = 0.0;
            for (const FubiniLevel& l : c.levels)
                for (double v : {l.lower, l.iterated_lower, l.iterated_upper, l.upper})
                    worst = std::max(worst, std::fabs(v - want));
            out.detail << "product off by " << fmt(worst) << " ";
            out.check(worst <= kExactTol, "product collapse");
        }
    }
}

// 7: variation values, the non-b.v. verdict and c <= 2j.
void variation_criterion(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = base_config(o);
    PointFunction q = polynomial({0, 1, -1}, "x(1-x)");
    double var = variation(stieltjes(q), Region::interval(0, 1), cfg).var.finest().upper;
    double oracle = 0.0;
    constexpr int kOracleCells = 1 << 20;
    for (int k = 0; k < kOracleCells; ++k)
        oracle += std::fabs(q.eval((k + 1.0) / kOracleCells) - q.eval(static_cast<double>(k) / kOracleCells));
    out.detail << "Var=" << fmt(var) << " oracle=" << fmt(oracle) << " ";
    out.check(std::fabs(var - oracle) <= kConvergenceTol, "Var of x(1-x)");

    Fixture blocks = fixture("dyadic_blocks");
    VariationReport vb = variation(blocks.g, blocks.region, cfg);
    double j0 = j_singularity(blocks.g, blocks.region, 0, cfg);
    out.detail << "dyadic_blocks " << (vb.bounded ? "bounded" : "not b.v.") << " j(0)=" << fmt(j0) << " ";
    out.check(!vb.bounded, "dyadic_blocks not b.v.");
    out.check(std::isinf(j0), "j(0) infinite");

    std::size_t points = 0;
    double worst = -kInf;
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        VariationReport v = variation(f.g, f.region, cfg, true);
        for (const auto& [y, j] : v.j_table) {
            double c = defect_at(f.g, f.region, y, cfg).c;
            ++points;
            worst = std::max(worst, c - 2 * j);
            out.check(c <= 2 * j + kExactTol, name + " c<=2j at " + y.str());
        }
    }
    out.detail << points << " scanned points, max c-2j=" << fmt(worst);
}

// 8: absolute continuity.
void absolute_continuity(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = base_config(o);
    Region unit = Region::interval(0, 1);
    AcReport length = is_absolutely_continuous(length_function(), unit, cfg);
    out.detail << "mI best=" << fmt(length.trace.back().best) << " ";
    out.check(length.absolutely_continuous, "mI is AC");

    IntervalFunction cantor = stieltjes(cantor_staircase(kCantorDepth));
    std::vector<Interval> pack;
    for (const Span& s : cantor_intervals(kCantorDepth)) pack.emplace_back(s.lo, s.hi, Side::closed, Side::closed);
    Pack p = evaluate_pack(cantor, pack);
    double target = std::pow(2.0 / 3.0, kCantorDepth);
    out.detail << "Cantor pack measure=" << fmt(p.measure.to_double()) << " sum=" << fmt(p.sum) << " ";
    out.check(std::fabs(p.measure.to_double() - target) <= 1e-6, "Cantor pack measure");
    out.check(std::fabs(p.sum) >= kCantorPackSum, "Cantor pack sum");
    AcReport ac = is_absolutely_continuous(cantor, unit, cfg, {pack});
    out.check(!ac.absolutely_continuous, "Cantor staircase fails AC");

    std::vector<std::pair<std::string, std::pair<IntervalFunction, Region>>> cases{
        {"mI", {length_function(), unit}},
        {"S(x(1-x))", {stieltjes(polynomial({0, 1, -1}, "x(1-x)")), unit}},
        {"S(x^3)", {stieltjes(polynomial({0, 0, 0, 1}, "x^3")), unit}},
        {"cantor", {cantor, unit}}};
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        cases.push_back({name, {f.g, f.region}});
    }
    int passing = 0;
    for (const auto& [name, c] : cases) {
        if (!is_absolutely_continuous(c.first, c.second, cfg).absolutely_continuous) continue;
        ++passing;
        out.check(variation(c.first, c.second, cfg).bounded, name + " AC but not b.v.");
    }
    out.detail << passing << " AC cases, all b.v.";
}

// 9: density integrals against quadrature of the derivative.
void density_criterion(Outcome& out, const AcceptanceOptions& o) {
    SearchConfig cfg = base_config(o);
    Region w = Region::interval(0, 1);
    const std::vector<PointFunction> fs{polynomial({0, 1}, "x"), polynomial({0, 0, 1}, "x^2"),
                                        polynomial({0, 0, 0, 1}, "x^3"), polynomial({0, 0, 0, 0, 1}, "x^4"),
                                        polynomial({0, 1, 1}, "x+x^2")};
    const std::vector<std::string> sets{"[0,1/2]", "[1/4,3/4]", "[0,1/8]+[1/2,5/8]", "[1/16,3/16]+(5/8,1]", "[0,1]"};
    double worst = 0.0;
    for (const PointFunction& f : fs)
        for (const std::string& text : sets) {
            DensityReport r = density_integral(stieltjes(f), MeasurableSet::parse(text), w, cfg, &f);
            double ref = *r.lebesgue_ref;
            double err = std::max(std::fabs(r.report.finest().upper - ref), std::fabs(r.report.finest().lower - ref));
            worst = std::max(worst, err);
            out.check(err <= kDensityTol, f.name + " on " + text);
        }
    out.detail << "25 cases, max error " << fmt(worst) << " ";
    for (const char* text : {"{}", "{1/2}", "{0}+{1}"}) {
        DensityReport r = density_integral(stieltjes(fs[1]), MeasurableSet::parse(text), w, cfg);
        out.check(r.report.finest().upper == 0.0 && r.report.finest().lower == 0.0, "null set " + std::string(text));
    }
    Fixture left = fixture("density_left_limit");
    DensityReport r = density_integral(left.g, MeasurableSet::parse("[0,1]"), left.region, cfg);
    out.detail << "left-limit fixture " << r.report.verdict.str();
    out.check(std::fabs(r.report.finest().upper - 1.0) <= kExactTol, "left-limit upper 1");
    out.check(std::fabs(r.report.finest().lower) <= kExactTol, "left-limit lower 0");
}

// 10: sign tables, span, identity (10), determinant identity, continuity bound.
void walsh_criterion(Outcome& out, const AcceptanceOptions&) {
    for (int n = 1; n <= 12; ++n) {
        auto t = sign_table(n);
        OrthogonalityReport orth = orthogonality_check(*t);
        out.check(orth.max_off_diagonal == 0 && orth.diagonal_is_size, "orthogonality at stage " + std::to_string(n));
        out.check(is_symmetric(*t), "symmetry at stage " + std::to_string(n));
    }
    for (int n = 1; n <= kMaxSpanStage; ++n) {
        SpanReport s = span_check(*sign_table(n));
        out.check(s.determinant_nonzero && s.unit_rows_solvable, "span at stage " + std::to_string(n));
    }
    out.detail << "tables 1..12 orthogonal and symmetric, span 1..8 ";

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    auto random_step = [&](int stage) {
        StepFunction f{stage, {}};
        for (std::size_t j = 0; j < (std::size_t{1} << (stage - 1)); ++j) f.values.push_back(Rational(num(rng), den(rng)));
        return f;
    };
    Rational worst_identity = 0;
    for (int trial = 0; trial < 5; ++trial) {
        SetFunctional g = step_integral(random_step(4), "w");
        StepFunction f = random_step(8);
        for (int stage = 1; stage <= 8; ++stage) worst_identity = std::max(worst_identity, pf_identity_residual(g, f, stage));
    }
    out.detail << "identity residual " << worst_identity.str() << " ";
    out.check(worst_identity == 0, "identity residual exact");

    std::uniform_real_distribution<double> unit(0.05, 1.0), signed_unit(-1.0, 1.0);
    double worst_det = 0.0;
    for (int n = 1; n <= 8; ++n) {
        std::vector<double> g(n), m(n);
        std::vector<Rational> gq(n), mq(n);
        for (int i = 0; i < n; ++i) {
            g[i] = signed_unit(rng);
            m[i] = unit(rng);
            gq[i] = Rational(num(rng), den(rng));
            mq[i] = Rational(den(rng), 10);
        }
        worst_det = std::max(worst_det, determinant_identity_check(g, m, 1.5).relative_residual);
        out.check(determinant_identity_residual(gq, mq, Rational(3, 2)) == 0, "exact determinant identity n=" + std::to_string(n));
    }
    out.detail << "determinant residual " << fmt(worst_det) << " ";
    out.check(worst_det <= kDeterminantTol, "determinant identity");

    ContinuityReport cb = continuity_bound(polynomial_integral({0, 2}, "2x"), {}, kFinestLevel);
    double gap = 4.0 / 3.0 - cb.bound;
    bool rising = true;
    for (std::size_t k = 1; k < cb.trace.size(); ++k) rising = rising && cb.trace[k].bound >= cb.trace[k - 1].bound;
    out.detail << "continuity bound " << fmt(cb.bound);
    out.check(gap >= 0 && gap <= kContinuityTol && rising, "continuity bound approaches 4/3 from below");
}

std::string bundle(int threads) {
    AcceptanceOptions o;
    o.threads = threads;
    SearchConfig cfg = base_config(o);
    Json doc = Json::array();
    Fixture saks = fixture("saks_A_counterexample");
    doc.push_back(to_json(estimate_norm_limits(saks.g, saks.region, cfg)));
    doc.push_back(to_json(estimate_sigma_limit(fixture("origin_indicator").g, fixture("origin_indicator").region, cfg)));
    Fixture blocks = fixture("dyadic_blocks");
    doc.push_back(to_json(variation(blocks.g, blocks.region, cfg)));
    PlanarFixture sq = planar_fixture("centred_squares");
    doc.push_back(to_json(estimate_norm_limits_2d(sq.g, sq.region, PlanarMode::extended, planar_config(o))));
    return doc.dump();
}

std::string capture(const std::string& command) {
    std::string out;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
    if (!pipe) throw Error("cannot run " + command);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe.get())) > 0) out.append(buf, n);
    return out;
}

// 11: identical bytes across repeated and threaded runs.
void determinism(Outcome& out, const AcceptanceOptions& o) {
    std::string serial = bundle(1), again = bundle(1), threaded = bundle(4);
    out.detail << "report bundle " << serial.size() << " bytes ";
    out.check(serial == again, "repeat run identical");
    out.check(serial == threaded, "4 threads identical to 1");
    if (o.cli_path.empty()) {
        out.detail << "(command line not checked)";
        return;
    }
    std::string cmd = o.cli_path + " verify --criteria 1,5,10 --threads 4 --format json 2>/dev/null";
    std::string first = capture(cmd), second = capture(cmd);
    out.detail << "verify output " << first.size() << " bytes twice";
    out.check(!first.empty() && first == second, "verify output identical");
}

using Body = std::function<void(Outcome&, const AcceptanceOptions&)>;

struct Entry {
    const char* name;
    Body body;
};

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries{
        {"saks_counterexample", saks},       {"bracket_exactness", bracket_exactness},
        {"k_convention_limits", k_convention}, {"inequality_chain", inequality_chain},
        {"planar_gap", planar_gap},            {"fubini_chain", fubini},
        {"variation", variation_criterion},    {"absolute_continuity", absolute_continuity},
        {"density", density_criterion},        {"sign_tables", walsh_criterion},
        {"determinism", determinism}};
    return entries;
}

}  // namespace

std::string criterion_name(int id) {
    if (id < 1 || id > kCriterionCount) throw ParseError("no criterion " + std::to_string(id));
    return registry()[id - 1].name;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    CriterionResult r{id, criterion_name(id), false, ""};
    Outcome out;
    try {
        registry()[id - 1].body(out, options);
        r.pass = out.pass;
    } catch (const std::exception& e) {
        out.detail << "error: " << e.what();
        r.pass = false;
    }
    r.detail = out.detail.str();
    while (!r.detail.empty() && r.detail.back() == ' ') r.detail.pop_back();
    for (std::size_t k = 0; k < out.failures.size() && k < 5; ++k) r.detail += (k ? "; " : " | failed: ") + out.failures[k];
    if (out.failures.size() > 5) r.detail += "; +" + std::to_string(out.failures.size() - 5) + " more";
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& options) {
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, options));
    return out;
}

std::string format_result(const CriterionResult& r) {
    return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace ivfn
