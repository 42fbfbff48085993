#include "ivfn/integrator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ivfn/candidate_pool.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/parallel.hpp"

namespace ivfn {
namespace {

std::string number(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<Dyadic> SearchConfig::default_schedule(int first, int last) {
    std::vector<Dyadic> out;
    for (int k = first; k <= last; ++k) out.push_back(Dyadic::pow2(-k));
    return out;
}

void SearchConfig::validate() const {
    if (e_schedule.empty()) throw ParseError("empty e schedule");
    for (std::size_t i = 0; i < e_schedule.size(); ++i) {
        if (!(e_schedule[i] > Dyadic(0))) throw ParseError("e schedule must be positive");
        if (i > 0 && !(e_schedule[i] < e_schedule[i - 1])) throw ParseError("e schedule must strictly decrease");
    }
    if (grid_density < 0) throw ParseError("grid density must be >= 0");
    if (hint_budget < 0) throw ParseError("hint budget must be >= 0");
    if (threads < 1) throw ParseError("threads must be >= 1");
    if (!(tol >= 0.0)) throw ParseError("tolerance must be >= 0");
}

int grid_level(const Dyadic& e) {
    if (!(e > Dyadic(0))) throw ParseError("norm bound must be positive");
    for (int j = -Dyadic::kMaxExponent; j <= Dyadic::kMaxExponent; ++j)
        if (Dyadic::pow2(-j) < e) return j;
    throw BudgetExceeded("norm bound " + e.str() + " is too small");
}

std::string Verdict::str() const {
    switch (kind) {
        case VerdictKind::converged:
            return "converged(" + number(value) + ")";
        case VerdictKind::diverging:
            return std::string("diverging(") + (value > 0 ? "+inf" : "-inf") + ")";
        case VerdictKind::oscillating:
            return "oscillating(" + number(upper) + ", " + number(lower) + ")";
    }
    return "";
}

Verdict classify(const std::vector<LevelEstimate>& levels, double tol) {
    Verdict v;
    v.tol = tol;
    if (levels.empty()) return v;
    const LevelEstimate& f = levels.back();
    v.upper = f.upper;
    v.lower = f.lower;
    if (f.upper > kDivergenceThreshold || f.lower > kDivergenceThreshold) {
        v.kind = VerdictKind::diverging;
        v.value = kInf;
        return v;
    }
    if (f.upper < -kDivergenceThreshold || f.lower < -kDivergenceThreshold) {
        v.kind = VerdictKind::diverging;
        v.value = -kInf;
        return v;
    }
    bool stable = true;
    if (levels.size() >= 2) {
        const LevelEstimate& p = levels[levels.size() - 2];
        stable = std::fabs(f.upper - p.upper) <= tol && std::fabs(f.lower - p.lower) <= tol;
    }
    if (f.upper - f.lower <= tol && stable) {
        v.kind = VerdictKind::converged;
        v.value = f.upper;
    } else {
        v.kind = VerdictKind::oscillating;
    }
    return v;
}

double riemann_sum(const IntervalFunction& g, const Division& d) {
    double s = 0.0;
    for (const Interval& i : d.intervals()) s = ext_add(s, g(i));
    return s;
}

ExtremalResult extremal_sum(const IntervalFunction& g, const std::vector<Dyadic>& points, const Region& region,
                            Sense sense, const std::vector<PointConvention>& fixed) {
    std::vector<Dyadic> pts = normalize_points(region, points);
    ConventionTable table(fixed);
    std::vector<Interval> ivs;
    double s = 0.0;
    for (const Span& sp : gaps(region, pts)) {
        Choice c = choose_variants(g, sp.lo, sp.hi, table.mask(sp.lo, sp.hi));
        bool hi = sense == Sense::max;
        s = ext_add(s, hi ? c.max : c.min);
        ivs.push_back(Interval::from_variant(sp.lo, sp.hi, hi ? c.max_variant : c.min_variant));
    }
    return ExtremalResult{s, Division(region, std::move(ivs))};
}

ExtremalResult extremal_sum_exhaustive(const IntervalFunction& g, const std::vector<Dyadic>& points,
                                       const Region& region, Sense sense) {
    std::vector<Division> all = all_bracket_assignments(region, points);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        double v = riemann_sum(g, all[k]);
        bool better = sense == Sense::max ? v > best_value : v < best_value;
        if (k == 0 || better) {
            best = k;
            best_value = v;
        }
    }
    return ExtremalResult{best_value, all[best]};
}

LimitChain estimate_limit_chain(const IntervalFunction& g, const Region& region,
                                const std::vector<PointConvention>& permanent, const SearchConfig& cfg) {
    CandidatePool pool(g, region, cfg, permanent);
    LimitChain chain{pool.report("norm", false, false), pool.report("all_conventions", true, false),
                     pool.report("fixed_conventions", true, true)};
    if (permanent.empty()) {
        chain.all_conventions = chain.norm;
        chain.fixed = chain.norm;
    }
    return chain;
}

LimitReport estimate_norm_limits(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    if (cfg.convention_mode == ConventionMode::fixed && !cfg.fixed_conventions.empty()) {
        CandidatePool pool(g, region, cfg, cfg.fixed_conventions, {}, false);
        return pool.report("norm (fixed conventions)", true, true);
    }
    CandidatePool pool(g, region, cfg);
    return pool.report("norm", false, false);
}

LimitReport estimate_k_limits(const IntervalFunction& g, const Region& region,
                              const std::vector<PointConvention>& permanent, const SearchConfig& cfg) {
    if (permanent.empty()) return estimate_norm_limits(g, region, cfg);
    CandidatePool pool(g, region, cfg, permanent, {}, false);
    return pool.report("k", true, true);
}

LimitReport estimate_k_prime_limits(const IntervalFunction& g, const Region& region,
                                    const std::vector<Dyadic>& permanent, const SearchConfig& cfg) {
    if (permanent.empty()) return estimate_norm_limits(g, region, cfg);
    CandidatePool pool(g, region, cfg, {}, permanent, false);
    return pool.report("k_prime", true, false);
}

double additivity_defect(const IntervalFunction& g, const Dyadic& x, const Dyadic& y, const Dyadic& z) {
    if (!(x < y && y < z)) throw UnsortedPoints("defect needs x < y < z");
    Choice whole = choose_variants(g, x, z, kAllVariants);
    Choice left = choose_variants(g, x, y, kAllVariants);
    Choice right = choose_variants(g, y, z, kAllVariants);
    double a = ext_sub(whole.max, ext_add(left.min, right.min));
    double b = ext_sub(ext_add(left.max, right.max), whole.min);
    return std::max(a, b);
}

namespace {

const Span* component_of(const Region& region, const Dyadic& y) {
    for (const Span& c : region.components())
        if (c.lo < y && y < c.hi) return &c;
    return nullptr;
}

std::vector<Dyadic> nearby(const std::vector<Dyadic>& special, const Dyadic& lo, const Dyadic& hi, bool below,
                           std::size_t cap) {
    // points strictly inside (lo, hi), nearest to y first
    auto first = std::upper_bound(special.begin(), special.end(), lo);
    auto last = std::lower_bound(special.begin(), special.end(), hi);
    std::vector<Dyadic> out(first, last);
    if (below) std::reverse(out.begin(), out.end());
    if (out.size() > cap) out.resize(cap);
    return out;
}

std::vector<Triple> triples_with(const std::vector<Dyadic>& special, const Region& region, const Dyadic& y,
                                 const Dyadic& e) {
    std::vector<Triple> out;
    const Span* comp = component_of(region, y);
    if (!comp) return out;
    std::vector<Dyadic> xs, zs;
    for (int k = 2; k <= 5; ++k) {
        Dyadic off = e * Dyadic::pow2(-k);
        if (y - off >= comp->lo) xs.push_back(y - off);
        if (y + off <= comp->hi) zs.push_back(y + off);
    }
    Dyadic reach = e.half();
    for (const Dyadic& p : nearby(special, std::max(comp->lo, y - reach), y, true, 8))
        if (p >= comp->lo && y - p < reach) xs.push_back(p);
    for (const Dyadic& p : nearby(special, y, std::min(comp->hi, y + reach), false, 8))
        if (p <= comp->hi && p - y < reach) zs.push_back(p);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    for (const Dyadic& x : xs)
        for (const Dyadic& z : zs)
            if (z - x < e) out.push_back(Triple{x, y, z});
    return out;
}

std::vector<Dyadic> special_for_scan(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    if (!cfg.use_special_points) return {};
    std::vector<Dyadic> out;
    std::vector<Hint> hints = g.hints(region, cfg.hint_budget);
    hints.insert(hints.end(), cfg.extra_hints.begin(), cfg.extra_hints.end());
    for (const Hint& h : hints)
        for (const Dyadic& p : h.points)
            if (region.contains(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

DefectReport defect_with(const IntervalFunction& g, const std::vector<Dyadic>& special, const Region& region,
                         const Dyadic& y, const SearchConfig& cfg) {
    DefectReport rep;
    rep.y = y;
    std::size_t n = cfg.e_schedule.size();
    rep.levels.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Dyadic& e = cfg.e_schedule[k];
        DefectLevel& lvl = rep.levels[k];
        lvl.e = e;
        std::vector<Triple> ts = triples_with(special, region, y, e);
        Triple worst{y, y, y};
        bool have = false;
        for (const Triple& t : ts) {
            Choice left = choose_variants(g, t.x, t.y, kAllVariants);
            Choice right = choose_variants(g, t.y, t.z, kAllVariants);
            Choice whole = choose_variants(g, t.x, t.z, kAllVariants);
            double d = std::max(ext_sub(whole.max, ext_add(left.min, right.min)),
                                ext_sub(ext_add(left.max, right.max), whole.min));
            double spread = ext_sub(ext_add(left.max, right.max), ext_add(left.min, right.min));
            if (!have || d > lvl.c) {
                worst = t;
                lvl.c = d;
                have = true;
            }
            lvl.sigma = std::max({lvl.sigma, d, spread});
        }
        if (k + 1 == n) {
            rep.finest_triples = ts;
            rep.worst = worst;
        }
    }
    // C(y;e) is a supremum over shrinking families: make it monotone.
    for (std::size_t k = n - 1; k-- > 0;) {
        rep.levels[k].c = std::max(rep.levels[k].c, rep.levels[k + 1].c);
        rep.levels[k].sigma = std::max(rep.levels[k].sigma, rep.levels[k + 1].sigma);
    }
    rep.c = rep.levels.back().c;
    rep.sigma = rep.levels.back().sigma;
    return rep;
}

}  // namespace

std::vector<Triple> defect_triples(const IntervalFunction& g, const Region& region, const Dyadic& y,
                                   const Dyadic& e, const SearchConfig& cfg) {
    return triples_with(special_for_scan(g, region, cfg), region, y, e);
}

DefectReport defect_at(const IntervalFunction& g, const Region& region, const Dyadic& y, const SearchConfig& cfg) {
    cfg.validate();
    return defect_with(g, special_for_scan(g, region, cfg), region, y, cfg);
}

std::vector<Dyadic> scan_points(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    std::vector<Dyadic> out;
    int level = grid_level(cfg.e_schedule.front());
    for (const Span& c : region.components())
        for (std::int64_t k = c.lo.ceil_at(level); k <= c.hi.floor_at(level); ++k) {
            Dyadic p(k, level);
            if (c.lo < p && p < c.hi) out.push_back(p);
        }
    if (cfg.use_special_points) {
        std::vector<Dyadic> special;
        std::vector<Hint> hints = g.hints(region, cfg.hint_budget);
        hints.insert(hints.end(), cfg.extra_hints.begin(), cfg.extra_hints.end());
        for (const Hint& h : hints) {
            if (h.points.size() > 4) continue;  // meshes, not isolated points
            for (const Dyadic& p : h.points)
                if (component_of(region, p)) special.push_back(p);
        }
        std::sort(special.begin(), special.end());
        special.erase(std::unique(special.begin(), special.end()), special.end());
        // A point closer than the finest norm bound to a boundary or to an
        // already kept point cannot be told apart from it at this scale.
        const Dyadic& resolution = cfg.e_schedule.back();
        std::vector<Dyadic> taken = out;
        std::vector<Dyadic> bounds = region.boundary_points();
        taken.insert(taken.end(), bounds.begin(), bounds.end());
        for (const Dyadic& p : special) {
            bool clear = std::all_of(taken.begin(), taken.end(),
                                     [&](const Dyadic& q) { return p == q || !(abs(p - q) < resolution); });
            bool seen = std::find(out.begin(), out.end(), p) != out.end();
            if (clear && !seen) {
                out.push_back(p);
                taken.push_back(p);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    constexpr std::size_t kMaxScan = 512;
    if (out.size() > kMaxScan) out.resize(kMaxScan);
    return out;
}

std::vector<DefectReport> singularity_scan(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    cfg.validate();
    std::vector<Dyadic> pts = scan_points(g, region, cfg);
    std::vector<Dyadic> special = special_for_scan(g, region, cfg);
    std::vector<DefectReport> all(pts.size());
    parallel_for(pts.size(), cfg.threads, [&](std::size_t i) { all[i] = defect_with(g, special, region, pts[i], cfg); });
    std::vector<DefectReport> out;
    for (DefectReport& r : all)
        if (r.c > cfg.tol) out.push_back(std::move(r));
    return out;
}

LimitReport estimate_sigma_limit(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    cfg.validate();
    std::vector<Dyadic> singular;
    for (const DefectReport& r : singularity_scan(g, region, cfg)) singular.push_back(r.y);

    std::size_t n = cfg.e_schedule.size();
    std::vector<LevelEstimate> raw(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Dyadic& e = cfg.e_schedule[k];
        int level = grid_level(e);
        std::vector<Dyadic> base = singular;
        for (const Span& c : region.components())
            for (std::int64_t i = c.lo.ceil_at(level); i <= c.hi.floor_at(level); ++i) base.emplace_back(i, level);
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());
        SearchConfig stage = cfg;
        stage.e_schedule = {e};
        CandidatePool pool(g, region, stage, {}, base, false);
        LimitReport r = pool.report("sigma", true, false, true);
        raw[k] = r.levels.front();
    }
    // Refinements of a finer base are refinements of every coarser one.
    LimitReport rep;
    rep.quantity = "sigma";
    rep.levels = raw;
    for (std::size_t k = n - 1; k-- > 0;) {
        LevelEstimate& cur = rep.levels[k];
        const LevelEstimate& next = rep.levels[k + 1];
        if (next.upper > cur.upper) {
            cur.upper = next.upper;
            cur.upper_witness = next.upper_witness;
        }
        if (next.lower < cur.lower) {
            cur.lower = next.lower;
            cur.lower_witness = next.lower_witness;
        }
    }
    rep.verdict = classify(rep.levels, cfg.tol);
    return rep;
}

double oscillation(const LimitReport& report) {
    if (report.levels.empty()) return 0.0;
    return ext_sub(report.finest().upper, report.finest().lower);
}

CauchyCheck cauchy_existence_check(const IntervalFunction& g, const Region& region, const SearchConfig& cfg) {
    LimitReport rep = estimate_norm_limits(g, region, cfg);
    CauchyCheck out;
    for (const LevelEstimate& l : rep.levels) out.gaps.emplace_back(l.e, ext_sub(l.upper, l.lower));
    out.exists = rep.verdict.kind == VerdictKind::converged;
    return out;
}

}  // namespace ivfn
