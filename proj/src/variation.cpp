#include "ivfn/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ivfn/candidate_pool.hpp"
#include "ivfn/errors.hpp"

namespace ivfn {
namespace {

double finest_var(const IntervalFunction& abs_g, const Region& region, SearchConfig cfg, int budget) {
    cfg.hint_budget = budget;
    cfg.e_schedule = {cfg.e_schedule.back()};
    return estimate_norm_limits(abs_g, region, cfg).finest().upper;
}

const Span* closed_component(const Region& region, const Dyadic& y) {
    for (const Span& c : region.components())
        if (c.lo <= y && y <= c.hi) return &c;
    return nullptr;
}

std::vector<Dyadic> cell_points(const Span& s, int level) {
    std::vector<Dyadic> out{s.lo};
    for (std::int64_t k = s.lo.ceil_at(level); k <= s.hi.floor_at(level); ++k) out.emplace_back(k, level);
    out.push_back(s.hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct Cell {
    Interval best;
    double value;
    Dyadic measure;
};

// Greedy pack of one sign from non-overlapping cells, by value per measure.
Pack greedy(std::vector<Cell> cells, const Dyadic& budget) {
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return std::fabs(a.value) / a.measure.to_double() > std::fabs(b.value) / b.measure.to_double();
    });
    Pack p;
    for (const Cell& c : cells) {
        if (p.intervals.size() >= kMaxPackIntervals) break;
        if (p.measure + c.measure > budget) continue;
        p.intervals.push_back(c.best);
        p.measure += c.measure;
        p.sum += c.value;
    }
    std::sort(p.intervals.begin(), p.intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
    return p;
}

}  // namespace

VariationReport variation(const IntervalFunction& g, const Region& region, const SearchConfig& cfg,
                          bool with_j_table) {
    cfg.validate();
    VariationReport rep;
    IntervalFunction abs_g = abs(g);
    rep.var = estimate_norm_limits(abs_g, region, cfg);
    rep.var.quantity = "variation";
    LimitReport plain = estimate_norm_limits(g, region, cfg);
    for (const LevelEstimate& l : plain.levels) rep.a_levels.push_back(std::max(std::fabs(l.upper), std::fabs(l.lower)));
    rep.a_r = rep.a_levels.back();

    for (int b : kVariationProbeBudgets) rep.probes.push_back({b, finest_var(abs_g, region, cfg, b)});
    double d1 = rep.probes[1].var - rep.probes[0].var;
    double d2 = rep.probes[2].var - rep.probes[1].var;
    bool budget_growth = d1 > cfg.tol && d2 >= d1;

    bool level_growth = false;
    const auto& lv = rep.var.levels;
    if (lv.size() >= 3 && lv.back().upper > 1e6) {
        std::size_t n = lv.size();
        level_growth = lv[n - 1].upper >= 2 * lv[n - 2].upper && lv[n - 2].upper >= 2 * lv[n - 3].upper;
    }
    bool infinite = rep.var.verdict.kind == VerdictKind::diverging || std::isinf(rep.var.finest().upper);
    rep.bounded = !(budget_growth || level_growth || infinite);
    if (!rep.bounded) {
        rep.var.verdict.kind = VerdictKind::diverging;
        rep.var.verdict.value = kInf;
    }

    if (with_j_table)
        for (const Dyadic& y : scan_points(g, region, cfg)) rep.j_table.emplace_back(y, j_singularity(g, region, y, cfg));
    return rep;
}

double j_singularity(const IntervalFunction& g, const Region& region, const Dyadic& y, const SearchConfig& cfg) {
    cfg.validate();
    const Span* comp = closed_component(region, y);
    if (!comp) throw PointOutsideRegion(y.str() + " is outside " + region.str());
    const Dyadic& d = cfg.e_schedule.back();
    Region local = Region::interval(std::max(comp->lo, y - d), std::min(comp->hi, y + d));

    SearchConfig local_cfg = cfg;
    for (const Triple& t : defect_triples(g, region, y, d, cfg)) {
        local_cfg.extra_hints.push_back(Hint{{t.x, t.z}, {Span{t.x, t.z}}});
        local_cfg.extra_hints.push_back(Hint{{t.x, t.y, t.z}, {Span{t.x, t.y}, Span{t.y, t.z}}});
    }
    VariationReport v = variation(g, local, local_cfg);
    return v.bounded ? v.var.finest().upper : kInf;
}

Pack evaluate_pack(const IntervalFunction& g, const std::vector<Interval>& intervals) {
    Pack p;
    p.intervals = intervals;
    std::sort(p.intervals.begin(), p.intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo() < b.lo(); });
    for (std::size_t i = 0; i < p.intervals.size(); ++i) {
        if (i > 0 && p.intervals[i].lo() < p.intervals[i - 1].hi())
            throw NotContained("pack intervals overlap at " + p.intervals[i].str());
        p.measure += p.intervals[i].length();
        p.sum = ext_add(p.sum, g(p.intervals[i]));
    }
    return p;
}

AcReport is_absolutely_continuous(const IntervalFunction& g, const Region& region, const SearchConfig& cfg,
                                  const std::vector<std::vector<Interval>>& extra_families) {
    cfg.validate();
    constexpr int kCellLevel = 14;
    std::vector<std::vector<Cell>> positive, negative;
    auto add_family = [&](const std::vector<Span>& spans) {
        std::vector<Cell> pos, neg;
        for (const Span& s : spans) {
            Choice c = choose_variants(g, s.lo, s.hi, kAllVariants);
            if (c.max > 0) pos.push_back({Interval::from_variant(s.lo, s.hi, c.max_variant), c.max, s.length()});
            if (c.min < 0) neg.push_back({Interval::from_variant(s.lo, s.hi, c.min_variant), c.min, s.length()});
        }
        positive.push_back(std::move(pos));
        negative.push_back(std::move(neg));
    };

    std::vector<Span> grid;
    for (const Span& comp : region.components()) {
        std::vector<Dyadic> pts = cell_points(comp, kCellLevel);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) grid.push_back({pts[i], pts[i + 1]});
    }
    add_family(grid);
    if (cfg.use_special_points) {
        std::vector<Dyadic> special = normalize_points(region, g.special_points(region, cfg.hint_budget));
        add_family(gaps(region, special));
    }
    for (const auto& fam : extra_families) {
        std::vector<Span> spans;
        for (const Interval& i : fam) spans.push_back({i.lo(), i.hi()});
        add_family(spans);
    }

    AcReport rep;
    for (int k = 4; k <= kAcFinestBudget; ++k) {
        AcLevel lvl;
        lvl.budget = Dyadic::pow2(-k);
        bool first = true;
        for (std::size_t f = 0; f < positive.size(); ++f) {
            Pack p = greedy(positive[f], lvl.budget);
            Pack n = greedy(negative[f], lvl.budget);
            for (Pack* cand : {&p, &n}) {
                double v = std::fabs(cand->sum);
                if (first || v > lvl.best) {
                    lvl.best = v;
                    lvl.pack = *cand;
                    first = false;
                }
            }
        }
        rep.trace.push_back(std::move(lvl));
    }
    rep.absolutely_continuous = rep.trace.back().best < kAcThreshold;
    return rep;
}

std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::increases:
            return "increases";
        case Monotonicity::decreases:
            return "decreases";
        case Monotonicity::both:
            return "both";
        case Monotonicity::neither:
            return "neither";
    }
    return "";
}

MonotoneReport monotone_on_subdivision(const IntervalFunction& g, const Region& region, std::size_t samples,
                                       std::uint64_t seed) {
    constexpr int kLevel = 20;
    constexpr double kTol = 1e-12;
    std::mt19937_64 rng(seed);
    MonotoneReport rep;
    const auto& comps = region.components();
    if (comps.empty()) return rep;
    std::uniform_int_distribution<std::size_t> pick(0, comps.size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        const Span& c = comps[pick(rng)];
        std::int64_t k0 = c.lo.ceil_at(kLevel);
        std::int64_t k1 = c.hi.floor_at(kLevel);
        if (k1 - k0 < 2) continue;
        std::uniform_int_distribution<std::int64_t> at(k0, k1);
        std::int64_t a = at(rng), b = at(rng), d = at(rng);
        std::int64_t ks[3] = {a, b, d};
        std::sort(ks, ks + 3);
        if (ks[0] == ks[1] || ks[1] == ks[2]) continue;
        Dyadic x(ks[0], kLevel), y(ks[1], kLevel), z(ks[2], kLevel);
        for (int outer = 0; outer < 4; ++outer) {
            Side left = (outer & 2) ? Side::closed : Side::open;
            Side right = (outer & 1) ? Side::closed : Side::open;
            double whole = g(Interval(x, z, left, right));
            for (int junction = 0; junction < 4; ++junction) {
                Side a_end = (junction & 2) ? Side::closed : Side::open;
                Side b_start = (junction & 1) ? Side::closed : Side::open;
                double parts = ext_add(g(Interval(x, y, left, a_end)), g(Interval(y, z, b_start, right)));
                double diff = ext_sub(parts, whole);
                rep.worst_increase = std::max(rep.worst_increase, diff);
                rep.worst_decrease = std::max(rep.worst_decrease, -diff);
                ++rep.checks;
            }
        }
    }
    bool inc = rep.worst_decrease <= kTol;  // splitting never lowers the sum
    bool dec = rep.worst_increase <= kTol;
    rep.verdict = inc && dec ? Monotonicity::both
                  : inc      ? Monotonicity::increases
                  : dec      ? Monotonicity::decreases
                             : Monotonicity::neither;
    return rep;
}

VariationSplit variation_split(const IntervalFunction& g, const Interval& j, const SearchConfig& cfg) {
    cfg.validate();
    Span whole{j.lo(), j.hi()};
    constexpr int kMaxLevel = 12;
    for (int level = 0; level <= 6; ++level) {
        std::vector<Dyadic> pts = cell_points(whole, level);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            if (bracket_spread(g, pts[i], pts[i + 1]) > cfg.tol)
                throw BracketDependent(g.name() + " depends on brackets on " + pts[i].str() + "," + pts[i + 1].str());
    }
    VariationSplit out;
    out.total = g(j);
    auto scan = [&](const std::vector<Dyadic>& pts) {
        double pos = 0.0, neg = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double v = g(Interval(pts[i], pts[i + 1], Side::closed, Side::closed));
            if (v > 0) pos += v;
            if (v < 0) neg -= v;
        }
        out.upper_positive = std::max(out.upper_positive, pos);
        out.lower_negative = std::max(out.lower_negative, neg);
    };
    int first = std::max(0, grid_level(whole.length()) - 1);
    for (int level = first; level <= std::max(first, kMaxLevel); ++level) scan(cell_points(whole, level));
    if (cfg.use_special_points) {
        Region r = Region::interval(whole.lo, whole.hi);
        scan(normalize_points(r, g.special_points(r, cfg.hint_budget)));
    }
    out.upper_negative = out.upper_positive - out.total;
    out.lower_positive = out.lower_negative + out.total;
    return out;
}

}  // namespace ivfn
