#include "ivfn/interval_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ivfn/errors.hpp"

namespace ivfn {

double ext_add(double a, double b) {
    if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0)) throw IndeterminateForm("inf - inf in a sum");
    return a + b;
}

double ext_sub(double a, double b) {
    if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) throw IndeterminateForm("inf - inf in a difference");
    return a - b;
}

IntervalFunction::IntervalFunction(std::string name, Eval eval, FunctionFlags flags, HintSource hints)
    : name_(std::move(name)), eval_(std::make_shared<const Eval>(std::move(eval))), flags_(flags), hints_(std::move(hints)) {}

std::vector<Hint> IntervalFunction::hints(const Region& region, int budget) const {
    if (!hints_) return {};
    return hints_(region, budget);
}

std::vector<Dyadic> IntervalFunction::special_points(const Region& region, int budget) const {
    std::vector<Dyadic> out;
    for (const Hint& h : hints(region, budget))
        for (const Dyadic& p : h.points)
            if (region.contains(p)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

IntervalFunction IntervalFunction::renamed(std::string name) const {
    IntervalFunction g = *this;
    g.name_ = std::move(name);
    return g;
}

IntervalFunction IntervalFunction::with_hints(HintSource hints) const {
    IntervalFunction g = *this;
    g.hints_ = std::move(hints);
    return g;
}

IntervalFunction IntervalFunction::with_flags(FunctionFlags flags) const {
    IntervalFunction g = *this;
    g.flags_ = flags;
    return g;
}

IntervalFunction length_function() {
    return IntervalFunction("length", [](const Interval& i) { return i.length().to_double(); }, {true, true, true});
}

IntervalFunction constant_zero() {
    return IntervalFunction("zero", [](const Interval&) { return 0.0; }, {true, true, true});
}

IntervalFunction stieltjes(const PointFunction& f) {
    auto eval = [f](const Interval& i) { return f(i.hi()) - f(i.lo()); };
    HintSource hints;
    if (!f.breakpoints.empty()) {
        hints = [pts = f.breakpoints](const Region&, int) { return std::vector<Hint>{Hint{pts, {}}}; };
    }
    return IntervalFunction("S(" + f.name + ")", eval, {true, true, false}, hints);
}

namespace {

HintSource merged_hints(const IntervalFunction& a, const IntervalFunction& b) {
    if (!a.has_hints() && !b.has_hints()) return {};
    return [a, b](const Region& r, int budget) {
        std::vector<Hint> out = a.hints(r, budget);
        std::vector<Hint> more = b.hints(r, budget);
        out.insert(out.end(), more.begin(), more.end());
        return out;
    };
}

}  // namespace

IntervalFunction operator+(const IntervalFunction& a, const IntervalFunction& b) {
    FunctionFlags f{a.flags().additive && b.flags().additive,
                    a.flags().bracket_independent && b.flags().bracket_independent,
                    a.flags().continuous && b.flags().continuous};
    return IntervalFunction("(" + a.name() + "+" + b.name() + ")",
                            [a, b](const Interval& i) { return ext_add(a(i), b(i)); }, f, merged_hints(a, b));
}

IntervalFunction scale(double c, const IntervalFunction& g) {
    auto eval = [c, g](const Interval& i) {
        double v = g(i);
        if (c == 0.0) return 0.0;
        return c * v;
    };
    HintSource hints;
    if (g.has_hints()) hints = [g](const Region& r, int budget) { return g.hints(r, budget); };
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return IntervalFunction(std::string(buf) + "*" + g.name(), eval, g.flags(), hints);
}

IntervalFunction abs(const IntervalFunction& g) {
    HintSource hints;
    if (g.has_hints()) hints = [g](const Region& r, int budget) { return g.hints(r, budget); };
    FunctionFlags f{false, g.flags().bracket_independent, g.flags().continuous};
    return IntervalFunction("|" + g.name() + "|", [g](const Interval& i) { return std::fabs(g(i)); }, f, hints);
}

IntervalFunction with_fixed_conventions(const IntervalFunction& g, ConventionRule rule, std::string name) {
    auto eval = [g, rule](const Interval& i) {
        Side left = i.left();
        Side right = i.right();
        if (auto c = rule(i.lo())) left = c->second ? Side::closed : Side::open;
        if (auto c = rule(i.hi())) right = c->first ? Side::closed : Side::open;
        return g(i.with_sides(left, right));
    };
    HintSource hints;
    if (g.has_hints()) hints = [g](const Region& r, int budget) { return g.hints(r, budget); };
    return IntervalFunction(std::move(name), eval, {false, false, g.flags().continuous}, hints);
}

double additivity_violation(const IntervalFunction& g, const Dyadic& x, const Dyadic& y, const Dyadic& z) {
    double worst = 0.0;
    for (int outer = 0; outer < 4; ++outer) {
        Side left = (outer & 2) ? Side::closed : Side::open;
        Side right = (outer & 1) ? Side::closed : Side::open;
        double whole = g(Interval(x, z, left, right));
        for (int j = 0; j < 2; ++j) {
            Side a_end = j == 0 ? Side::closed : Side::open;
            Side b_start = j == 0 ? Side::open : Side::closed;
            double parts = ext_add(g(Interval(x, y, left, a_end)), g(Interval(y, z, b_start, right)));
            double diff = std::fabs(ext_sub(parts, whole));
            if (std::isnan(diff)) diff = kInf;
            worst = std::max(worst, diff);
        }
    }
    return worst;
}

double bracket_spread(const IntervalFunction& g, const Dyadic& lo, const Dyadic& hi) {
    double mn = kInf;
    double mx = -kInf;
    for (int v = 0; v < 4; ++v) {
        double val = g(Interval::from_variant(lo, hi, v));
        mn = std::min(mn, val);
        mx = std::max(mx, val);
    }
    return mx == mn ? 0.0 : mx - mn;
}

}  // namespace ivfn
