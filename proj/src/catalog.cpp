#include "ivfn/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivfn/errors.hpp"

namespace ivfn {
namespace {

using boost::multiprecision::cpp_int;

/// r >= 1 when x == 2^-r, else 0.
int inverse_power(const Dyadic& x) {
    if (x.numerator() == 1 && x.exponent() >= 1) return x.exponent();
    return 0;
}

Dyadic two_to_minus(int r) { return Dyadic(1, r); }

int clamp_budget(int budget, int cap) { return std::clamp(budget, 1, cap); }

// Piecewise-linear ramp on [1-2^-n, 1-2^-n-1]: 0 at the left end for even n,
// 1 for odd n, the other value at the right end.
double alternating_ramp_eval(double x) {
    if (x < 0.0) return 0.0;
    double d = 1.0 - x;
    if (d <= 0.0) return 0.0;
    int k = 0;
    double m = std::frexp(d, &k);
    int n = (m == 0.5) ? 1 - k : -k;
    double left = (n % 2 == 0) ? 0.0 : 1.0;
    double t = 2.0 - std::ldexp(d, n + 1);
    return left + (1.0 - 2.0 * left) * t;
}

double reciprocal_sawtooth_eval(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double k = std::floor(1.0 / x);
    auto value = [](double n) { return std::fmod(n, 2.0) == 1.0 ? 1.0 : 0.0; };
    double lo = 1.0 / (k + 1.0);
    double hi = 1.0 / k;
    if (x == hi) return value(k);
    double t = (x - lo) / (hi - lo);
    return value(k + 1.0) + (value(k) - value(k + 1.0)) * t;
}

/// b - a < a^3, exactly.
bool shorter_than_cube(const Dyadic& a, const Dyadic& b) {
    Dyadic len = b - a;
    if (a.exponent() <= 20 && a.exponent() >= 0 && a.numerator() < (std::int64_t{1} << 20)) return len < a * a * a;
    // len = q / 2^t, a = p / 2^s:  q 2^{3s} < p^3 2^t
    cpp_int p = a.numerator();
    cpp_int q = len.numerator();
    int s = a.exponent();
    int t = len.exponent();
    cpp_int lhs = q;
    cpp_int rhs = p * p * p;
    int shift = 3 * s - t;
    if (shift >= 0) lhs <<= shift;
    else rhs <<= -shift;
    return lhs < rhs;
}

Hint clear_span_hint(const Dyadic& lo, const Dyadic& hi) { return Hint{{lo, hi}, {Span{lo, hi}}}; }

// ---- fixtures ----

Fixture saks() {
    PointFunction f = alternating_ramp();
    auto eval = [f](const Interval& i) -> double {
        const Dyadic& a = i.lo();
        const Dyadic& b = i.hi();
        if (a >= Dyadic(0) && b < Dyadic(1)) return f(b) - f(a);
        if (a < Dyadic(1) && b > Dyadic(1)) {
            Dyadic d = Dyadic(1) - a;
            if (b - Dyadic(1) == d && d.numerator() == 1 && d.exponent() >= 0 && d.exponent() % 2 == 0) return 1.0;
        }
        return 0.0;
    };
    auto hints = [](const Region&, int budget) {
        std::vector<Hint> out;
        int n_max = clamp_budget(budget, 30);
        for (int n = 1; n <= n_max; ++n) {
            Dyadic d = two_to_minus(2 * n);
            out.push_back(clear_span_hint(Dyadic(1) - d, Dyadic(1) + d));
        }
        return out;
    };
    Fixture fx{"saks_A_counterexample",
               "ramp increments on [0,1), 1 on the symmetric spans 1-4^-n to 1+4^-n",
               IntervalFunction("saks_A_counterexample", eval, {false, true, false}, hints),
               Region::interval(0, 2),
               {{"upper(0,1)", 1.0, "largest ramp value reachable at a division point"},
                {"upper(1,2)", 0.0, "every interval right of 1 evaluates to 0"},
                {"upper(0,2)", 1.0, "one symmetric span plus a ramp telescope ending at a zero"},
                {"defect(1)", 1.0, "direct evaluation of the symmetric triples"}},
               {},
               {},
               std::nullopt};
    return fx;
}

Fixture origin_indicator() {
    auto eval = [](const Interval& i) { return i.contains(Dyadic(0)) ? 1.0 : 0.0; };
    auto hints = [](const Region&, int) { return std::vector<Hint>{Hint{{Dyadic(0)}, {}}}; };
    return Fixture{"origin_indicator",
                   "1 when the interval contains the origin, else 0",
                   IntervalFunction("origin_indicator", eval, {false, false, false}, hints),
                   Region::interval(-1, 1),
                   {{"lower", 0.0, "brackets )( at the origin"},
                    {"upper", 2.0, "brackets ][ at the origin (exhaustive bracket enumeration)"}},
                   {},
                   {},
                   std::nullopt};
}

std::vector<Dyadic> graded_mesh(const Dyadic& start, const Dyadic& stop) {
    std::vector<Dyadic> pts;
    Dyadic x = start;
    while (x < stop) {
        pts.push_back(x);
        int i = 0;
        while (two_to_minus(i) > x) ++i;  // 2^-i <= x < 2^-i+1
        x += two_to_minus(3 * i + 1);
    }
    pts.push_back(stop);
    return pts;
}

Fixture osc_left_limit() {
    PointFunction f = reciprocal_sawtooth();
    auto eval = [f](const Interval& i) -> double {
        if (i.lo() > Dyadic(0) && shorter_than_cube(i.lo(), i.hi())) return f(i.hi()) - f(i.lo());
        return 0.0;
    };
    auto hints = [](const Region& region, int budget) {
        std::vector<Hint> out;
        if (region.empty()) return out;
        Dyadic stop = region.hi();
        int k_max = clamp_budget(budget / 4, 6);
        for (int k = 2; k <= k_max; ++k) {
            Dyadic c = two_to_minus(k);
            if (!(c > region.lo() && c < stop)) continue;
            out.push_back(Hint{graded_mesh(c, stop), {}});
        }
        return out;
    };
    Region region = Region::interval(0, Dyadic(3, 2));
    return Fixture{"osc_left_limit",
                   "sawtooth increments (0 at 1/2n, 1 at 1/(2n+1)) on intervals shorter than the cube of their left end",
                   IntervalFunction("osc_left_limit", eval, {false, true, false}, hints),
                   region,
                   {{"upper(0,3/4)", reciprocal_sawtooth_eval(0.75), "single chain estimate: sawtooth value at 3/4"}},
                   {},
                   {},
                   std::nullopt};
}

double mass_sum(const Interval& i) {
    // sum of 2^-r (r >= 1) lying in the open span, plus closed endpoints
    const Dyadic& lo = i.lo();
    const Dyadic& hi = i.hi();
    double s = 0.0;
    // smallest r >= 1 with 2^-r < hi
    int r1 = 1;
    while (r1 <= 62 && !(two_to_minus(r1) < hi)) ++r1;
    if (r1 <= 62) {
        if (lo <= Dyadic(0)) {
            s += std::ldexp(1.0, -r1 + 1);
        } else {
            int r2 = r1 - 1;  // largest r with 2^-r > lo
            while (r2 + 1 <= 62 && two_to_minus(r2 + 1) > lo) ++r2;
            if (r2 >= r1) s += std::ldexp(1.0, -r1 + 1) - std::ldexp(1.0, -r2);
        }
    }
    if (i.left_closed() && inverse_power(lo) > 0) s += lo.to_double();
    if (i.right_closed() && inverse_power(hi) > 0) s += hi.to_double();
    return s;
}

Fixture k_convention_jump() {
    auto eval = [](const Interval& i) {
        double a = (i.lo() == Dyadic(0) && i.left_closed() && i.right_closed() && inverse_power(i.hi()) > 0) ? 1.0 : 0.0;
        return mass_sum(i) + a;
    };
    auto hints = [](const Region&, int budget) {
        std::vector<Hint> out;
        int r_max = clamp_budget(budget, 40);
        for (int r = 1; r <= r_max; ++r) out.push_back(Hint{{two_to_minus(r)}, {Span{Dyadic(0), two_to_minus(r)}}});
        return out;
    };
    ConventionRule rule = [](const Dyadic& x) -> std::optional<std::pair<bool, bool>> {
        if (x == Dyadic(0) || inverse_power(x) > 0) return std::make_pair(false, true);
        return std::nullopt;
    };
    std::vector<PointConvention> permanent{PointConvention{Dyadic(0), false, true}};
    for (int r = 1; r <= 10; ++r) permanent.push_back(PointConvention{two_to_minus(r), false, true});
    IntervalFunction g("k_convention_jump", eval, {false, false, false}, hints);
    return Fixture{"k_convention_jump",
                   "unit masses 2^-r counted by bracket membership, plus 1 on [0,2^-r]",
                   g,
                   Region::interval(0, 1),
                   {{"k_upper(g)", 2.0, "masses sum to 1 plus the closed initial interval"},
                    {"k_upper(h)", 1.0, "re-bracketed intervals carry only the masses"}},
                   permanent,
                   rule,
                   with_fixed_conventions(g, rule, "k_convention_jump^k")};
}

Fixture m_power_singularity() {
    auto eval = [](const Interval& i) {
        int r = inverse_power(i.hi());
        return (r > 0 && i.lo() == -i.hi()) ? 1.0 : 0.0;
    };
    auto hints = [](const Region&, int budget) {
        std::vector<Hint> out;
        int r_max = clamp_budget(budget, 60);
        for (int r = 1; r <= r_max; ++r) out.push_back(clear_span_hint(-two_to_minus(r), two_to_minus(r)));
        return out;
    };
    return Fixture{"m_power_singularity",
                   "1 on the symmetric spans -2^-i to 2^-i, else 0",
                   IntervalFunction("m_power_singularity", eval, {false, true, false}, hints),
                   Region::interval(-1, 1),
                   {{"c(0)", 1.0, "every splitting triple around 0 has defect 1"}},
                   {},
                   {},
                   std::nullopt};
}

Fixture dyadic_blocks() {
    auto eval = [](const Interval& i) {
        int r = inverse_power(i.lo());
        return (r > 0 && i.hi() == two_to_minus(r - 1)) ? 1.0 : 0.0;
    };
    auto hints = [](const Region&, int budget) {
        std::vector<Hint> out;
        int deepest = clamp_budget(budget, 60);
        for (int m = 1; m < deepest; ++m) {
            Hint h;
            for (int n = deepest; n >= m; --n) h.points.push_back(two_to_minus(n));
            h.keep_clear.push_back(Span{Dyadic(0), two_to_minus(m)});
            out.push_back(std::move(h));
        }
        return out;
    };
    return Fixture{"dyadic_blocks",
                   "1 on each block 2^-n to 2^-n+1, else 0",
                   IntervalFunction("dyadic_blocks", eval, {false, true, false}, hints),
                   Region::interval(0, 1),
                   {{"j(0)", kInf, "every neighbourhood of 0 holds unboundedly many blocks"},
                    {"c(0)", 0.0, "no block has 0 inside"}},
                   {},
                   {},
                   std::nullopt};
}

Fixture density_left_limit() {
    auto eval = [](const Interval& i) { return i.lo() == Dyadic(0) ? 1.0 : 0.0; };
    auto hints = [](const Region&, int) { return std::vector<Hint>{Hint{{Dyadic(0)}, {}}}; };
    return Fixture{"density_left_limit",
                   "1 on intervals starting at the origin, else 0",
                   IntervalFunction("density_left_limit", eval, {false, true, false}, hints),
                   Region::interval(-1, 1),
                   {{"density_upper(E=[0,1])", 1.0, "origin-started interval has full density"},
                    {"density_lower(E=[0,1])", 0.0, "origin as an interior point is never an interval start"}},
                   {},
                   {},
                   std::nullopt};
}

const std::map<std::string, std::function<Fixture()>, std::less<>>& registry() {
    static const std::map<std::string, std::function<Fixture()>, std::less<>> r{
        {"saks_A_counterexample", saks},       {"origin_indicator", origin_indicator},
        {"osc_left_limit", osc_left_limit},    {"k_convention_jump", k_convention_jump},
        {"m_power_singularity", m_power_singularity}, {"dyadic_blocks", dyadic_blocks},
        {"density_left_limit", density_left_limit},
    };
    return r;
}

}  // namespace

Fixture fixture(std::string_view name) {
    auto it = registry().find(name);
    if (it == registry().end()) throw UnknownFixture("unknown fixture: " + std::string(name));
    return it->second();
}

std::vector<std::string> fixture_names() {
    std::vector<std::string> out;
    for (const auto& [name, _] : registry()) out.push_back(name);
    return out;
}

PointFunction identity_function() { return polynomial({0.0, 1.0}, "x"); }

PointFunction polynomial(std::vector<double> coeffs, std::string name) {
    auto eval = [coeffs](double x) {
        double v = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
    };
    std::vector<double> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(coeffs[k] * static_cast<double>(k));
    auto deriv = [d](double x) {
        double v = 0.0;
        for (auto it = d.rbegin(); it != d.rend(); ++it) v = v * x + *it;
        return v;
    };
    return PointFunction{std::move(name), eval, deriv, {}};
}

PointFunction unit_step(const Dyadic& at) {
    double a = at.to_double();
    return PointFunction{"step(" + at.str() + ")", [a](double x) { return x > a ? 1.0 : 0.0; }, {}, {at}};
}

PointFunction alternating_ramp() { return PointFunction{"ramp", alternating_ramp_eval, {}, {}}; }

PointFunction reciprocal_sawtooth() { return PointFunction{"sawtooth", reciprocal_sawtooth_eval, {}, {}}; }

std::vector<Span> cantor_intervals(int depth) {
    // Exact ternary ends are k / 3^depth; round down to a multiple of 2^-40.
    std::int64_t pow3 = 1;
    for (int i = 0; i < depth; ++i) pow3 *= 3;
    std::vector<std::int64_t> starts{0};
    std::int64_t len = pow3;
    for (int level = 0; level < depth; ++level) {
        len /= 3;
        std::vector<std::int64_t> next;
        for (std::int64_t s : starts) {
            next.push_back(s);
            next.push_back(s + 2 * len);
        }
        starts = std::move(next);
    }
    auto round = [pow3](std::int64_t k) {
        cpp_int scaled = cpp_int(k) << 40;
        cpp_int q = scaled / pow3;
        return Dyadic(static_cast<std::int64_t>(q), 40);
    };
    std::vector<Span> out;
    for (std::int64_t s : starts) out.push_back(Span{round(s), round(s + len)});
    return out;
}

PointFunction cantor_staircase(int depth) {
    std::vector<Span> kept = cantor_intervals(depth);
    std::vector<double> lo, hi;
    for (const Span& s : kept) {
        lo.push_back(s.lo.to_double());
        hi.push_back(s.hi.to_double());
    }
    double count = static_cast<double>(kept.size());
    auto eval = [lo, hi, count](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        auto it = std::upper_bound(lo.begin(), lo.end(), x);
        std::size_t k = static_cast<std::size_t>(it - lo.begin());  // intervals starting at or before x
        if (k == 0) return 0.0;
        std::size_t j = k - 1;
        if (x >= hi[j]) return static_cast<double>(k) / count;
        return (static_cast<double>(j) + (x - lo[j]) / (hi[j] - lo[j])) / count;
    };
    std::vector<Dyadic> breaks;
    for (const Span& s : kept) {
        breaks.push_back(s.lo);
        breaks.push_back(s.hi);
    }
    return PointFunction{"cantor" + std::to_string(depth), eval, {}, breaks};
}

}  // namespace ivfn
