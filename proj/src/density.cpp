#include "ivfn/density.hpp"

#include <cmath>

#include "ivfn/errors.hpp"

namespace ivfn {

IntervalFunction density_kernel(const IntervalFunction& g, const MeasurableSet& e) {
    auto eval = [g, e](const Interval& i) {
        Dyadic inside = intersect_measure(e, i);
        if (inside.is_zero()) return 0.0;
        double v = g(i);
        if (inside == i.length()) return v;
        return v * (inside.to_double() / i.length().to_double());
    };
    HintSource hints = [g, ends = e.endpoints()](const Region& r, int budget) {
        std::vector<Hint> out = g.hints(r, budget);
        out.push_back(Hint{ends, {}});
        return out;
    };
    FunctionFlags flags{false, g.flags().bracket_independent, g.flags().continuous};
    return IntervalFunction("K(" + g.name() + ";" + e.str() + ")", eval, flags, hints);
}

DensityReport density_integral(const IntervalFunction& g, const MeasurableSet& e, const Region& w,
                               const SearchConfig& cfg, const PointFunction* f) {
    DensityReport out;
    out.report = estimate_norm_limits(density_kernel(g, e), w, cfg);
    out.report.quantity = "density";
    if (f && f->derivative) out.lebesgue_ref = lebesgue_reference(f->derivative, e);
    return out;
}

namespace {

double simpson(const std::function<double(double)>& fn, double a, double b, std::size_t panels) {
    double h = (b - a) / static_cast<double>(panels);
    double s = fn(a) + fn(b);
    for (std::size_t k = 1; k < panels; ++k) s += fn(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

double lebesgue_reference(const std::function<double(double)>& derivative, const MeasurableSet& e) {
    constexpr std::size_t kMaxPanels = std::size_t{1} << 24;
    double total = 0.0;
    for (const Piece& p : e.pieces()) {
        if (p.is_point()) continue;
        double a = p.lo.to_double();
        double b = p.hi.to_double();
        std::size_t n = 2;
        double prev = simpson(derivative, a, b, n);
        for (;;) {
            n *= 2;
            if (n > kMaxPanels) throw NoConvergence("quadrature did not settle on " + p.str());
            double cur = simpson(derivative, a, b, n);
            bool done = std::fabs(cur - prev) <= kQuadratureTol;
            prev = cur;
            if (done) break;
        }
        total += prev;
    }
    return total;
}

}  // namespace ivfn
