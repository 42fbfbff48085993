#pragma once

#include <optional>

#include "ivfn/integrator.hpp"
#include "ivfn/measurable_set.hpp"

namespace ivfn {

/// K(I) = g(I) m(E∩I) / mI; exactly 0 when E∩I is null.
IntervalFunction density_kernel(const IntervalFunction& g, const MeasurableSet& e);

struct DensityReport {
    LimitReport report;  // norm-limit estimates of the kernel over W
    std::optional<double> lebesgue_ref;
};

/// Norm-limit estimates of the kernel over `w`. When `f` has a derivative
/// oracle (g = S(f)), the Lebesgue integral of f' over E is attached.
DensityReport density_integral(const IntervalFunction& g, const MeasurableSet& e, const Region& w,
                               const SearchConfig& cfg, const PointFunction* f = nullptr);

inline constexpr double kQuadratureTol = 1e-10;

/// Sum over E's pieces of composite Simpson sums of f', doubling the panel
/// count until two successive sums agree within 1e-10. Throws NoConvergence.
double lebesgue_reference(const std::function<double(double)>& derivative, const MeasurableSet& e);

}  // namespace ivfn
