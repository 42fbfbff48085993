#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ivfn/interval.hpp"
#include "ivfn/region.hpp"

namespace ivfn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// a + b on the extended reals; +inf + -inf raises IndeterminateForm.
double ext_add(double a, double b);
/// a - b on the extended reals; inf - inf of one sign raises IndeterminateForm.
double ext_sub(double a, double b);

struct FunctionFlags {
    bool additive = false;
    bool bracket_independent = false;
    bool continuous = false;
};

/// Where an extremal division is expected to live: points to insert, and open
/// spans in which no grid point may be placed (so that a special interval
/// survives as a single division interval).
struct Hint {
    std::vector<Dyadic> points;
    std::vector<Span> keep_clear;
};

using HintSource = std::function<std::vector<Hint>(const Region& region, int budget)>;

/// A function of bracketed intervals with values in the extended reals.
class IntervalFunction {
public:
    using Eval = std::function<double(const Interval&)>;

    IntervalFunction() = default;
    IntervalFunction(std::string name, Eval eval, FunctionFlags flags = {}, HintSource hints = {});

    double operator()(const Interval& i) const { return (*eval_)(i); }
    const std::string& name() const { return name_; }
    const FunctionFlags& flags() const { return flags_; }
    bool has_hints() const { return static_cast<bool>(hints_); }
    std::vector<Hint> hints(const Region& region, int budget) const;
    /// All hint points inside the region, sorted and deduplicated.
    std::vector<Dyadic> special_points(const Region& region, int budget) const;

    IntervalFunction renamed(std::string name) const;
    IntervalFunction with_hints(HintSource hints) const;
    IntervalFunction with_flags(FunctionFlags flags) const;

private:
    std::string name_;
    std::shared_ptr<const Eval> eval_;
    FunctionFlags flags_;
    HintSource hints_;
};

/// A real function of a real variable, evaluated exactly at dyadic points
/// (every dyadic used here is exactly representable as a double).
struct PointFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> derivative;  // empty when unknown
    std::vector<Dyadic> breakpoints;           // kinks or jumps, used as hints

    double operator()(const Dyadic& x) const { return eval(x.to_double()); }
    double operator()(double x) const { return eval(x); }
};

/// mI, the length of an interval.
IntervalFunction length_function();
/// S(f; a..b) = f(b) - f(a).
IntervalFunction stieltjes(const PointFunction& f);
IntervalFunction constant_zero();

IntervalFunction operator+(const IntervalFunction& a, const IntervalFunction& b);
IntervalFunction scale(double c, const IntervalFunction& g);
IntervalFunction abs(const IntervalFunction& g);

/// Optional fixed junction for a point: (interval ending there includes it,
/// interval starting there includes it).
using ConventionRule = std::function<std::optional<std::pair<bool, bool>>(const Dyadic&)>;

/// h(I) = g(I^k): ends of I that carry a fixed convention are re-bracketed
/// by it before g is evaluated.
IntervalFunction with_fixed_conventions(const IntervalFunction& g, ConventionRule rule, std::string name);

/// Checks the eight additivity relations on x < y < z (junction brackets
/// complementary at y, all four outer bracket choices). Returns the largest
/// violation.
double additivity_violation(const IntervalFunction& g, const Dyadic& x, const Dyadic& y, const Dyadic& z);
/// Largest spread of g over the four bracket variants of lo..hi.
double bracket_spread(const IntervalFunction& g, const Dyadic& lo, const Dyadic& hi);

}  // namespace ivfn
