#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivfn/integrator.hpp"

namespace ivfn {

/// Hint budgets used to probe whether Var keeps growing as more special
/// divisions are admitted.
inline constexpr int kVariationProbeBudgets[3] = {15, 30, 60};

struct BudgetProbe {
    int budget = 0;
    double var = 0.0;  // finest-level estimate
};

struct VariationReport {
    LimitReport var;  // norm-limit estimates of |g|
    bool bounded = true;
    std::vector<BudgetProbe> probes;
    std::vector<double> a_levels;  // max(|upper|, |lower|) of g per level
    double a_r = 0.0;
    std::vector<std::pair<Dyadic, double>> j_table;
};

/// Non-b.v. when either Var keeps growing over the probe budgets with
/// non-shrinking increments, or it exceeds 1e6 and at least doubles at each
/// of the last two levels.
VariationReport variation(const IntervalFunction& g, const Region& region, const SearchConfig& cfg,
                          bool with_j_table = false);

/// Var(g; [y-d, y+d]) with d the finest norm bound; candidate divisions also
/// hold the splitting triples used for the additivity defect at y.
double j_singularity(const IntervalFunction& g, const Region& region, const Dyadic& y, const SearchConfig& cfg);

struct Pack {
    std::vector<Interval> intervals;
    Dyadic measure;
    double sum = 0.0;
};

struct AcLevel {
    Dyadic budget;  // measure budget
    double best = 0.0;  // largest |sum g| found over packs within the budget
    Pack pack;
};

struct AcReport {
    std::vector<AcLevel> trace;
    bool absolutely_continuous = false;
};

inline constexpr double kAcThreshold = 1e-3;
inline constexpr int kAcFinestBudget = 12;
inline constexpr std::size_t kMaxPackIntervals = 4096;

/// Greedy pack search over measure budgets 2^-4 .. 2^-12.
AcReport is_absolutely_continuous(const IntervalFunction& g, const Region& region, const SearchConfig& cfg,
                                  const std::vector<std::vector<Interval>>& extra_families = {});
/// Sum of g over a pack (pieces must not overlap).
Pack evaluate_pack(const IntervalFunction& g, const std::vector<Interval>& intervals);

enum class Monotonicity { increases, decreases, both, neither };
std::string to_string(Monotonicity m);

struct MonotoneReport {
    Monotonicity verdict = Monotonicity::both;
    std::size_t checks = 0;
    double worst_increase = 0.0;  // largest g(I1)+g(I2)-g(I3)
    double worst_decrease = 0.0;  // largest g(I3)-g(I1)-g(I2)
};

MonotoneReport monotone_on_subdivision(const IntervalFunction& g, const Region& region, std::size_t samples,
                                       std::uint64_t seed = 1);

struct VariationSplit {
    double upper_positive = 0.0;  // p̄
    double upper_negative = 0.0;  // n̄
    double lower_positive = 0.0;  // p̲
    double lower_negative = 0.0;  // n̲
    double total = 0.0;           // g(J)
};

/// Throws BracketDependent when g changes with brackets on sampled spans.
VariationSplit variation_split(const IntervalFunction& g, const Interval& j, const SearchConfig& cfg);

}  // namespace ivfn
