#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ivfn/division.hpp"
#include "ivfn/interval_function.hpp"

namespace ivfn {

enum class Sense { max, min };
enum class ConventionMode { optimize, fixed, all_enumerate };

struct SearchConfig {
    /// Norm bounds, strictly decreasing and positive.
    std::vector<Dyadic> e_schedule = default_schedule(3, 14);
    /// Extra grid levels finer than the coarsest admissible one.
    int grid_density = 1;
    bool use_special_points = true;
    /// Also use grids shifted by half a cell (they avoid the grid points).
    bool staggered_grids = true;
    int hint_budget = 24;
    ConventionMode convention_mode = ConventionMode::optimize;
    std::vector<PointConvention> fixed_conventions;
    std::size_t max_candidates = 200000;
    std::size_t max_points = std::size_t{1} << 22;
    double tol = 1e-9;
    int threads = 1;
    /// Merged into every grid alongside the function's own hints.
    std::vector<Hint> extra_hints;
    /// Witness divisions with at most this many intervals are materialized.
    std::size_t witness_limit = 4096;

    static std::vector<Dyadic> default_schedule(int first, int last);
    /// Throws ParseError on an invalid schedule.
    void validate() const;
};

/// Smallest j with 2^-j < e.
int grid_level(const Dyadic& e);

struct Witness {
    std::string origin;
    Dyadic norm;
    std::size_t intervals = 0;
    std::optional<Division> division;
};

struct LevelEstimate {
    Dyadic e;
    double upper = 0.0;
    double lower = 0.0;
    Witness upper_witness;
    Witness lower_witness;
};

enum class VerdictKind { converged, diverging, oscillating };

struct Verdict {
    VerdictKind kind = VerdictKind::oscillating;
    double value = 0.0;  // converged value, or the infinite sign when diverging
    double upper = 0.0;
    double lower = 0.0;
    double tol = 0.0;
    std::string str() const;
};

struct LimitReport {
    std::string quantity;
    std::vector<LevelEstimate> levels;
    Verdict verdict;
    /// Estimates come from a finite candidate family: upper is a lower bound
    /// for the true upper limit and lower an upper bound for the true lower.
    bool one_sided = true;

    const LevelEstimate& finest() const { return levels.back(); }
};

inline constexpr double kDivergenceThreshold = 1e12;

Verdict classify(const std::vector<LevelEstimate>& levels, double tol);

struct ExtremalResult {
    double value = 0.0;
    Division division;
};

double riemann_sum(const IntervalFunction& g, const Division& d);

/// Exact optimum over all 4^m bracket assignments on fixed points, by an
/// independent choice per interval (smallest variant code on ties).
ExtremalResult extremal_sum(const IntervalFunction& g, const std::vector<Dyadic>& points, const Region& region,
                            Sense sense, const std::vector<PointConvention>& fixed = {});
/// Same optimum by walking every assignment; for checking.
ExtremalResult extremal_sum_exhaustive(const IntervalFunction& g, const std::vector<Dyadic>& points,
                                       const Region& region, Sense sense);

LimitReport estimate_norm_limits(const IntervalFunction& g, const Region& region, const SearchConfig& cfg);

/// Estimates over divisions that contain every permanent point.
struct LimitChain {
    LimitReport norm;          // all candidates, free brackets
    LimitReport all_conventions;  // candidates holding the permanent points, free brackets
    LimitReport fixed;         // same candidates, permanent conventions enforced
};

LimitChain estimate_limit_chain(const IntervalFunction& g, const Region& region,
                                const std::vector<PointConvention>& permanent, const SearchConfig& cfg);
LimitReport estimate_k_limits(const IntervalFunction& g, const Region& region,
                              const std::vector<PointConvention>& permanent, const SearchConfig& cfg);
/// Divisions holding the permanent points; brackets there are free.
LimitReport estimate_k_prime_limits(const IntervalFunction& g, const Region& region,
                                    const std::vector<Dyadic>& permanent, const SearchConfig& cfg);

/// max over the 2^6 bracket alternatives of |g(x..z) - g(x..y) - g(y..z)|.
double additivity_defect(const IntervalFunction& g, const Dyadic& x, const Dyadic& y, const Dyadic& z);

struct Triple {
    Dyadic x, y, z;
};

struct DefectLevel {
    Dyadic e;
    double c = 0.0;      // C(y;e)
    double sigma = 0.0;  // spread bound from the same triples
};

struct DefectReport {
    Dyadic y;
    std::vector<DefectLevel> levels;
    double c = 0.0;
    double sigma = 0.0;
    Triple worst;  // triple realizing c at the finest level
    std::vector<Triple> finest_triples;
};

/// Splitting triples x < y < z with z - x < e used for C(y;e).
std::vector<Triple> defect_triples(const IntervalFunction& g, const Region& region, const Dyadic& y,
                                   const Dyadic& e, const SearchConfig& cfg);
DefectReport defect_at(const IntervalFunction& g, const Region& region, const Dyadic& y, const SearchConfig& cfg);
/// Points scanned: interior hint points and the interior points of a coarse
/// grid. Returns those with c > tol.
std::vector<DefectReport> singularity_scan(const IntervalFunction& g, const Region& region, const SearchConfig& cfg);
std::vector<Dyadic> scan_points(const IntervalFunction& g, const Region& region, const SearchConfig& cfg);

/// Stage k uses divisions refining grid(k) plus the singular points.
LimitReport estimate_sigma_limit(const IntervalFunction& g, const Region& region, const SearchConfig& cfg);

/// upper - lower of the finest level.
double oscillation(const LimitReport& report);

struct CauchyCheck {
    std::vector<std::pair<Dyadic, double>> gaps;  // largest pairwise sum gap per level
    bool exists = false;
};
CauchyCheck cauchy_existence_check(const IntervalFunction& g, const Region& region, const SearchConfig& cfg);

}  // namespace ivfn
