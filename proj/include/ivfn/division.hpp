#pragma once

#include <span>
#include <vector>

#include "ivfn/interval.hpp"
#include "ivfn/region.hpp"

namespace ivfn {

/// Non-overlapping bracketed intervals whose closures tile a region.
/// Neighbours may both be closed at a shared point, or both open there.
class Division {
public:
    Division(Region region, std::vector<Interval> intervals);

    const Region& region() const { return region_; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    std::size_t size() const { return intervals_.size(); }
    /// Distinct endpoints of all intervals, increasing.
    std::vector<Dyadic> points() const;
    Dyadic norm() const;
    /// Variant code (see Interval) of every interval.
    std::vector<int> brackets() const;
    Division with_brackets(std::span<const int> variants) const;
    /// Junction conventions at points shared by two intervals.
    std::vector<PointConvention> conventions() const;

    friend bool operator==(const Division&, const Division&) = default;

private:
    Region region_;
    std::vector<Interval> intervals_;
};

/// Consecutive gaps of `points` inside each component. Component endpoints are
/// added when missing. Points default to "][" unless a convention is given;
/// a convention at a component end sets only the bracket facing inward.
Division division_from_points(const Region& region, std::span<const Dyadic> points,
                              std::span<const PointConvention> conventions = {});

/// Adds points; old junction brackets and outer brackets of split intervals
/// are kept, new points get "][".
Division refine(const Division& d, std::span<const Dyadic> extra_points);

/// Sorted, deduplicated union of `points` and the region's component endpoints.
/// Throws PointOutsideRegion for points outside the closure.
std::vector<Dyadic> normalize_points(const Region& region, std::span<const Dyadic> points);

/// The spans (lo, hi) between consecutive points that lie in one component.
std::vector<Span> gaps(const Region& region, std::span<const Dyadic> sorted_points);

/// Every one of the 4^m bracket assignments over a fixed point set.
std::vector<Division> all_bracket_assignments(const Region& region, std::span<const Dyadic> points);

}  // namespace ivfn
