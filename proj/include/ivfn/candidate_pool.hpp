#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ivfn/integrator.hpp"

namespace ivfn {

/// Allowed bracket variants of an interval, one bit per variant code.
using VariantMask = std::uint8_t;
inline constexpr VariantMask kAllVariants = 0xF;

/// Fixed conventions looked up by point.
class ConventionTable {
public:
    ConventionTable() = default;
    explicit ConventionTable(std::vector<PointConvention> conventions);
    bool empty() const { return table_.empty(); }
    VariantMask mask(const Dyadic& lo, const Dyadic& hi) const;
    const PointConvention* find(const Dyadic& x) const;

private:
    std::vector<PointConvention> table_;  // sorted by point
};

struct Choice {
    double max = 0.0;
    double min = 0.0;
    std::uint8_t max_variant = 0;
    std::uint8_t min_variant = 0;
};

/// Best and worst variant among those allowed; ties go to the smaller code.
Choice choose_variants(const IntervalFunction& g, const Dyadic& lo, const Dyadic& hi, VariantMask mask);

/// The shared family of candidate point sets behind every 1-D estimate.
///
/// Each member is a grid (plain or staggered, at one level) merged with one
/// hint, or the grid alone. Grid points inside a hint's keep-clear spans are
/// dropped, except region endpoints and permanent points. When permanent
/// points are given, every grid also appears augmented by them; those members
/// are additionally evaluated with the fixed conventions enforced.
/// Members are ordered by grid level, plain before staggered, plain before
/// augmented, and within a grid the bare grid first, then hints in order.
class CandidatePool {
public:
    /// `anchors` join the permanent points in augmented members but carry no
    /// convention. With `plain_members` false only augmented members are built.
    CandidatePool(IntervalFunction g, Region region, const SearchConfig& cfg,
                  std::vector<PointConvention> permanent = {}, std::vector<Dyadic> anchors = {},
                  bool plain_members = true);

    struct Member {
        std::string origin;
        Dyadic norm;
        std::size_t intervals = 0;
        bool augmented = false;
        Choice free;   // sums over the member, brackets unconstrained
        Choice fixed;  // augmented members only: permanent conventions enforced
    };

    const std::vector<Member>& members() const { return members_; }
    const Region& region() const { return region_; }
    /// The member's division with its extremal brackets.
    Division materialize(std::size_t index, Sense sense, bool fixed) const;
    std::vector<Dyadic> member_points(std::size_t index) const;

    /// Per-level report over members selected by `use`, with `fixed` choosing
    /// which sums to read. `ignore_norm` drops the norm < e filter.
    LimitReport report(const std::string& quantity, bool augmented_only, bool fixed, bool ignore_norm = false) const;

private:
    struct Base;
    struct Layout;
    Layout layout(std::size_t index) const;

    IntervalFunction g_;
    Region region_;
    SearchConfig cfg_;
    std::vector<PointConvention> permanent_;
    std::vector<Dyadic> anchors_;
    ConventionTable table_;
    std::vector<Dyadic> protected_;
    std::vector<Hint> hints_;
    std::vector<Base> bases_;
    std::vector<std::pair<std::size_t, int>> specs_;  // (base, hint or -1)
    std::vector<Member> members_;

public:
    ~CandidatePool();
    CandidatePool(CandidatePool&&) noexcept;
};

}  // namespace ivfn
