#pragma once

#include <string>
#include <vector>

#include "ivfn/interval.hpp"

namespace ivfn {

/// A piece of a measurable set: an interval with brackets, or a single point
/// when lo == hi (then both ends are closed).
struct Piece {
    Dyadic lo;
    Dyadic hi;
    bool lo_closed = true;
    bool hi_closed = true;

    static Piece point(const Dyadic& x) { return {x, x, true, true}; }
    static Piece of(const Interval& i) { return {i.lo(), i.hi(), i.left_closed(), i.right_closed()}; }
    bool is_point() const { return lo == hi; }
    std::string str() const;
    friend bool operator==(const Piece&, const Piece&) = default;
};

/// Finite union of intervals and points, normalized to disjoint sorted pieces.
class MeasurableSet {
public:
    MeasurableSet() = default;
    explicit MeasurableSet(std::vector<Piece> pieces);
    static MeasurableSet of(const std::vector<Interval>& intervals);
    /// "[0,1/2^2]+(1/2^1,3/2^2)+{1}"; "{}" is the empty set.
    static MeasurableSet parse(const std::string& text);

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }
    Dyadic measure() const;
    bool contains(const Dyadic& x) const;
    /// Bracket-sensitive: true iff I and the set share at least one point.
    bool meets(const Interval& i) const;
    /// All piece endpoints, increasing, deduplicated.
    std::vector<Dyadic> endpoints() const;
    bool subset_of(const MeasurableSet& other) const;
    std::string str() const;

    friend bool operator==(const MeasurableSet&, const MeasurableSet&) = default;

private:
    std::vector<Piece> pieces_;
};

/// m(E ∩ I); brackets do not affect measure.
Dyadic intersect_measure(const MeasurableSet& e, const Interval& i);
Dyadic intersect_measure(const MeasurableSet& e, const Dyadic& lo, const Dyadic& hi);

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b);

}  // namespace ivfn
