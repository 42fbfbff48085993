#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ivfn/dyadic.hpp"

namespace ivfn {

struct Span {
    Dyadic lo;
    Dyadic hi;
    Dyadic length() const { return hi - lo; }
    friend bool operator==(const Span&, const Span&) = default;
};

/// Finite union of closed intervals, stored as its closure: components are
/// sorted, and overlapping or abutting ones are merged.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<Span> components);
    static Region interval(const Dyadic& lo, const Dyadic& hi);
    /// "0,2" for one component, or "[0,1]+[2,3]".
    static Region parse(std::string_view text);

    const std::vector<Span>& components() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    Dyadic measure() const;
    Dyadic lo() const;
    Dyadic hi() const;
    /// Membership in the closure.
    bool contains(const Dyadic& x) const;
    bool covers(const Region& other) const;
    /// Component endpoints in increasing order.
    std::vector<Dyadic> boundary_points() const;

    std::string str() const;

    friend bool operator==(const Region&, const Region&) = default;

private:
    std::vector<Span> parts_;
};

/// Closure of r1 \ r2. Throws NotContained unless r2 lies inside r1.
Region region_subtract(const Region& r1, const Region& r2);

}  // namespace ivfn
