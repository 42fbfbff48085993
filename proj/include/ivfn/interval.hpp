#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ivfn/dyadic.hpp"

namespace ivfn {

enum class Side : std::uint8_t { open = 0, closed = 1 };

/// Bounded interval lo..hi with one bracket per end. lo < hi always.
///
/// The four bracket variants of a span are numbered 0..3 as
/// (a,b) (a,b] [a,b) [a,b]; bit 1 is the left bracket, bit 0 the right.
class Interval {
public:
    Interval(Dyadic lo, Dyadic hi, Side left, Side right);

    static Interval from_variant(const Dyadic& lo, const Dyadic& hi, int variant);
    /// Parses "[0,1/2^1)", "(1/4,3/4]" and the like.
    static Interval parse(std::string_view text);

    const Dyadic& lo() const { return lo_; }
    const Dyadic& hi() const { return hi_; }
    Side left() const { return left_; }
    Side right() const { return right_; }
    bool left_closed() const { return left_ == Side::closed; }
    bool right_closed() const { return right_ == Side::closed; }
    Dyadic length() const { return hi_ - lo_; }
    int variant() const { return (left_closed() ? 2 : 0) | (right_closed() ? 1 : 0); }
    Interval with_variant(int variant) const { return from_variant(lo_, hi_, variant); }
    Interval with_sides(Side left, Side right) const { return Interval(lo_, hi_, left, right); }

    /// Set membership, brackets respected.
    bool contains(const Dyadic& x) const;
    bool same_span(const Interval& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

    std::string str() const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    Dyadic lo_;
    Dyadic hi_;
    Side left_;
    Side right_;
};

Interval make_interval(const Dyadic& lo, const Dyadic& hi, Side left, Side right);

enum class Relation { disjoint, abut, overlap, contains, equal_span };

/// Classification by spans only; brackets never change the answer.
Relation relate(const Interval& a, const Interval& b);
std::string_view to_string(Relation r);

/// Bracket convention at a division point: whether the interval ending there
/// includes it (left_closed) and whether the interval starting there does.
struct PointConvention {
    Dyadic point;
    bool left_closed = true;
    bool right_closed = true;

    /// One of ")(", ")[", "](", "][".
    std::string junction() const;
    static PointConvention parse(const Dyadic& point, std::string_view junction);
    /// "point:junction", e.g. "1/2^1:)[".
    static PointConvention parse(std::string_view text);

    friend bool operator==(const PointConvention&, const PointConvention&) = default;
};

}  // namespace ivfn
