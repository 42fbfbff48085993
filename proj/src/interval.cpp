#include "ivfn/interval.hpp"

#include "ivfn/errors.hpp"

namespace ivfn {

Interval::Interval(Dyadic lo, Dyadic hi, Side left, Side right)
    : lo_(lo), hi_(hi), left_(left), right_(right) {
    if (!(lo_ < hi_)) throw DegenerateInterval("interval needs lo < hi, got " + lo_.str() + " and " + hi_.str());
}

Interval Interval::from_variant(const Dyadic& lo, const Dyadic& hi, int variant) {
    return Interval(lo, hi, (variant & 2) ? Side::closed : Side::open, (variant & 1) ? Side::closed : Side::open);
}

Interval make_interval(const Dyadic& lo, const Dyadic& hi, Side left, Side right) {
    return Interval(lo, hi, left, right);
}

Interval Interval::parse(std::string_view text) {
    if (text.size() < 5) throw ParseError("bad interval: " + std::string(text));
    char l = text.front();
    char r = text.back();
    if ((l != '[' && l != '(') || (r != ']' && r != ')')) throw ParseError("bad interval brackets: " + std::string(text));
    std::string_view body = text.substr(1, text.size() - 2);
    auto comma = body.find(',');
    if (comma == std::string_view::npos) throw ParseError("bad interval: " + std::string(text));
    return Interval(Dyadic::parse(body.substr(0, comma)), Dyadic::parse(body.substr(comma + 1)),
                    l == '[' ? Side::closed : Side::open, r == ']' ? Side::closed : Side::open);
}

bool Interval::contains(const Dyadic& x) const {
    if (x < lo_ || x > hi_) return false;
    if (x == lo_) return left_closed();
    if (x == hi_) return right_closed();
    return true;
}

std::string Interval::str() const {
    return std::string(left_closed() ? "[" : "(") + lo_.str() + "," + hi_.str() + (right_closed() ? "]" : ")");
}

Relation relate(const Interval& a, const Interval& b) {
    if (a.same_span(b)) return Relation::equal_span;
    if (a.hi() < b.lo() || b.hi() < a.lo()) return Relation::disjoint;
    if (a.hi() == b.lo() || b.hi() == a.lo()) return Relation::abut;
    bool a_in_b = b.lo() <= a.lo() && a.hi() <= b.hi();
    bool b_in_a = a.lo() <= b.lo() && b.hi() <= a.hi();
    if (a_in_b || b_in_a) return Relation::contains;
    return Relation::overlap;
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::disjoint: return "disjoint";
        case Relation::abut: return "abut";
        case Relation::overlap: return "overlap";
        case Relation::contains: return "contains";
        case Relation::equal_span: return "equal-span";
    }
    return "?";
}

std::string PointConvention::junction() const {
    return std::string(left_closed ? "]" : ")") + (right_closed ? "[" : "(");
}

PointConvention PointConvention::parse(const Dyadic& point, std::string_view junction) {
    if (junction.size() != 2 || (junction[0] != ']' && junction[0] != ')') || (junction[1] != '[' && junction[1] != '('))
        throw ParseError("bad junction '" + std::string(junction) + "', expected one of )( )[ ]( ][");
    return PointConvention{point, junction[0] == ']', junction[1] == '['};
}

PointConvention PointConvention::parse(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw ParseError("expected point:junction, got " + std::string(text));
    return parse(Dyadic::parse(text.substr(0, colon)), text.substr(colon + 1));
}

}  // namespace ivfn
