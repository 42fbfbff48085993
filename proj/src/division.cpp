#include "ivfn/division.hpp"

#include <algorithm>
#include <map>

#include "ivfn/errors.hpp"

namespace ivfn {

Division::Division(Region region, std::vector<Interval> intervals)
    : region_(std::move(region)), intervals_(std::move(intervals)) {
    std::size_t k = 0;
    for (const Span& comp : region_.components()) {
        Dyadic cursor = comp.lo;
        while (cursor < comp.hi) {
            if (k >= intervals_.size() || intervals_[k].lo() != cursor)
                throw PointOutsideRegion("division does not tile " + region_.str() + " at " + cursor.str());
            if (intervals_[k].hi() > comp.hi)
                throw PointOutsideRegion("interval " + intervals_[k].str() + " leaves " + region_.str());
            cursor = intervals_[k].hi();
            ++k;
        }
    }
    if (k != intervals_.size()) throw PointOutsideRegion("division has intervals outside " + region_.str());
}

std::vector<Dyadic> Division::points() const {
    std::vector<Dyadic> out;
    for (const Interval& i : intervals_) {
        if (out.empty() || out.back() != i.lo()) out.push_back(i.lo());
        out.push_back(i.hi());
    }
    return out;
}

Dyadic Division::norm() const {
    Dyadic n;
    for (const Interval& i : intervals_) n = std::max(n, i.length());
    return n;
}

std::vector<int> Division::brackets() const {
    std::vector<int> out;
    out.reserve(intervals_.size());
    for (const Interval& i : intervals_) out.push_back(i.variant());
    return out;
}

Division Division::with_brackets(std::span<const int> variants) const {
    if (variants.size() != intervals_.size()) throw ParseError("bracket list length does not match the division");
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (std::size_t i = 0; i < intervals_.size(); ++i) out.push_back(intervals_[i].with_variant(variants[i]));
    return Division(region_, std::move(out));
}

std::vector<PointConvention> Division::conventions() const {
    std::vector<PointConvention> out;
    for (std::size_t i = 0; i + 1 < intervals_.size(); ++i) {
        if (intervals_[i].hi() != intervals_[i + 1].lo()) continue;
        out.push_back({intervals_[i].hi(), intervals_[i].right_closed(), intervals_[i + 1].left_closed()});
    }
    return out;
}

std::vector<Dyadic> normalize_points(const Region& region, std::span<const Dyadic> points) {
    std::vector<Dyadic> out = region.boundary_points();
    for (const Dyadic& p : points) {
        if (!region.contains(p)) throw PointOutsideRegion(p.str() + " is outside " + region.str());
        out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Span> gaps(const Region& region, std::span<const Dyadic> sorted_points) {
    std::vector<Span> out;
    const auto& comps = region.components();
    std::size_t c = 0;
    for (std::size_t i = 0; i + 1 < sorted_points.size(); ++i) {
        const Dyadic& p = sorted_points[i];
        const Dyadic& q = sorted_points[i + 1];
        while (c < comps.size() && comps[c].hi <= p) ++c;
        if (c < comps.size() && comps[c].lo <= p && q <= comps[c].hi) out.push_back({p, q});
    }
    return out;
}

Division division_from_points(const Region& region, std::span<const Dyadic> points,
                              std::span<const PointConvention> conventions) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        if (!(points[i] < points[i + 1])) throw UnsortedPoints("division points must be strictly increasing");
    std::vector<Dyadic> pts = normalize_points(region, points);
    std::map<Dyadic, PointConvention> conv;
    for (const PointConvention& pc : conventions) {
        if (!region.contains(pc.point)) throw PointOutsideRegion(pc.point.str() + " is outside " + region.str());
        conv[pc.point] = pc;
    }
    std::vector<Interval> intervals;
    for (const Span& g : gaps(region, pts)) {
        Side left = Side::closed;
        Side right = Side::closed;
        if (auto it = conv.find(g.lo); it != conv.end()) left = it->second.right_closed ? Side::closed : Side::open;
        if (auto it = conv.find(g.hi); it != conv.end()) right = it->second.left_closed ? Side::closed : Side::open;
        intervals.emplace_back(g.lo, g.hi, left, right);
    }
    return Division(region, std::move(intervals));
}

Division refine(const Division& d, std::span<const Dyadic> extra_points) {
    std::vector<Dyadic> extra(extra_points.begin(), extra_points.end());
    for (const Dyadic& p : extra)
        if (!d.region().contains(p)) throw PointOutsideRegion(p.str() + " is outside " + d.region().str());
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    std::vector<Interval> out;
    auto it = extra.begin();
    for (const Interval& iv : d.intervals()) {
        while (it != extra.end() && *it <= iv.lo()) ++it;
        Dyadic cursor = iv.lo();
        Side left = iv.left();
        for (; it != extra.end() && *it < iv.hi(); ++it) {
            out.emplace_back(cursor, *it, left, Side::closed);
            cursor = *it;
            left = Side::closed;
        }
        out.emplace_back(cursor, iv.hi(), left, iv.right());
    }
    return Division(d.region(), std::move(out));
}

std::vector<Division> all_bracket_assignments(const Region& region, std::span<const Dyadic> points) {
    std::vector<Dyadic> pts = normalize_points(region, points);
    std::vector<Span> spans = gaps(region, pts);
    std::size_t m = spans.size();
    if (m > 10) throw BudgetExceeded("refusing to enumerate 4^" + std::to_string(m) + " bracket assignments");
    std::size_t total = std::size_t{1} << (2 * m);
    std::vector<Division> out;
    out.reserve(total);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Interval> iv;
        iv.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            int v = static_cast<int>((code >> (2 * (m - 1 - i))) & 3);
            iv.push_back(Interval::from_variant(spans[i].lo, spans[i].hi, v));
        }
        out.emplace_back(region, std::move(iv));
    }
    return out;
}

}  // namespace ivfn
