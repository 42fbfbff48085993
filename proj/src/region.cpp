#include "ivfn/region.hpp"

#include <algorithm>

#include "ivfn/errors.hpp"

namespace ivfn {

Region::Region(std::vector<Span> components) {
    for (const Span& s : components)
        if (!(s.lo < s.hi)) throw DegenerateInterval("region component needs lo < hi: " + s.lo.str() + "," + s.hi.str());
    std::sort(components.begin(), components.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
    for (const Span& s : components) {
        if (!parts_.empty() && s.lo <= parts_.back().hi) {
            parts_.back().hi = std::max(parts_.back().hi, s.hi);
        } else {
            parts_.push_back(s);
        }
    }
}

Region Region::interval(const Dyadic& lo, const Dyadic& hi) { return Region({Span{lo, hi}}); }

Region Region::parse(std::string_view text) {
    std::vector<Span> spans;
    if (text.find('[') == std::string_view::npos) {
        auto comma = text.find(',');
        if (comma == std::string_view::npos) throw ParseError("region needs lo,hi: " + std::string(text));
        spans.push_back({Dyadic::parse(text.substr(0, comma)), Dyadic::parse(text.substr(comma + 1))});
        return Region(spans);
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto open = text.find('[', pos);
        if (open == std::string_view::npos) break;
        auto close = text.find(']', open);
        if (close == std::string_view::npos) throw ParseError("unterminated region component: " + std::string(text));
        std::string_view body = text.substr(open + 1, close - open - 1);
        auto comma = body.find(',');
        if (comma == std::string_view::npos) throw ParseError("region component needs lo,hi: " + std::string(body));
        spans.push_back({Dyadic::parse(body.substr(0, comma)), Dyadic::parse(body.substr(comma + 1))});
        pos = close + 1;
    }
    if (spans.empty()) throw ParseError("empty region: " + std::string(text));
    return Region(spans);
}

Dyadic Region::measure() const {
    Dyadic m;
    for (const Span& s : parts_) m += s.length();
    return m;
}

Dyadic Region::lo() const {
    if (parts_.empty()) throw NotContained("empty region has no endpoints");
    return parts_.front().lo;
}

Dyadic Region::hi() const {
    if (parts_.empty()) throw NotContained("empty region has no endpoints");
    return parts_.back().hi;
}

bool Region::contains(const Dyadic& x) const {
    return std::any_of(parts_.begin(), parts_.end(), [&](const Span& s) { return s.lo <= x && x <= s.hi; });
}

bool Region::covers(const Region& other) const {
    return std::all_of(other.parts_.begin(), other.parts_.end(), [&](const Span& o) {
        return std::any_of(parts_.begin(), parts_.end(), [&](const Span& s) { return s.lo <= o.lo && o.hi <= s.hi; });
    });
}

std::vector<Dyadic> Region::boundary_points() const {
    std::vector<Dyadic> out;
    for (const Span& s : parts_) {
        out.push_back(s.lo);
        out.push_back(s.hi);
    }
    return out;
}

std::string Region::str() const {
    if (parts_.empty()) return "{}";
    std::string out;
    for (const Span& s : parts_) {
        if (!out.empty()) out += "+";
        out += "[" + s.lo.str() + "," + s.hi.str() + "]";
    }
    return out;
}

Region region_subtract(const Region& r1, const Region& r2) {
    if (!r1.covers(r2)) throw NotContained(r2.str() + " is not contained in " + r1.str());
    std::vector<Span> out;
    for (Span s : r1.components()) {
        Dyadic cursor = s.lo;
        for (const Span& cut : r2.components()) {
            if (cut.hi <= cursor || cut.lo >= s.hi) continue;
            if (cursor < cut.lo) out.push_back({cursor, cut.lo});
            cursor = std::max(cursor, cut.hi);
        }
        if (cursor < s.hi) out.push_back({cursor, s.hi});
    }
    return Region(out);
}

}  // namespace ivfn
