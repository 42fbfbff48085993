#include "ivfn/measurable_set.hpp"

#include <algorithm>

#include "ivfn/errors.hpp"

namespace ivfn {
namespace {

bool piece_contains(const Piece& p, const Dyadic& x) {
    if (x < p.lo || x > p.hi) return false;
    if (x == p.lo && !p.lo_closed) return false;
    if (x == p.hi && !p.hi_closed) return false;
    return true;
}

}  // namespace

std::string Piece::str() const {
    if (is_point()) return "{" + lo.str() + "}";
    return std::string(lo_closed ? "[" : "(") + lo.str() + "," + hi.str() + (hi_closed ? "]" : ")");
}

MeasurableSet::MeasurableSet(std::vector<Piece> pieces) {
    for (Piece& p : pieces) {
        if (p.hi < p.lo) throw DegenerateInterval("set piece needs lo <= hi: " + p.lo.str() + "," + p.hi.str());
        if (p.is_point()) p.lo_closed = p.hi_closed = true;
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });
    for (const Piece& p : pieces) {
        if (!pieces_.empty()) {
            Piece& a = pieces_.back();
            bool touches = p.lo < a.hi || (p.lo == a.hi && (a.hi_closed || p.lo_closed));
            if (touches) {
                if (p.lo == a.lo) a.lo_closed = a.lo_closed || p.lo_closed;
                if (p.hi > a.hi) {
                    a.hi = p.hi;
                    a.hi_closed = p.hi_closed;
                } else if (p.hi == a.hi) {
                    a.hi_closed = a.hi_closed || p.hi_closed;
                }
                continue;
            }
        }
        pieces_.push_back(p);
    }
}

MeasurableSet MeasurableSet::of(const std::vector<Interval>& intervals) {
    std::vector<Piece> pieces;
    for (const Interval& i : intervals) pieces.push_back(Piece::of(i));
    return MeasurableSet(std::move(pieces));
}

MeasurableSet MeasurableSet::parse(const std::string& text) {
    std::vector<Piece> pieces;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '+' || c == ' ') {
            ++pos;
            continue;
        }
        if (c == '{') {
            auto close = text.find('}', pos);
            if (close == std::string::npos) throw ParseError("unterminated point in set: " + text);
            std::string body = text.substr(pos + 1, close - pos - 1);
            if (!body.empty()) pieces.push_back(Piece::point(Dyadic::parse(body)));
            pos = close + 1;
            continue;
        }
        auto close = text.find_first_of(")]", pos);
        if (close == std::string::npos) throw ParseError("bad set: " + text);
        pieces.push_back(Piece::of(Interval::parse(text.substr(pos, close - pos + 1))));
        pos = close + 1;
    }
    return MeasurableSet(std::move(pieces));
}

Dyadic MeasurableSet::measure() const {
    Dyadic m;
    for (const Piece& p : pieces_) m += p.hi - p.lo;
    return m;
}

bool MeasurableSet::contains(const Dyadic& x) const {
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const Piece& p) { return piece_contains(p, x); });
}

bool MeasurableSet::meets(const Interval& i) const {
    for (const Piece& p : pieces_) {
        Dyadic lo = std::max(p.lo, i.lo());
        Dyadic hi = std::min(p.hi, i.hi());
        if (lo < hi) return true;
        if (lo == hi && piece_contains(p, lo) && i.contains(lo)) return true;
    }
    return false;
}

std::vector<Dyadic> MeasurableSet::endpoints() const {
    std::vector<Dyadic> out;
    for (const Piece& p : pieces_) {
        out.push_back(p.lo);
        out.push_back(p.hi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool MeasurableSet::subset_of(const MeasurableSet& other) const {
    for (const Piece& p : pieces_) {
        bool inside = std::any_of(other.pieces_.begin(), other.pieces_.end(), [&](const Piece& q) {
            if (p.lo < q.lo || p.hi > q.hi) return false;
            if (p.lo == q.lo && p.lo_closed && !q.lo_closed) return false;
            if (p.hi == q.hi && p.hi_closed && !q.hi_closed) return false;
            return true;
        });
        if (!inside) return false;
    }
    return true;
}

std::string MeasurableSet::str() const {
    if (pieces_.empty()) return "{}";
    std::string out;
    for (const Piece& p : pieces_) {
        if (!out.empty()) out += "+";
        out += p.str();
    }
    return out;
}

Dyadic intersect_measure(const MeasurableSet& e, const Dyadic& lo, const Dyadic& hi) {
    Dyadic m;
    for (const Piece& p : e.pieces()) {
        Dyadic a = std::max(p.lo, lo);
        Dyadic b = std::min(p.hi, hi);
        if (a < b) m += b - a;
    }
    return m;
}

Dyadic intersect_measure(const MeasurableSet& e, const Interval& i) { return intersect_measure(e, i.lo(), i.hi()); }

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
    std::vector<Piece> all = a.pieces();
    all.insert(all.end(), b.pieces().begin(), b.pieces().end());
    return MeasurableSet(std::move(all));
}

}  // namespace ivfn
