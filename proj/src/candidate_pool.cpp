#include "ivfn/candidate_pool.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "ivfn/errors.hpp"
#include "ivfn/parallel.hpp"

namespace ivfn {

ConventionTable::ConventionTable(std::vector<PointConvention> conventions) : table_(std::move(conventions)) {
    std::sort(table_.begin(), table_.end(),
              [](const PointConvention& a, const PointConvention& b) { return a.point < b.point; });
    for (std::size_t i = 0; i + 1 < table_.size(); ++i)
        if (table_[i].point == table_[i + 1].point)
            throw ParseError("two conventions given for " + table_[i].point.str());
}

const PointConvention* ConventionTable::find(const Dyadic& x) const {
    auto it = std::lower_bound(table_.begin(), table_.end(), x,
                               [](const PointConvention& a, const Dyadic& p) { return a.point < p; });
    if (it == table_.end() || it->point != x) return nullptr;
    return &*it;
}

VariantMask ConventionTable::mask(const Dyadic& lo, const Dyadic& hi) const {
    VariantMask m = kAllVariants;
    if (const PointConvention* c = find(lo)) {
        // left bracket of an interval starting at a fixed point
        m &= c->right_closed ? 0b1100 : 0b0011;
    }
    if (const PointConvention* c = find(hi)) {
        m &= c->left_closed ? 0b1010 : 0b0101;
    }
    return m;
}

Choice choose_variants(const IntervalFunction& g, const Dyadic& lo, const Dyadic& hi, VariantMask mask) {
    Choice c;
    bool first = true;
    for (int v = 0; v < 4; ++v) {
        if (!(mask & (1u << v))) continue;
        double val = g(Interval::from_variant(lo, hi, v));
        if (first || val > c.max) {
            c.max = val;
            c.max_variant = static_cast<std::uint8_t>(v);
        }
        if (first || val < c.min) {
            c.min = val;
            c.min_variant = static_cast<std::uint8_t>(v);
        }
        first = false;
    }
    if (first) throw ParseError("conventions leave no bracket choice for " + lo.str() + "," + hi.str());
    return c;
}

struct CandidatePool::Base {
    std::string origin;
    bool augmented = false;
    std::vector<Dyadic> pts;
    std::vector<std::uint8_t> is_iv;  // per consecutive pair
    std::vector<Choice> free;
    std::vector<Choice> fixed;
    std::vector<Dyadic> pre_gap;  // largest interval length among pairs < i
    std::vector<Dyadic> suf_gap;  // among pairs >= i
    std::vector<std::size_t> pre_count;
};

struct CandidatePool::Layout {
    const Base* base = nullptr;
    std::size_t lo = 0;  // pairs [lo, hi) of the base are replaced by the window
    std::size_t hi = 0;
    std::vector<Dyadic> window;  // points from base.pts[lo] to base.pts[hi]
    std::vector<std::uint8_t> is_iv;
    std::vector<Choice> free;
    std::vector<Choice> fixed;
};

namespace {

bool within_component(const Region& region, const Dyadic& p, const Dyadic& q) {
    for (const Span& c : region.components())
        if (c.lo <= p && q <= c.hi) return true;
    return false;
}

std::vector<Dyadic> grid_points(const Region& region, int level, bool staggered) {
    std::vector<Dyadic> out;
    for (const Span& c : region.components()) {
        out.push_back(c.lo);
        if (!staggered) {
            for (std::int64_t k = c.lo.ceil_at(level); k <= c.hi.floor_at(level); ++k) out.emplace_back(k, level);
        } else {
            // odd multiples of 2^-(level+1)
            std::int64_t k0 = c.lo.ceil_at(level + 1);
            std::int64_t k1 = c.hi.floor_at(level + 1);
            for (std::int64_t k = k0 | 1; k <= k1; k += 2) out.emplace_back(k, level + 1);
        }
        out.push_back(c.hi);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool inside_any(const std::vector<Span>& spans, const Dyadic& x) {
    for (const Span& s : spans)
        if (s.lo < x && x < s.hi) return true;
    return false;
}

}  // namespace

CandidatePool::~CandidatePool() = default;
CandidatePool::CandidatePool(CandidatePool&&) noexcept = default;

CandidatePool::CandidatePool(IntervalFunction g, Region region, const SearchConfig& cfg,
                             std::vector<PointConvention> permanent, std::vector<Dyadic> anchors, bool plain_members)
    : g_(std::move(g)),
      region_(std::move(region)),
      cfg_(cfg),
      permanent_(std::move(permanent)),
      anchors_(std::move(anchors)) {
    cfg_.validate();
    if (region_.empty()) throw DegenerateInterval("empty region");
    for (const PointConvention& pc : permanent_)
        if (!region_.contains(pc.point)) throw PointOutsideRegion(pc.point.str() + " is outside " + region_.str());
    for (const Dyadic& p : anchors_)
        if (!region_.contains(p)) throw PointOutsideRegion(p.str() + " is outside " + region_.str());
    table_ = ConventionTable(permanent_);

    std::vector<Dyadic> extra = anchors_;
    for (const PointConvention& pc : permanent_) extra.push_back(pc.point);
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    bool augment = !extra.empty();
    if (!augment) plain_members = true;

    protected_ = region_.boundary_points();
    protected_.insert(protected_.end(), extra.begin(), extra.end());
    std::sort(protected_.begin(), protected_.end());
    protected_.erase(std::unique(protected_.begin(), protected_.end()), protected_.end());

    std::vector<Hint> raw;
    if (cfg_.use_special_points) raw = g_.hints(region_, cfg_.hint_budget);
    raw.insert(raw.end(), cfg_.extra_hints.begin(), cfg_.extra_hints.end());
    for (Hint& h : raw) {
        Hint clean;
        for (const Dyadic& p : h.points)
            if (region_.contains(p)) clean.points.push_back(p);
        for (const Span& s : h.keep_clear) {
            Span c{std::max(s.lo, region_.lo()), std::min(s.hi, region_.hi())};
            if (c.lo < c.hi) clean.keep_clear.push_back(c);
        }
        if (clean.points.empty() && clean.keep_clear.empty()) continue;
        std::sort(clean.points.begin(), clean.points.end());
        clean.points.erase(std::unique(clean.points.begin(), clean.points.end()), clean.points.end());
        hints_.push_back(std::move(clean));
    }

    std::vector<int> levels;
    for (const Dyadic& e : cfg_.e_schedule) {
        int j = grid_level(e);
        for (int k = 0; k <= cfg_.grid_density; ++k) levels.push_back(j + k);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<std::pair<int, bool>> grids;
    for (int level : levels) {
        grids.emplace_back(level, false);
        if (cfg_.staggered_grids) grids.emplace_back(level, true);
    }
    std::vector<std::pair<std::size_t, bool>> kinds;  // (grid, augmented)
    if (plain_members)
        for (std::size_t k = 0; k < grids.size(); ++k) kinds.emplace_back(k, false);
    if (augment)
        for (std::size_t k = 0; k < grids.size(); ++k) kinds.emplace_back(k, true);
    std::size_t n_bases = kinds.size();
    if (n_bases * (hints_.size() + 1) > cfg_.max_candidates)
        throw BudgetExceeded("candidate family of " + std::to_string(n_bases * (hints_.size() + 1)) +
                             " members exceeds the cap");
    std::size_t total_points = 0;
    for (auto [level, stag] : grids) {
        if (level > Dyadic::kMaxExponent - 2) throw BudgetExceeded("grid level too fine");
        double count = std::ldexp(region_.measure().to_double(), level);
        total_points += static_cast<std::size_t>(count) + 2;
    }
    total_points *= (plain_members ? 1 : 0) + (augment ? 1 : 0);
    if (total_points > cfg_.max_points) throw BudgetExceeded("grids need " + std::to_string(total_points) + " points");

    bases_.resize(n_bases);
    parallel_for(n_bases, cfg_.threads, [&](std::size_t b) {
        auto [level, stag] = grids[kinds[b].first];
        Base& base = bases_[b];
        base.augmented = kinds[b].second;
        base.origin = std::string(stag ? "staggered" : "grid") + " 2^-" + std::to_string(level);
        base.pts = grid_points(region_, level, stag);
        if (base.augmented) {
            base.origin += " + permanent";
            base.pts.insert(base.pts.end(), extra.begin(), extra.end());
            std::sort(base.pts.begin(), base.pts.end());
            base.pts.erase(std::unique(base.pts.begin(), base.pts.end()), base.pts.end());
        }
        std::size_t pairs = base.pts.size() - 1;
        base.is_iv.resize(pairs);
        base.free.resize(pairs);
        if (base.augmented) base.fixed.resize(pairs);
        base.pre_gap.assign(pairs + 1, Dyadic());
        base.suf_gap.assign(pairs + 1, Dyadic());
        base.pre_count.assign(pairs + 1, 0);
        for (std::size_t i = 0; i < pairs; ++i) {
            const Dyadic& p = base.pts[i];
            const Dyadic& q = base.pts[i + 1];
            bool iv = within_component(region_, p, q);
            base.is_iv[i] = iv;
            base.pre_gap[i + 1] = base.pre_gap[i];
            base.pre_count[i + 1] = base.pre_count[i] + (iv ? 1 : 0);
            if (!iv) continue;
            base.pre_gap[i + 1] = std::max(base.pre_gap[i], q - p);
            base.free[i] = choose_variants(g_, p, q, kAllVariants);
            if (base.augmented) {
                VariantMask m = table_.mask(p, q);
                base.fixed[i] = m == kAllVariants ? base.free[i] : choose_variants(g_, p, q, m);
            }
        }
        for (std::size_t i = pairs; i-- > 0;) {
            base.suf_gap[i] = base.suf_gap[i + 1];
            if (base.is_iv[i]) base.suf_gap[i] = std::max(base.suf_gap[i], base.pts[i + 1] - base.pts[i]);
        }
    });

    for (std::size_t b = 0; b < bases_.size(); ++b)
        for (int h = -1; h < static_cast<int>(hints_.size()); ++h) specs_.emplace_back(b, h);

    members_.resize(specs_.size());
    parallel_for(specs_.size(), cfg_.threads, [&](std::size_t m) {
        Layout lay = layout(m);
        const Base& base = *lay.base;
        Member& out = members_[m];
        out.augmented = base.augmented;
        out.origin = base.origin;
        if (specs_[m].second >= 0) out.origin += " + hint " + std::to_string(specs_[m].second);

        Dyadic norm = std::max(base.pre_gap[lay.lo], base.suf_gap[lay.hi]);
        std::size_t count = base.pre_count[lay.lo] + (base.pre_count.back() - base.pre_count[lay.hi]);
        for (std::size_t i = 0; i + 1 < lay.window.size(); ++i) {
            if (!lay.is_iv[i]) continue;
            norm = std::max(norm, lay.window[i + 1] - lay.window[i]);
            ++count;
        }
        out.norm = norm;
        out.intervals = count;

        if (cfg_.convention_mode == ConventionMode::all_enumerate) {
            std::vector<Dyadic> pts = member_points(m);
            ExtremalResult hi = extremal_sum_exhaustive(g_, pts, region_, Sense::max);
            ExtremalResult lo = extremal_sum_exhaustive(g_, pts, region_, Sense::min);
            out.free.max = hi.value;
            out.free.min = lo.value;
            out.fixed = out.free;
            if (base.augmented && !table_.empty())
                throw BudgetExceeded("exhaustive enumeration does not take fixed conventions");
            return;
        }

        auto accumulate = [&](bool fixed) {
            const std::vector<Choice>& cached = fixed ? base.fixed : base.free;
            const std::vector<Choice>& win = fixed ? lay.fixed : lay.free;
            Choice s;
            for (std::size_t i = 0; i < lay.lo; ++i)
                if (base.is_iv[i]) {
                    s.max = ext_add(s.max, cached[i].max);
                    s.min = ext_add(s.min, cached[i].min);
                }
            for (std::size_t i = 0; i + 1 < lay.window.size(); ++i)
                if (lay.is_iv[i]) {
                    s.max = ext_add(s.max, win[i].max);
                    s.min = ext_add(s.min, win[i].min);
                }
            for (std::size_t i = lay.hi; i < base.is_iv.size(); ++i)
                if (base.is_iv[i]) {
                    s.max = ext_add(s.max, cached[i].max);
                    s.min = ext_add(s.min, cached[i].min);
                }
            return s;
        };
        out.free = accumulate(false);
        if (base.augmented) out.fixed = accumulate(true);
    });
}

CandidatePool::Layout CandidatePool::layout(std::size_t index) const {
    auto [b, h] = specs_[index];
    Layout lay;
    lay.base = &bases_[b];
    const Base& base = bases_[b];
    if (h < 0) return lay;
    const Hint& hint = hints_[static_cast<std::size_t>(h)];

    Dyadic wmin = region_.hi();
    Dyadic wmax = region_.lo();
    for (const Dyadic& p : hint.points) {
        wmin = std::min(wmin, p);
        wmax = std::max(wmax, p);
    }
    for (const Span& s : hint.keep_clear) {
        wmin = std::min(wmin, s.lo);
        wmax = std::max(wmax, s.hi);
    }
    auto it_lo = std::upper_bound(base.pts.begin(), base.pts.end(), wmin);
    lay.lo = static_cast<std::size_t>(it_lo - base.pts.begin()) - 1;
    auto it_hi = std::lower_bound(base.pts.begin(), base.pts.end(), wmax);
    lay.hi = static_cast<std::size_t>(it_hi - base.pts.begin());

    std::vector<Dyadic> win;
    for (std::size_t i = lay.lo; i <= lay.hi; ++i) {
        const Dyadic& p = base.pts[i];
        bool keep = !inside_any(hint.keep_clear, p) || std::binary_search(protected_.begin(), protected_.end(), p);
        if (keep) win.push_back(p);
    }
    std::vector<Dyadic> merged;
    merged.reserve(win.size() + hint.points.size());
    std::merge(win.begin(), win.end(), hint.points.begin(), hint.points.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    lay.window = std::move(merged);

    std::size_t pairs = lay.window.size() - 1;
    lay.is_iv.resize(pairs);
    lay.free.resize(pairs);
    if (base.augmented) lay.fixed.resize(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const Dyadic& p = lay.window[i];
        const Dyadic& q = lay.window[i + 1];
        bool iv = within_component(region_, p, q);
        lay.is_iv[i] = iv;
        if (!iv) continue;
        lay.free[i] = choose_variants(g_, p, q, kAllVariants);
        if (base.augmented) {
            VariantMask msk = table_.mask(p, q);
            lay.fixed[i] = msk == kAllVariants ? lay.free[i] : choose_variants(g_, p, q, msk);
        }
    }
    return lay;
}

std::vector<Dyadic> CandidatePool::member_points(std::size_t index) const {
    Layout lay = layout(index);
    const Base& base = *lay.base;
    if (lay.window.empty()) return base.pts;
    std::vector<Dyadic> out(base.pts.begin(), base.pts.begin() + static_cast<std::ptrdiff_t>(lay.lo));
    out.insert(out.end(), lay.window.begin(), lay.window.end());
    out.insert(out.end(), base.pts.begin() + static_cast<std::ptrdiff_t>(lay.hi) + 1, base.pts.end());
    return out;
}

Division CandidatePool::materialize(std::size_t index, Sense sense, bool fixed) const {
    Layout lay = layout(index);
    const Base& base = *lay.base;
    bool use_fixed = fixed && base.augmented;
    std::vector<Interval> ivs;
    auto push = [&](const Dyadic& p, const Dyadic& q, const Choice& c) {
        int v = sense == Sense::max ? c.max_variant : c.min_variant;
        ivs.push_back(Interval::from_variant(p, q, v));
    };
    if (cfg_.convention_mode == ConventionMode::all_enumerate) {
        return extremal_sum_exhaustive(g_, member_points(index), region_, sense).division;
    }
    const std::vector<Choice>& cached = use_fixed ? base.fixed : base.free;
    const std::vector<Choice>& win = use_fixed ? lay.fixed : lay.free;
    for (std::size_t i = 0; i < lay.lo; ++i)
        if (base.is_iv[i]) push(base.pts[i], base.pts[i + 1], cached[i]);
    for (std::size_t i = 0; i + 1 < lay.window.size(); ++i)
        if (lay.is_iv[i]) push(lay.window[i], lay.window[i + 1], win[i]);
    for (std::size_t i = lay.hi; i < base.is_iv.size(); ++i)
        if (base.is_iv[i]) push(base.pts[i], base.pts[i + 1], cached[i]);
    return Division(region_, std::move(ivs));
}

LimitReport CandidatePool::report(const std::string& quantity, bool augmented_only, bool fixed,
                                  bool ignore_norm) const {
    LimitReport rep;
    rep.quantity = quantity;
    for (const Dyadic& e : cfg_.e_schedule) {
        LevelEstimate lvl;
        lvl.e = e;
        std::size_t best_hi = members_.size();
        std::size_t best_lo = members_.size();
        for (std::size_t m = 0; m < members_.size(); ++m) {
            const Member& mem = members_[m];
            if (augmented_only && !mem.augmented) continue;
            if (!ignore_norm && !(mem.norm < e)) continue;
            const Choice& c = (fixed && mem.augmented) ? mem.fixed : mem.free;
            if (best_hi == members_.size() || c.max > lvl.upper) {
                lvl.upper = c.max;
                best_hi = m;
            }
            if (best_lo == members_.size() || c.min < lvl.lower) {
                lvl.lower = c.min;
                best_lo = m;
            }
        }
        if (best_hi == members_.size()) throw BudgetExceeded("no candidate division with norm below " + e.str());
        auto witness = [&](std::size_t m, Sense s) {
            Witness w;
            w.origin = members_[m].origin;
            w.norm = members_[m].norm;
            w.intervals = members_[m].intervals;
            if (w.intervals <= cfg_.witness_limit) w.division = materialize(m, s, fixed);
            return w;
        };
        lvl.upper_witness = witness(best_hi, Sense::max);
        lvl.lower_witness = witness(best_lo, Sense::min);
        rep.levels.push_back(std::move(lvl));
    }
    rep.verdict = classify(rep.levels, cfg_.tol);
    return rep;
}

}  // namespace ivfn
