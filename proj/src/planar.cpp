#include "ivfn/planar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "ivfn/catalog.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/parallel.hpp"
#include "ivfn/variation.hpp"

namespace ivfn {

Coord to_coord(const Dyadic& d) {
    return Coord(d.numerator(), std::int64_t{1} << d.exponent());
}

namespace {

Dyadic to_dyadic(const Coord& c) {
    std::int64_t den = c.denominator();
    if ((den & (den - 1)) != 0) throw ArithmeticOverflow(coord_str(c) + " is not dyadic");
    int exp = 0;
    while ((std::int64_t{1} << exp) < den) ++exp;
    return Dyadic(c.numerator(), exp);
}

Interval x_interval(const Rect& t) {
    return Interval::from_variant(to_dyadic(t.x0), to_dyadic(t.x1), t.x_variant);
}

Interval y_interval(const Rect& t) {
    return Interval::from_variant(to_dyadic(t.y0), to_dyadic(t.y1), t.y_variant);
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    return n >= 0 ? n / d : -((-n + d - 1) / d);
}

double to_double(const Coord& c) {
    return static_cast<double>(c.numerator()) / static_cast<double>(c.denominator());
}

}  // namespace

std::string coord_str(const Coord& c) {
    if (c.denominator() == 1) return std::to_string(c.numerator());
    return std::to_string(c.numerator()) + "/" + std::to_string(c.denominator());
}

Rect::Rect(Coord x0_, Coord x1_, Coord y0_, Coord y1_, std::uint8_t xv, std::uint8_t yv)
    : x0(x0_), x1(x1_), y0(y0_), y1(y1_), x_variant(xv & 3), y_variant(yv & 3) {
    if (!(x0 < x1) || !(y0 < y1)) throw DegenerateInterval("rectangle " + str() + " has no area");
}

double Rect::diameter() const {
    return std::sqrt(to_double(diameter_squared()));
}

double Rect::regularity() const {
    Coord w = width(), h = height();
    return w < h ? to_double(w / h) : to_double(h / w);
}

Rect Rect::with_variants(std::uint8_t xv, std::uint8_t yv) const {
    Rect r = *this;
    r.x_variant = xv & 3;
    r.y_variant = yv & 3;
    return r;
}

std::string Rect::str() const {
    std::string s;
    s += (x_variant & 2) ? '[' : '(';
    s += coord_str(x0) + "," + coord_str(x1);
    s += (x_variant & 1) ? ']' : ')';
    s += 'x';
    s += (y_variant & 2) ? '[' : '(';
    s += coord_str(y0) + "," + coord_str(y1);
    s += (y_variant & 1) ? ']' : ')';
    return s;
}

std::string to_string(PlanarMode m) {
    return m == PlanarMode::restricted ? "restricted" : "extended";
}

RectDivision::RectDivision(Rect region, std::vector<Rect> cells, PlanarMode mode)
    : region_(std::move(region)), cells_(std::move(cells)), mode_(mode) {
    if (cells_.empty()) throw DegenerateInterval("empty planar division");
    Coord area = 0;
    for (const Rect& c : cells_) {
        if (c.x0 < region_.x0 || c.x1 > region_.x1 || c.y0 < region_.y0 || c.y1 > region_.y1)
            throw NotContained(c.str() + " is outside " + region_.str());
        area += c.area();
    }
    std::vector<std::size_t> order(cells_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cells_[a].x0 < cells_[b].x0; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Rect& a = cells_[order[i]];
        for (std::size_t j = i + 1; j < order.size() && cells_[order[j]].x0 < a.x1; ++j) {
            const Rect& b = cells_[order[j]];
            if (b.y0 < a.y1 && a.y0 < b.y1) throw DegenerateInterval(a.str() + " overlaps " + b.str());
        }
    }
    if (area != region_.area()) throw DegenerateInterval("cells do not cover " + region_.str());
    if (mode_ == PlanarMode::restricted) {
        std::vector<Coord> xs, ys;
        for (const Rect& c : cells_) {
            xs.push_back(c.x0);
            ys.push_back(c.y0);
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        std::size_t nx = std::unique(xs.begin(), xs.end()) - xs.begin();
        std::size_t ny = std::unique(ys.begin(), ys.end()) - ys.begin();
        if (nx * ny != cells_.size()) throw DegenerateInterval("cut lines do not cross the whole region");
    }
}

Coord RectDivision::norm_squared() const {
    Coord best = 0;
    for (const Rect& c : cells_) best = std::max(best, c.diameter_squared());
    return best;
}

double RectDivision::norm() const {
    return std::sqrt(to_double(norm_squared()));
}

double RectDivision::min_regularity() const {
    double best = 1.0;
    for (const Rect& c : cells_) best = std::min(best, c.regularity());
    return best;
}

RectFunction::RectFunction(std::string name, Eval eval, bool bracket_free, RectHintSource hints)
    : name_(std::move(name)), eval_(std::move(eval)), bracket_free_(bracket_free), hints_(std::move(hints)) {}

double RectFunction::operator()(const Rect& t) const {
    return eval_(t);
}

std::vector<RectHint> RectFunction::hints(const Rect& region, int budget) const {
    return hints_ ? hints_(region, budget) : std::vector<RectHint>{};
}

RectFunction product_function(const IntervalFunction& g1, const IntervalFunction& g2) {
    bool free = g1.flags().bracket_independent && g2.flags().bracket_independent;
    auto eval = [g1, g2](const Rect& t) { return g1(x_interval(t)) * g2(y_interval(t)); };
    auto hints = [g1, g2](const Rect& region, int budget) {
        RectHint h;
        Region rx = Region::interval(to_dyadic(region.x0), to_dyadic(region.x1));
        Region ry = Region::interval(to_dyadic(region.y0), to_dyadic(region.y1));
        for (const Dyadic& p : g1.special_points(rx, budget)) h.x_lines.push_back(to_coord(p));
        for (const Dyadic& p : g2.special_points(ry, budget)) h.y_lines.push_back(to_coord(p));
        std::vector<RectHint> out;
        if (!h.x_lines.empty() || !h.y_lines.empty()) out.push_back(std::move(h));
        return out;
    };
    return RectFunction(g1.name() + "*" + g2.name(), eval, free, hints);
}

RectFunction area_function() {
    return RectFunction("area", [](const Rect& t) { return to_double(t.area()); });
}

double riemann_sum_2d(const RectFunction& g, const RectDivision& d) {
    double s = 0.0;
    for (const Rect& c : d.cells()) s = ext_add(s, g(c));
    return s;
}

int planar_grid_level(const Dyadic& e) {
    // side^2 * 2 < e^2
    int j = 0;
    while (!(Dyadic::pow2(-2 * j + 1) < e * e)) ++j;
    return j;
}

std::vector<Dyadic> planar_default_schedule() {
    return SearchConfig::default_schedule(2, 6);
}

namespace {

// A product grid inside one block of a candidate.
struct Block {
    std::vector<Coord> xs;
    std::vector<Coord> ys;
};

std::vector<Coord> grid_lines(const Coord& lo, const Coord& hi, int level) {
    std::vector<Coord> out{lo};
    std::int64_t scale = std::int64_t{1} << level;
    Coord a = lo * scale, b = hi * scale;
    std::int64_t k0 = floor_div(a.numerator(), a.denominator()) + 1;
    std::int64_t k1 = -floor_div(-b.numerator(), b.denominator()) - 1;
    for (std::int64_t k = k0; k <= k1; ++k) out.emplace_back(k, scale);
    out.push_back(hi);
    return out;
}

void tidy(std::vector<Coord>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Coord> clip(const std::vector<Coord>& lines, const Coord& lo, const Coord& hi) {
    std::vector<Coord> out{lo, hi};
    for (const Coord& c : lines)
        if (lo < c && c < hi) out.push_back(c);
    tidy(out);
    return out;
}

bool inside(const Rect& r, const Rect& s) {
    return r.x0 <= s.x0 && s.x1 <= r.x1 && r.y0 <= s.y0 && s.y1 <= r.y1;
}

// Recursive guillotine tiling keeping each seed whole.
class Tiler {
public:
    Tiler(int level, const PermanentLines& permanent) : level_(level), permanent_(permanent) {}

    bool tile(const Rect& r, std::vector<Seed> seeds, std::vector<Block>& out) const {
        if (seeds.empty()) {
            out.push_back(leaf(r, true, true));
            return true;
        }
        if (seeds.size() == 1) {
            const Seed& s = seeds.front();
            if (r.x0 < s.rect.x0) out.push_back(leaf(Rect(r.x0, s.rect.x0, r.y0, r.y1), true, true));
            if (s.rect.x1 < r.x1) out.push_back(leaf(Rect(s.rect.x1, r.x1, r.y0, r.y1), true, true));
            if (r.y0 < s.rect.y0) out.push_back(leaf(Rect(s.rect.x0, s.rect.x1, r.y0, s.rect.y0), true, true));
            if (s.rect.y1 < r.y1) out.push_back(leaf(Rect(s.rect.x0, s.rect.x1, s.rect.y1, r.y1), true, true));
            out.push_back(leaf(s.rect, s.split_x, s.split_y));
            return true;
        }
        for (bool vertical : {true, false}) {
            auto lo = [vertical](const Seed& s) { return vertical ? s.rect.x0 : s.rect.y0; };
            auto hi = [vertical](const Seed& s) { return vertical ? s.rect.x1 : s.rect.y1; };
            std::sort(seeds.begin(), seeds.end(), [&](const Seed& a, const Seed& b) { return lo(a) < lo(b); });
            Coord reach = hi(seeds.front());
            for (std::size_t i = 1; i < seeds.size(); ++i) {
                if (reach <= lo(seeds[i])) {
                    std::vector<Seed> first(seeds.begin(), seeds.begin() + i), second(seeds.begin() + i, seeds.end());
                    Rect a = vertical ? Rect(r.x0, reach, r.y0, r.y1) : Rect(r.x0, r.x1, r.y0, reach);
                    Rect b = vertical ? Rect(reach, r.x1, r.y0, r.y1) : Rect(r.x0, r.x1, reach, r.y1);
                    return tile(a, std::move(first), out) && tile(b, std::move(second), out);
                }
                reach = std::max(reach, hi(seeds[i]));
            }
        }
        return false;
    }

private:
    Block leaf(const Rect& r, bool grid_x, bool grid_y) const {
        Block b;
        b.xs = grid_x ? grid_lines(r.x0, r.x1, level_) : std::vector<Coord>{r.x0, r.x1};
        b.ys = grid_y ? grid_lines(r.y0, r.y1, level_) : std::vector<Coord>{r.y0, r.y1};
        for (const Coord& c : permanent_.x)
            if (r.x0 < c && c < r.x1) b.xs.push_back(c);
        for (const Coord& c : permanent_.y)
            if (r.y0 < c && c < r.y1) b.ys.push_back(c);
        tidy(b.xs);
        tidy(b.ys);
        return b;
    }

    int level_;
    const PermanentLines& permanent_;
};

// Lines of a restricted candidate: the grid without lines crossing unsplit
// seeds, plus seed sides, hint lines and permanent lines.
Block restricted_block(const Rect& region, int level, const RectHint* hint, const PermanentLines& permanent) {
    auto axis = [&](bool is_x) {
        Coord lo = is_x ? region.x0 : region.y0, hi = is_x ? region.x1 : region.y1;
        std::vector<Coord> grid = grid_lines(lo, hi, level);
        std::vector<Coord> out;
        for (const Coord& c : grid) {
            bool blocked = false;
            if (hint)
                for (const Seed& s : hint->seeds) {
                    bool split = is_x ? s.split_x : s.split_y;
                    Coord a = is_x ? s.rect.x0 : s.rect.y0, b = is_x ? s.rect.x1 : s.rect.y1;
                    if (!split && a < c && c < b) blocked = true;
                }
            if (!blocked || c == lo || c == hi) out.push_back(c);
        }
        if (hint) {
            for (const Seed& s : hint->seeds) {
                out.push_back(is_x ? s.rect.x0 : s.rect.y0);
                out.push_back(is_x ? s.rect.x1 : s.rect.y1);
            }
            for (const Coord& c : is_x ? hint->x_lines : hint->y_lines) out.push_back(c);
        }
        for (const Coord& c : is_x ? permanent.x : permanent.y) out.push_back(c);
        return clip(out, lo, hi);
    };
    return Block{axis(true), axis(false)};
}

struct Spec {
    int level;
    int hint;  // -1: bare grid
    bool guillotine;
};

struct Outcome {
    bool valid = false;
    Coord norm_squared = 0;
    double min_regularity = 1.0;
    std::size_t cells = 0;
    double max = 0.0;
    double min = 0.0;
};

struct CellChoice {
    double max, min;
    std::uint8_t max_code, min_code;  // x_variant * 4 + y_variant
};

CellChoice choose(const RectFunction& g, const Rect& cell) {
    if (g.bracket_free()) {
        double v = g(cell);
        return {v, v, 15, 15};
    }
    CellChoice c{0, 0, 0, 0};
    for (std::uint8_t code = 0; code < 16; ++code) {
        double v = g(cell.with_variants(code >> 2, code & 3));
        if (code == 0 || v > c.max) {
            c.max = v;
            c.max_code = code;
        }
        if (code == 0 || v < c.min) {
            c.min = v;
            c.min_code = code;
        }
    }
    return c;
}

template <class Fn>
void for_each_cell(const std::vector<Block>& blocks, Fn&& fn) {
    for (const Block& b : blocks)
        for (std::size_t i = 0; i + 1 < b.xs.size(); ++i)
            for (std::size_t k = 0; k + 1 < b.ys.size(); ++k) fn(Rect(b.xs[i], b.xs[i + 1], b.ys[k], b.ys[k + 1]));
}

Dyadic norm_bound(const Coord& norm_squared) {
    constexpr int kLevel = 30;
    double d = std::sqrt(to_double(norm_squared));
    auto k = static_cast<std::int64_t>(std::ceil(d * std::ldexp(1.0, kLevel)));
    while (Coord(k, std::int64_t{1} << kLevel) * Coord(k, std::int64_t{1} << kLevel) < norm_squared) ++k;
    return Dyadic(k, kLevel);
}

}  // namespace

PlanarReport estimate_norm_limits_2d(const RectFunction& g, const Rect& region, PlanarMode mode,
                                     const SearchConfig& cfg, double min_regularity,
                                     const PermanentLines& permanent) {
    cfg.validate();
    Rect whole(region.x0, region.x1, region.y0, region.y1);
    std::vector<RectHint> hints;
    if (cfg.use_special_points)
        for (RectHint& h : g.hints(whole, cfg.hint_budget)) {
            std::erase_if(h.seeds, [&](const Seed& s) { return !inside(whole, s.rect); });
            hints.push_back(std::move(h));
        }
    for (const Coord& c : permanent.x)
        if (c < whole.x0 || c > whole.x1) throw NotContained("permanent line x=" + coord_str(c));
    for (const Coord& c : permanent.y)
        if (c < whole.y0 || c > whole.y1) throw NotContained("permanent line y=" + coord_str(c));

    int first = planar_grid_level(cfg.e_schedule.front());
    int last = planar_grid_level(cfg.e_schedule.back()) + cfg.grid_density;
    std::vector<Spec> specs;
    for (int level = first; level <= last; ++level) {
        specs.push_back({level, -1, false});
        for (int h = 0; h < static_cast<int>(hints.size()); ++h) {
            specs.push_back({level, h, false});
            if (mode == PlanarMode::extended && !hints[h].seeds.empty()) specs.push_back({level, h, true});
        }
    }
    if (specs.size() > cfg.max_candidates) throw BudgetExceeded("too many planar candidates");

    auto blocks_of = [&](const Spec& s, std::vector<Block>& out) {
        const RectHint* h = s.hint < 0 ? nullptr : &hints[s.hint];
        if (!s.guillotine) {
            out.push_back(restricted_block(whole, s.level, h, permanent));
            return true;
        }
        return Tiler(s.level, permanent).tile(whole, h->seeds, out);
    };

    std::vector<Outcome> outcomes(specs.size());
    parallel_for(specs.size(), cfg.threads, [&](std::size_t i) {
        std::vector<Block> blocks;
        if (!blocks_of(specs[i], blocks)) return;
        Outcome o;
        for (const Block& b : blocks) o.cells += (b.xs.size() - 1) * (b.ys.size() - 1);
        if (o.cells > cfg.max_points) throw BudgetExceeded("planar candidate with " + std::to_string(o.cells) + " cells");
        for_each_cell(blocks, [&](const Rect& cell) {
            o.norm_squared = std::max(o.norm_squared, cell.diameter_squared());
            o.min_regularity = std::min(o.min_regularity, cell.regularity());
            CellChoice c = choose(g, cell);
            o.max = ext_add(o.max, c.max);
            o.min = ext_add(o.min, c.min);
        });
        o.valid = o.min_regularity >= min_regularity;
        outcomes[i] = o;
    });

    auto origin = [&](const Spec& s) {
        std::string o = "grid " + std::to_string(s.level);
        if (s.hint >= 0) o += (s.guillotine ? " tiling hint " : " lines hint ") + std::to_string(s.hint);
        return o;
    };
    auto materialize = [&](std::size_t i, bool upper) -> std::optional<RectDivision> {
        if (outcomes[i].cells > cfg.witness_limit) return std::nullopt;
        std::vector<Block> blocks;
        blocks_of(specs[i], blocks);
        std::vector<Rect> cells;
        for_each_cell(blocks, [&](const Rect& cell) {
            CellChoice c = choose(g, cell);
            std::uint8_t code = upper ? c.max_code : c.min_code;
            cells.push_back(cell.with_variants(code >> 2, code & 3));
        });
        return RectDivision(whole, std::move(cells), specs[i].guillotine ? PlanarMode::extended : PlanarMode::restricted);
    };

    PlanarReport rep;
    rep.report.quantity = "norm_2d_" + to_string(mode);
    std::size_t best_up = 0, best_lo = 0;
    for (const Dyadic& e : cfg.e_schedule) {
        Coord e2 = to_coord(e) * to_coord(e);
        LevelEstimate lvl;
        lvl.e = e;
        bool found = false;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const Outcome& o = outcomes[i];
            if (!o.valid || !(o.norm_squared < e2)) continue;
            if (!found || o.max > lvl.upper) {
                lvl.upper = o.max;
                best_up = i;
            }
            if (!found || o.min < lvl.lower) {
                lvl.lower = o.min;
                best_lo = i;
            }
            found = true;
        }
        if (!found) throw BudgetExceeded("no planar candidate with norm below " + e.str());
        lvl.upper_witness = {origin(specs[best_up]), norm_bound(outcomes[best_up].norm_squared), outcomes[best_up].cells, {}};
        lvl.lower_witness = {origin(specs[best_lo]), norm_bound(outcomes[best_lo].norm_squared), outcomes[best_lo].cells, {}};
        rep.report.levels.push_back(lvl);
    }
    rep.upper_witness = materialize(best_up, true);
    rep.lower_witness = materialize(best_lo, false);
    rep.report.verdict = classify(rep.report.levels, cfg.tol);
    return rep;
}

namespace {

// Inner y-limits per x-interval, shared between threads.
class InnerYLimits {
public:
    InnerYLimits(IntervalPairFunction g, Region ry, SearchConfig cfg)
        : g_(std::move(g)), ry_(std::move(ry)), cfg_(std::move(cfg)) {
        cfg_.threads = 1;
    }

    std::pair<double, double> at(const Interval& ix) {
        auto key = std::make_tuple(ix.lo(), ix.hi(), ix.variant());
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        IntervalFunction inner("inner", [g = g_, ix](const Interval& iy) { return g(ix, iy); });
        LimitReport r = estimate_norm_limits(inner, ry_, cfg_);
        std::pair<double, double> v{r.finest().lower, r.finest().upper};
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(key, v);
        return v;
    }

private:
    IntervalPairFunction g_;
    Region ry_;
    SearchConfig cfg_;
    std::mutex mutex_;
    std::map<std::tuple<Dyadic, Dyadic, int>, std::pair<double, double>> cache_;
};

}  // namespace

FubiniChain fubini_chain(const IntervalPairFunction& g, const std::string& name, const Rect& t,
                         const SearchConfig& cfg) {
    cfg.validate();
    Region rx = Region::interval(to_dyadic(t.x0), to_dyadic(t.x1));
    Region ry = Region::interval(to_dyadic(t.y0), to_dyadic(t.y1));
    auto inner = std::make_shared<InnerYLimits>(g, ry, cfg);
    IntervalFunction outer_upper(name + "_inner_upper", [inner](const Interval& ix) { return inner->at(ix).second; });
    IntervalFunction outer_lower(name + "_inner_lower", [inner](const Interval& ix) { return inner->at(ix).first; });
    LimitReport it_upper = estimate_norm_limits(outer_upper, rx, cfg);
    LimitReport it_lower = estimate_norm_limits(outer_lower, rx, cfg);

    RectFunction planar(name, [g](const Rect& r) { return g(x_interval(r), y_interval(r)); }, false);
    LimitReport direct = estimate_norm_limits_2d(planar, t, PlanarMode::extended, cfg).report;

    FubiniChain out;
    double tol = cfg.tol;
    for (std::size_t k = 0; k < direct.levels.size(); ++k) {
        FubiniLevel l;
        l.e = direct.levels[k].e;
        l.direct_lower = direct.levels[k].lower;
        l.direct_upper = direct.levels[k].upper;
        l.iterated_lower = it_lower.levels[k].lower;
        l.iterated_upper = it_upper.levels[k].upper;
        // columns cut by the outer witness and filled with inner witnesses
        l.lower = std::min(l.direct_lower, l.iterated_lower);
        l.upper = std::max(l.direct_upper, l.iterated_upper);
        if (!(l.lower <= l.iterated_lower + tol && l.iterated_lower <= l.iterated_upper + tol &&
              l.iterated_upper <= l.upper + tol))
            out.holds = false;
        if (l.lower < l.iterated_lower - tol || l.iterated_lower < l.iterated_upper - tol ||
            l.iterated_upper < l.upper - tol)
            out.strict_somewhere = true;
        out.levels.push_back(l);
    }
    return out;
}

std::string to_string(ProductBv v) {
    switch (v) {
        case ProductBv::holds:
            return "holds";
        case ProductBv::fails:
            return "fails";
        case ProductBv::not_applicable:
            return "not_applicable";
    }
    return "";
}

ProductBvReport product_bv_check(const IntervalFunction& g1, const Region& rx, const IntervalFunction& g2,
                                 const Region& ry, const SearchConfig& cfg) {
    if (rx.components().size() != 1 || ry.components().size() != 1)
        throw NotContained("product check needs interval regions");
    ProductBvReport rep;
    VariationReport v1 = variation(g1, rx, cfg);
    VariationReport v2 = variation(g2, ry, cfg);
    rep.var_x = v1.var.finest().upper;
    rep.var_y = v2.var.finest().upper;
    if (!v1.bounded || !v2.bounded) return rep;
    SearchConfig c = cfg;
    c.e_schedule = planar_default_schedule();
    Rect t(to_coord(rx.lo()), to_coord(rx.hi()), to_coord(ry.lo()), to_coord(ry.hi()));
    RectFunction prod = product_function(abs(g1), abs(g2));
    rep.var_2d = estimate_norm_limits_2d(prod, t, PlanarMode::restricted, c).report.finest().upper;
    rep.verdict = rep.var_2d <= rep.var_x * rep.var_y + cfg.tol ? ProductBv::holds : ProductBv::fails;
    return rep;
}

namespace {

bool is_power_of_four_inverse(const Coord& side, int extra, int& n) {
    // side == 2^-(2n + extra), n >= 1
    if (side.numerator() != 1) return false;
    std::int64_t den = side.denominator();
    for (n = 1; 2 * n + extra <= 62; ++n)
        if (den == (std::int64_t{1} << (2 * n + extra))) return true;
    return false;
}

constexpr int kSeedDepth = 5;

PlanarFixture centred_squares() {
    const Coord px(1, 3), qx(2, 3), cy(1, 2);
    auto eval = [=](const Rect& t) {
        if (t.width() != t.height()) return 0.0;
        int n = 0;
        if (t.x0 + t.x1 == Coord(2) * px && t.y0 + t.y1 == Coord(2) * cy && is_power_of_four_inverse(t.width(), 0, n)) return 1.0;
        if (t.x0 + t.x1 == Coord(2) * qx && t.y0 + t.y1 == Coord(2) * cy && is_power_of_four_inverse(t.width(), 1, n)) return 1.0;
        return 0.0;
    };
    auto square = [](const Coord& x, const Coord& y, const Coord& side) {
        return Seed{Rect(x - side / 2, x + side / 2, y - side / 2, y + side / 2)};
    };
    auto hints = [=](const Rect&, int budget) {
        int depth = std::min(budget, kSeedDepth);
        std::vector<RectHint> out;
        for (int n = 1; n <= depth; ++n) out.push_back({{square(px, cy, Coord(1, std::int64_t{1} << (2 * n)))}, {}, {}});
        for (int n = 1; n <= depth; ++n) out.push_back({{square(qx, cy, Coord(1, std::int64_t{1} << (2 * n + 1)))}, {}, {}});
        for (int n = 1; n <= depth; ++n)
            for (int m = 1; m <= depth; ++m)
                out.push_back({{square(px, cy, Coord(1, std::int64_t{1} << (2 * n))),
                                square(qx, cy, Coord(1, std::int64_t{1} << (2 * m + 1)))},
                               {},
                               {}});
        return out;
    };
    return {"centred_squares",
            "1 on squares centred at (1/3,1/2) of side 2^-2n and at (2/3,1/2) of side 2^-(2n+1)",
            RectFunction("centred_squares", eval, true, hints),
            Rect(0, 1, 0, 1),
            {},
            2.0,
            1.0};
}

PlanarFixture bottom_strips() {
    const Coord half(1, 2);
    auto eval = [=](const Rect& t) {
        if (t.y0 != Coord(0)) return 0.0;
        int n = 0;
        if (t.x1 <= half && is_power_of_four_inverse(t.height(), 0, n)) return to_double(t.width());
        if (half <= t.x0 && is_power_of_four_inverse(t.height(), 1, n)) return to_double(t.width());
        return 0.0;
    };
    auto hints = [=](const Rect&, int budget) {
        int depth = std::min(budget, kSeedDepth);
        auto left = [&](int n) { return Seed{Rect(0, half, 0, Coord(1, std::int64_t{1} << (2 * n))), true, false}; };
        auto right = [&](int n) { return Seed{Rect(half, 1, 0, Coord(1, std::int64_t{1} << (2 * n + 1))), true, false}; };
        std::vector<RectHint> out;
        for (int n = 1; n <= depth; ++n) out.push_back({{left(n)}, {}, {}});
        for (int n = 1; n <= depth; ++n) out.push_back({{right(n)}, {}, {}});
        for (int n = 1; n <= depth; ++n)
            for (int m = 1; m <= depth; ++m) out.push_back({{left(n), right(m)}, {}, {}});
        return out;
    };
    PermanentLines permanent;
    permanent.y.push_back(0);
    return {"bottom_strips",
            "width of strips on y=0, of height 2^-2n left of x=1/2 and 2^-(2n+1) right of it",
            RectFunction("bottom_strips", eval, true, hints),
            Rect(0, 1, 0, 1),
            permanent,
            1.0,
            0.5};
}

}  // namespace

PlanarFixture planar_fixture(const std::string& name) {
    if (name == "centred_squares") return centred_squares();
    if (name == "bottom_strips") return bottom_strips();
    throw UnknownFixture(name);
}

std::vector<std::string> planar_fixture_names() {
    return {"centred_squares", "bottom_strips"};
}

FubiniFixture fubini_fixture(const std::string& name) {
    if (name == "product") {
        IntervalFunction fx = stieltjes(polynomial({0, 0, 1}, "x^2"));
        IntervalFunction fy = stieltjes(polynomial({0, -1, 1}, "y^2-y"));
        return {name, "S(x^2; I_x) * S(y^2-y; I_y) on [0,1]x[0,2]", [fx, fy](const Interval& x, const Interval& y) { return fx(x) * fy(y); }, Rect(0, 1, 0, 2)};
    }
    if (name == "area") {
        return {name, "m(I_x) * m(I_y)", [](const Interval& x, const Interval& y) { return (x.length() * y.length()).to_double(); },
                Rect(0, 1, 0, 1)};
    }
    if (name == "asymmetric") {
        const Dyadic mid(1, 1);
        return {name,
                "m(I_x) when I_y holds 1/2, bracket-sensitive",
                [mid](const Interval& x, const Interval& y) { return y.contains(mid) ? x.length().to_double() : 0.0; },
                Rect(0, 1, 0, 1)};
    }
    throw UnknownFixture(name);
}

std::vector<std::string> fubini_fixture_names() {
    return {"product", "area", "asymmetric"};
}

}  // namespace ivfn
