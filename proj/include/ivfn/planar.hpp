#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "ivfn/integrator.hpp"

namespace ivfn {

/// Exact planar coordinate; fixtures need thirds as well as dyadics.
using Coord = boost::rational<std::int64_t>;

Coord to_coord(const Dyadic& d);
std::string coord_str(const Coord& c);

/// Axis-parallel rectangle. Each side pair carries a bracket variant code
/// (bit 1: low end closed, bit 0: high end closed), so 16 rectangles share
/// one closure.
struct Rect {
    Coord x0, x1, y0, y1;
    std::uint8_t x_variant = 3;
    std::uint8_t y_variant = 3;

    Rect() = default;
    /// Throws DegenerateInterval unless both sides are positive.
    Rect(Coord x0, Coord x1, Coord y0, Coord y1, std::uint8_t xv = 3, std::uint8_t yv = 3);

    Coord width() const { return x1 - x0; }
    Coord height() const { return y1 - y0; }
    Coord area() const { return width() * height(); }
    Coord diameter_squared() const { return width() * width() + height() * height(); }
    double diameter() const;
    /// short side / long side
    double regularity() const;
    Rect with_variants(std::uint8_t xv, std::uint8_t yv) const;
    bool same_closure(const Rect& o) const { return x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1; }
    /// "[a,b)x(c,d]"
    std::string str() const;
};

enum class PlanarMode { restricted, extended };
std::string to_string(PlanarMode m);

/// Non-overlapping rectangles whose closures cover the region.
class RectDivision {
public:
    /// Throws NotContained, or DegenerateInterval on overlap or a gap.
    RectDivision(Rect region, std::vector<Rect> cells, PlanarMode mode);
    const Rect& region() const { return region_; }
    const std::vector<Rect>& cells() const { return cells_; }
    PlanarMode mode() const { return mode_; }
    Coord norm_squared() const;
    double norm() const;
    double min_regularity() const;

private:
    Rect region_;
    std::vector<Rect> cells_;
    PlanarMode mode_;
};

/// A rectangle placed whole into candidate divisions. Grid lines crossing it
/// are dropped unless splitting along that axis is allowed.
struct Seed {
    Rect rect;
    bool split_x = false;
    bool split_y = false;
};

/// Seeds used together in one candidate division, plus extra cut lines.
struct RectHint {
    std::vector<Seed> seeds;
    std::vector<Coord> x_lines;
    std::vector<Coord> y_lines;
};
using RectHintSource = std::function<std::vector<RectHint>(const Rect& region, int budget)>;

class RectFunction {
public:
    using Eval = std::function<double(const Rect&)>;
    RectFunction(std::string name, Eval eval, bool bracket_free = true, RectHintSource hints = {});
    double operator()(const Rect& t) const;
    const std::string& name() const { return name_; }
    bool bracket_free() const { return bracket_free_; }
    std::vector<RectHint> hints(const Rect& region, int budget) const;

private:
    std::string name_;
    Eval eval_;
    bool bracket_free_;
    RectHintSource hints_;
};

/// g1(I_x) * g2(I_y)
RectFunction product_function(const IntervalFunction& g1, const IntervalFunction& g2);
RectFunction area_function();

double riemann_sum_2d(const RectFunction& g, const RectDivision& d);

/// Smallest j with a square of side 2^-j having diameter < e.
int planar_grid_level(const Dyadic& e);
std::vector<Dyadic> planar_default_schedule();

struct PlanarReport {
    LimitReport report;  // witness norms are diameters rounded up to 2^-30
    std::optional<RectDivision> upper_witness;  // finest level
    std::optional<RectDivision> lower_witness;
};

/// Candidates: grids at several levels, alone or with the cut lines of each
/// hint (restricted); in extended mode also guillotine tilings that keep each
/// hint's seeds whole. Cells are optimized over their 16 variants.
/// Cut lines present in every candidate.
struct PermanentLines {
    std::vector<Coord> x;
    std::vector<Coord> y;
};

/// With `min_regularity` > 0 candidates holding a thinner cell are skipped.
/// Throws BudgetExceeded when no candidate is finer than some norm bound.
PlanarReport estimate_norm_limits_2d(const RectFunction& g, const Rect& region, PlanarMode mode,
                                     const SearchConfig& cfg, double min_regularity = 0.0,
                                     const PermanentLines& permanent = {});

using IntervalPairFunction = std::function<double(const Interval& x, const Interval& y)>;

struct FubiniLevel {
    Dyadic e;
    double direct_lower = 0.0;  // planar candidates alone
    double direct_upper = 0.0;
    double lower = 0.0;
    double iterated_lower = 0.0;
    double iterated_upper = 0.0;
    double upper = 0.0;
};

struct FubiniChain {
    std::vector<FubiniLevel> levels;
    bool holds = true;
    bool strict_somewhere = false;
};

/// Planar limits against the outer x-limit of the inner y-limits. Column
/// divisions assembled from inner witnesses belong to the planar family, so
/// the planar terms are taken over the direct candidates and those columns.
FubiniChain fubini_chain(const IntervalPairFunction& g, const std::string& name, const Rect& t,
                         const SearchConfig& cfg);

enum class ProductBv { holds, fails, not_applicable };
std::string to_string(ProductBv v);

struct ProductBvReport {
    ProductBv verdict = ProductBv::not_applicable;
    double var_2d = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
};

/// Restricted planar variation of |g1*g2| against Var(g1) * Var(g2). The
/// planar estimate uses the planar default schedule, the rest comes from cfg.
ProductBvReport product_bv_check(const IntervalFunction& g1, const Region& rx, const IntervalFunction& g2,
                                 const Region& ry, const SearchConfig& cfg);

struct PlanarFixture {
    std::string name;
    std::string summary;
    RectFunction g;
    Rect region;
    PermanentLines permanent;
    double extended_upper = 0.0;
    double restricted_upper = 0.0;
};

/// "centred_squares" and "bottom_strips"; throws UnknownFixture.
PlanarFixture planar_fixture(const std::string& name);
std::vector<std::string> planar_fixture_names();

struct FubiniFixture {
    std::string name;
    std::string summary;
    IntervalPairFunction g;
    Rect region;
};

/// "product", "area" and "asymmetric"; throws UnknownFixture.
FubiniFixture fubini_fixture(const std::string& name);
std::vector<std::string> fubini_fixture_names();

}  // namespace ivfn
