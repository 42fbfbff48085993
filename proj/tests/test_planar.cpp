#include <gtest/gtest.h>

#include <cmath>

#include "ivfn/catalog.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/planar.hpp"

using namespace ivfn;

namespace {

SearchConfig planar() {
    SearchConfig cfg;
    cfg.e_schedule = planar_default_schedule();
    return cfg;
}

SearchConfig short_planar() {
    SearchConfig cfg;
    cfg.e_schedule = SearchConfig::default_schedule(2, 4);
    return cfg;
}

// Uniform n x m grid of [0,1]^2 built from explicit lines.
std::vector<Rect> grid(const std::vector<Coord>& xs, const std::vector<Coord>& ys) {
    std::vector<Rect> cells;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) cells.emplace_back(xs[i], xs[i + 1], ys[j], ys[j + 1]);
    return cells;
}

const Rect kUnit(0, 1, 0, 1);

}  // namespace

TEST(Rect, Geometry) {
    Rect r(0, Coord(1, 2), 0, Coord(1, 4), 2, 1);
    EXPECT_EQ(r.area(), Coord(1, 8));
    EXPECT_EQ(r.diameter_squared(), Coord(5, 16));
    EXPECT_DOUBLE_EQ(r.regularity(), 0.5);
    EXPECT_EQ(r.str(), "[0,1/2)x(0,1/4]");
    EXPECT_THROW(Rect(0, 0, 0, 1), DegenerateInterval);
}

TEST(RectDivision, Validates) {
    std::vector<Coord> half{0, Coord(1, 2), 1};
    EXPECT_NO_THROW(RectDivision(kUnit, grid(half, half), PlanarMode::restricted));
    std::vector<Rect> gap = grid(half, half);
    gap.pop_back();
    EXPECT_THROW(RectDivision(kUnit, gap, PlanarMode::extended), DegenerateInterval);
    std::vector<Rect> overlap = grid(half, half);
    overlap.emplace_back(0, Coord(1, 4), 0, Coord(1, 4));
    EXPECT_THROW(RectDivision(kUnit, overlap, PlanarMode::extended), DegenerateInterval);
    std::vector<Rect> outside{Rect(0, 2, 0, 1)};
    EXPECT_THROW(RectDivision(kUnit, outside, PlanarMode::extended), NotContained);
    // An L-shaped tiling is not a grid.
    std::vector<Rect> tiling{Rect(0, Coord(1, 2), 0, 1), Rect(Coord(1, 2), 1, 0, Coord(1, 2)),
                             Rect(Coord(1, 2), 1, Coord(1, 2), 1), };
    EXPECT_NO_THROW(RectDivision(kUnit, tiling, PlanarMode::extended));
    EXPECT_THROW(RectDivision(kUnit, tiling, PlanarMode::restricted), DegenerateInterval);
}

TEST(RiemannSum2d, AreaAndProductTelescope) {
    std::vector<Coord> xs{0, Coord(1, 8), Coord(3, 8), Coord(3, 4), 1}, ys{0, Coord(1, 2), Coord(5, 8), 1};
    RectDivision d(kUnit, grid(xs, ys), PlanarMode::restricted);
    EXPECT_EQ(riemann_sum_2d(area_function(), d), 1.0);
    RectFunction xy = product_function(stieltjes(identity_function()), stieltjes(identity_function()));
    EXPECT_NEAR(riemann_sum_2d(xy, d), 1.0, 1e-15);
}

TEST(RiemannSum2d, IsolatedSpecialSquareContributesOne) {
    PlanarFixture f = planar_fixture("centred_squares");
    Coord s(1, 16), px(1, 3), cy(1, 2);
    std::vector<Coord> xs{0, px - s / 2, px + s / 2, 1}, ys{0, cy - s / 2, cy + s / 2, 1};
    EXPECT_EQ(riemann_sum_2d(f.g, RectDivision(kUnit, grid(xs, ys), PlanarMode::restricted)), 1.0);
}

TEST(PlanarLimits, CentredSquaresGap) {
    PlanarFixture f = planar_fixture("centred_squares");
    SearchConfig cfg = planar();
    cfg.witness_limit = std::size_t{1} << 15;
    PlanarReport ext = estimate_norm_limits_2d(f.g, f.region, PlanarMode::extended, cfg);
    PlanarReport res = estimate_norm_limits_2d(f.g, f.region, PlanarMode::restricted, cfg);
    EXPECT_EQ(ext.report.finest().upper, 2.0);
    EXPECT_EQ(res.report.finest().upper, 1.0);
    ASSERT_TRUE(ext.upper_witness.has_value());
    EXPECT_EQ(riemann_sum_2d(f.g, *ext.upper_witness), 2.0);
}

TEST(PlanarLimits, BottomStripsGap) {
    PlanarFixture f = planar_fixture("bottom_strips");
    SearchConfig cfg = planar();
    EXPECT_EQ(estimate_norm_limits_2d(f.g, f.region, PlanarMode::extended, cfg, 0.0, f.permanent).report.finest().upper, 1.0);
    EXPECT_EQ(estimate_norm_limits_2d(f.g, f.region, PlanarMode::restricted, cfg, 0.0, f.permanent).report.finest().upper, 0.5);
}

TEST(PlanarLimits, RestrictedNeverExceedsExtended) {
    SearchConfig cfg = short_planar();
    for (const std::string& name : planar_fixture_names()) {
        PlanarFixture f = planar_fixture(name);
        LimitReport ext = estimate_norm_limits_2d(f.g, f.region, PlanarMode::extended, cfg, 0.0, f.permanent).report;
        LimitReport res = estimate_norm_limits_2d(f.g, f.region, PlanarMode::restricted, cfg, 0.0, f.permanent).report;
        for (std::size_t k = 0; k < ext.levels.size(); ++k) EXPECT_LE(res.levels[k].upper, ext.levels[k].upper) << name;
    }
}

TEST(PlanarLimits, AreaConvergesInBothModes) {
    SearchConfig cfg = short_planar();
    for (PlanarMode m : {PlanarMode::restricted, PlanarMode::extended}) {
        LimitReport r = estimate_norm_limits_2d(area_function(), Rect(0, 1, 0, 2), m, cfg).report;
        EXPECT_EQ(r.verdict.kind, VerdictKind::converged);
        EXPECT_EQ(r.verdict.value, 2.0);
    }
}

TEST(PlanarLimits, WitnessCellsSumToArea) {
    PlanarFixture f = planar_fixture("centred_squares");
    PlanarReport r = estimate_norm_limits_2d(f.g, f.region, PlanarMode::extended, short_planar());
    ASSERT_TRUE(r.upper_witness.has_value());
    Coord total = 0;
    for (const Rect& c : r.upper_witness->cells()) total += c.area();
    EXPECT_EQ(total, f.region.area());
}

TEST(PlanarLimits, RegularityFilter) {
    SearchConfig cfg = short_planar();
    PlanarReport r = estimate_norm_limits_2d(area_function(), kUnit, PlanarMode::extended, cfg, 0.5);
    ASSERT_TRUE(r.upper_witness.has_value());
    EXPECT_GE(r.upper_witness->min_regularity(), 0.5);
    EXPECT_EQ(r.report.verdict.value, 1.0);
}

TEST(Fubini, AreaAllEqual) {
    FubiniFixture f = fubini_fixture("area");
    FubiniChain c = fubini_chain(f.g, f.name, f.region, short_planar());
    EXPECT_TRUE(c.holds);
    for (const FubiniLevel& l : c.levels)
        for (double v : {l.lower, l.iterated_lower, l.iterated_upper, l.upper}) EXPECT_EQ(v, 1.0);
}

TEST(Fubini, ProductCollapses) {
    FubiniFixture f = fubini_fixture("product");
    FubiniChain c = fubini_chain(f.g, f.name, f.region, short_planar());
    EXPECT_TRUE(c.holds);
    // S(x^2) over [0,1] is 1, S(y^2-y) over [0,2] is 2.
    for (const FubiniLevel& l : c.levels)
        for (double v : {l.lower, l.iterated_lower, l.iterated_upper, l.upper}) EXPECT_NEAR(v, 2.0, 1e-9);
}

TEST(Fubini, AsymmetricIsStrict) {
    FubiniFixture f = fubini_fixture("asymmetric");
    FubiniChain c = fubini_chain(f.g, f.name, f.region, planar());
    EXPECT_TRUE(c.holds);
    EXPECT_TRUE(c.strict_somewhere);
    for (const FubiniLevel& l : c.levels) {
        EXPECT_LE(l.lower, l.iterated_lower);
        EXPECT_LE(l.iterated_lower, l.iterated_upper);
        EXPECT_LE(l.iterated_upper, l.upper);
    }
}

TEST(ProductBv, Verdicts) {
    SearchConfig cfg;
    cfg.e_schedule = SearchConfig::default_schedule(3, 8);
    Region unit = Region::interval(0, 1);
    ProductBvReport len = product_bv_check(length_function(), unit, length_function(), unit, cfg);
    EXPECT_EQ(len.verdict, ProductBv::holds);
    EXPECT_NEAR(len.var_2d, 1.0, 1e-12);

    ProductBvReport mixed = product_bv_check(stieltjes(identity_function()), unit,
                                             stieltjes(polynomial({0, 1, -1}, "x(1-x)")), unit, cfg);
    EXPECT_EQ(mixed.verdict, ProductBv::holds);
    EXPECT_LE(mixed.var_2d, 0.5 + 1e-9);

    Fixture blocks = fixture("dyadic_blocks");
    EXPECT_EQ(product_bv_check(blocks.g, blocks.region, length_function(), unit, cfg).verdict, ProductBv::not_applicable);
}

TEST(PlanarFixtures, Registry) {
    EXPECT_EQ(planar_fixture_names().size(), 2u);
    EXPECT_EQ(fubini_fixture_names().size(), 3u);
    EXPECT_THROW(planar_fixture("nope"), UnknownFixture);
    EXPECT_THROW(fubini_fixture("nope"), UnknownFixture);
}
