#include <gtest/gtest.h>

#include <cmath>

#include "ivfn/catalog.hpp"
#include "ivfn/density.hpp"
#include "ivfn/variation.hpp"

using namespace ivfn;

namespace {

SearchConfig coarse(int last = 10) {
    SearchConfig cfg;
    cfg.e_schedule = SearchConfig::default_schedule(3, last);
    return cfg;
}

MeasurableSet E(const char* s) { return MeasurableSet::parse(s); }
const Region kUnit = Region::interval(0, 1);

}  // namespace

TEST(DensityKernel, LengthGivesMeasure) {
    IntervalFunction k = density_kernel(length_function(), E("[0,1/2]+[3/4,1]"));
    EXPECT_EQ(k(Interval::parse("[1/4,1]")), 0.5);
    LimitReport r = density_integral(length_function(), E("[0,1/2]+[3/4,1]"), kUnit, coarse()).report;
    EXPECT_EQ(r.verdict.kind, VerdictKind::converged);
    EXPECT_EQ(r.verdict.value, 0.75);
}

TEST(DensityKernel, NullSetGivesZero) {
    IntervalFunction g = stieltjes(polynomial({0, 0, 1}, "x^2"));
    IntervalFunction k = density_kernel(g, E("{1/2}+{3/4}"));
    EXPECT_EQ(k(Interval::parse("[0,1]")), 0.0);
    EXPECT_EQ(k(Interval::parse("[1/2,3/4]")), 0.0);
}

TEST(DensityKernel, WholeRegionGivesFunction) {
    IntervalFunction g = stieltjes(polynomial({0, 0, 1}, "x^2"));
    IntervalFunction k = density_kernel(g, E("[0,1]"));
    for (const char* s : {"[0,1/2]", "(1/4,3/8)", "[1/8,1]"})
        EXPECT_DOUBLE_EQ(k(Interval::parse(s)), g(Interval::parse(s)));
}

TEST(DensityIntegral, MatchesDerivativeIntegral) {
    PointFunction sq = polynomial({0, 0, 1}, "x^2");
    DensityReport r = density_integral(stieltjes(sq), E("[0,1/2]"), kUnit, coarse(12), &sq);
    ASSERT_TRUE(r.lebesgue_ref.has_value());
    EXPECT_NEAR(*r.lebesgue_ref, 0.25, 1e-12);
    EXPECT_NEAR(r.report.finest().upper, 0.25, 1e-4);
    EXPECT_NEAR(r.report.finest().lower, 0.25, 1e-4);
}

// E has right density 2/3 at 0 along h = 4^-k and 1/3 along h = 2 4^-k; only
// intervals starting at 0 contribute, so upper is the upper density, lower 0.
TEST(DensityIntegral, OscillatingDensityAtOrigin) {
    Fixture f = fixture("density_left_limit");
    std::string text;
    for (int k = 0; k < 30; ++k)
        text += (k ? "+" : "") + std::string("[1/2^") + std::to_string(2 * k + 1) + ",1/2^" + std::to_string(2 * k) + "]";
    DensityReport r = density_integral(f.g, MeasurableSet::parse(text), f.region, coarse());
    EXPECT_EQ(r.report.verdict.kind, VerdictKind::oscillating);
    MeasurableSet e = MeasurableSet::parse(text);
    double upper_density = 0.0;
    for (int j = 11; j <= 19; ++j) {
        Dyadic h = Dyadic::pow2(-j);
        upper_density = std::max(upper_density, intersect_measure(e, Dyadic(0), h).to_double() / h.to_double());
    }
    EXPECT_NEAR(upper_density, 2.0 / 3.0, 1e-5);
    EXPECT_NEAR(r.report.finest().upper, 2.0 / 3.0, 1.0 / 256);
    EXPECT_LE(r.report.finest().upper, upper_density + 1e-12);
    EXPECT_EQ(r.report.finest().lower, 0.0);
}

TEST(DensityIntegral, LeftLimitFixtureOnHalfLine) {
    Fixture f = fixture("density_left_limit");
    DensityReport r = density_integral(f.g, E("[0,1]"), f.region, coarse());
    EXPECT_NEAR(r.report.finest().upper, 1.0, 1e-9);
    EXPECT_NEAR(r.report.finest().lower, 0.0, 1e-9);
}

TEST(DensityIntegral, WholeRegionBracketsNormLimits) {
    SearchConfig cfg = coarse(8);
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        const Span& c = f.region.components().front();
        MeasurableSet whole({Piece{c.lo, c.hi, true, true}});
        LimitReport dens = density_integral(f.g, whole, f.region, cfg).report;
        LimitReport norm = estimate_norm_limits(f.g, f.region, cfg);
        for (std::size_t k = 0; k < norm.levels.size(); ++k) {
            EXPECT_LE(dens.levels[k].lower, norm.levels[k].lower) << name;
            EXPECT_GE(dens.levels[k].upper, norm.levels[k].upper) << name;
        }
    }
}

TEST(DensityIntegral, BoundedByVariation) {
    SearchConfig cfg = coarse(8);
    IntervalFunction g = stieltjes(polynomial({0, 1, -3, 2}, "x-3x^2+2x^3"));
    double var = variation(g, kUnit, cfg).var.finest().upper;
    for (const char* s : {"[0,1/4]", "[1/8,5/8]+[3/4,1]", "[0,1]"}) {
        LimitReport r = density_integral(g, E(s), kUnit, cfg).report;
        EXPECT_LE(std::fabs(r.finest().upper), var + cfg.tol);
        EXPECT_LE(std::fabs(r.finest().lower), var + cfg.tol);
    }
}

TEST(DensityIntegral, MonotoneInSetForAbsoluteValue) {
    SearchConfig cfg = coarse(8);
    IntervalFunction g = abs(stieltjes(polynomial({0, 1, -1}, "x(1-x)")));
    LimitReport small = density_integral(g, E("[1/4,1/2]"), kUnit, cfg).report;
    LimitReport big = density_integral(g, E("[1/8,3/4]"), kUnit, cfg).report;
    for (std::size_t k = 0; k < small.levels.size(); ++k) {
        EXPECT_LE(small.levels[k].upper, big.levels[k].upper + cfg.tol);
        EXPECT_LE(small.levels[k].lower, big.levels[k].lower + cfg.tol);
    }
}

TEST(DensityIntegral, FinitelyAdditiveOverDisjointSets) {
    SearchConfig cfg = coarse(8);
    IntervalFunction g = stieltjes(polynomial({0, 0, 0, 1}, "x^3"));
    LimitReport a = density_integral(g, E("[0,1/4]"), kUnit, cfg).report;
    LimitReport b = density_integral(g, E("(5/8,1]"), kUnit, cfg).report;
    LimitReport u = density_integral(g, E("[0,1/4]+(5/8,1]"), kUnit, cfg).report;
    for (std::size_t k = 0; k < u.levels.size(); ++k) {
        EXPECT_LE(a.levels[k].lower + b.levels[k].lower, u.levels[k].lower + 1e-12);
        EXPECT_LE(u.levels[k].lower, u.levels[k].upper);
        EXPECT_LE(u.levels[k].upper, a.levels[k].upper + b.levels[k].upper + 1e-12);
    }
}

TEST(LebesgueReference, Examples) {
    EXPECT_NEAR(lebesgue_reference([](double) { return 1.0; }, E("[0,1/2]")), 0.5, 1e-12);
    auto two_x = [](double x) { return 2 * x; };
    EXPECT_NEAR(lebesgue_reference(two_x, E("[0,1]")), 1.0, 1e-12);
    EXPECT_NEAR(lebesgue_reference(two_x, E("[0,1/4]+[1/2,3/4]")), 3.0 / 8.0, 1e-12);
    EXPECT_EQ(lebesgue_reference(two_x, E("{}")), 0.0);
}
