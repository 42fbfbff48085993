#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "ivfn/catalog.hpp"
#include "ivfn/division.hpp"
#include "ivfn/errors.hpp"

using namespace ivfn;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

// Random sorted dyadic triple at level 8 inside the region's first component.
std::tuple<Dyadic, Dyadic, Dyadic> random_triple(std::mt19937_64& rng, const Region& r) {
    const Span& c = r.components().front();
    std::uniform_int_distribution<std::int64_t> at(c.lo.ceil_at(8), c.hi.floor_at(8));
    std::vector<std::int64_t> k;
    while (k.size() < 3) {
        std::int64_t v = at(rng);
        if (std::find(k.begin(), k.end(), v) == k.end()) k.push_back(v);
    }
    std::sort(k.begin(), k.end());
    return {Dyadic(k[0], 8), Dyadic(k[1], 8), Dyadic(k[2], 8)};
}

}  // namespace

TEST(Stieltjes, Examples) {
    IntervalFunction x = stieltjes(identity_function());
    EXPECT_EQ(x(Interval::parse("[1/4,3/4)")), 0.5);
    IntervalFunction sq = stieltjes(polynomial({0, 0, 1}, "x^2"));
    EXPECT_EQ(sq(Interval::parse("(0,1)")), 1.0);
}

TEST(Stieltjes, TelescopesOverAnyDivision) {
    std::mt19937_64 rng(3);
    PointFunction f = polynomial({0.5, -1, 0, 2}, "cubic");
    IntervalFunction g = stieltjes(f);
    Region r = Region::interval(d("-1/2"), 1);
    std::uniform_int_distribution<std::int64_t> at(-32, 64);
    std::uniform_int_distribution<int> v(0, 3);
    for (int s = 0; s < 100; ++s) {
        std::vector<Dyadic> pts;
        for (int k = 0; k < 8; ++k) pts.push_back(Dyadic(at(rng), 6));
        Division div = division_from_points(r, normalize_points(r, pts));
        double sum = 0.0;
        for (const Interval& i : div.intervals()) sum += g(i.with_variant(v(rng)));
        EXPECT_NEAR(sum, f(Dyadic(1)) - f(d("-1/2")), 1e-12);
    }
}

TEST(Stieltjes, AdditiveAndBracketIndependent) {
    std::mt19937_64 rng(9);
    IntervalFunction g = stieltjes(alternating_ramp());
    Region unit = Region::interval(0, 1);
    for (int s = 0; s < 100; ++s) {
        auto [x, y, z] = random_triple(rng, unit);
        EXPECT_EQ(additivity_violation(g, x, y, z), 0.0);
        EXPECT_EQ(bracket_spread(g, x, z), 0.0);
    }
}

TEST(Catalog, FlagsHoldOnSamples) {
    std::mt19937_64 rng(17);
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        for (int s = 0; s < 100; ++s) {
            auto [x, y, z] = random_triple(rng, f.region);
            if (f.g.flags().additive) {
                EXPECT_EQ(additivity_violation(f.g, x, y, z), 0.0) << name;
            }
            if (f.g.flags().bracket_independent) {
                EXPECT_EQ(bracket_spread(f.g, x, z), 0.0) << name;
            }
        }
    }
}

TEST(Catalog, EvaluationIsPure) {
    std::mt19937_64 rng(23);
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        Fixture again = fixture(name);
        for (int s = 0; s < 50; ++s) {
            auto [x, y, z] = random_triple(rng, f.region);
            for (int v = 0; v < 4; ++v) {
                Interval i = Interval::from_variant(x, z, v);
                double a = f.g(i);
                double b = again.g(i), c = f.g(i);
                EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0) << name;
                EXPECT_EQ(std::memcmp(&a, &c, sizeof a), 0) << name;
            }
        }
    }
}

TEST(Catalog, UnknownFixtureThrows) { EXPECT_THROW(fixture("no_such_fixture"), UnknownFixture); }

TEST(Catalog, EveryFixtureHasExpectedValues) {
    EXPECT_EQ(fixture_names().size(), 7u);
    for (const std::string& name : fixture_names()) EXPECT_FALSE(fixture(name).expected.empty()) << name;
}

TEST(Catalog, SaksValuesOnSpecialSpans) {
    Fixture f = fixture("saks_A_counterexample");
    for (int n = 1; n <= 10; ++n) {
        Dyadic h = Dyadic::pow2(-2 * n);
        EXPECT_EQ(f.g(Interval(Dyadic(1) - h, Dyadic(1) + h, Side::open, Side::open)), 1.0);
        Dyadic odd = Dyadic::pow2(-2 * n - 1);
        EXPECT_EQ(f.g(Interval(Dyadic(1) - odd, Dyadic(1) + odd, Side::open, Side::open)), 0.0);
    }
    EXPECT_EQ(f.g(Interval::parse("[1,2]")), 0.0);
}

TEST(Catalog, OriginIndicatorFollowsBrackets) {
    Fixture f = fixture("origin_indicator");
    EXPECT_EQ(f.g(Interval::parse("[-1,0)")), 0.0);
    EXPECT_EQ(f.g(Interval::parse("[-1,0]")), 1.0);
    EXPECT_EQ(f.g(Interval::parse("(-1/2,1/2)")), 1.0);
}

TEST(Catalog, KConventionRebracketing) {
    Fixture f = fixture("k_convention_jump");
    ASSERT_TRUE(f.rebracketed.has_value());
    EXPECT_EQ(f.permanent.size(), 11u);
    for (const PointConvention& p : f.permanent) EXPECT_EQ(p.junction(), ")[");
    // Interior masses 2^-r (r >= 2) sum to 1/2. [0,1/2] adds a(I) = 1 and the
    // closed mass at 1/2; re-bracketed to [0,1/2) it keeps only the interior.
    Interval i = Interval::parse("[0,1/2]");
    EXPECT_EQ(f.g(i), 2.0);
    EXPECT_EQ((*f.rebracketed)(i), 0.5);
}

TEST(Catalog, CantorStaircase) {
    PointFunction c = cantor_staircase(12);
    EXPECT_EQ(c(0.0), 0.0);
    EXPECT_EQ(c(1.0), 1.0);
    std::vector<Span> kept = cantor_intervals(12);
    EXPECT_EQ(kept.size(), std::size_t{1} << 12);
    double total = 0.0, rise = 0.0;
    for (const Span& s : kept) {
        total += s.length().to_double();
        rise += c(s.hi) - c(s.lo);
    }
    EXPECT_NEAR(total, std::pow(2.0 / 3.0, 12), 1e-9);
    EXPECT_NEAR(rise, 1.0, 1e-12);
}
