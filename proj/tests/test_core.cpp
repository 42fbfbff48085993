#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ivfn/division.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/measurable_set.hpp"

using namespace ivfn;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

}  // namespace

TEST(Dyadic, ArithmeticIsExactAndCanonical) {
    EXPECT_EQ(d("1/2") + d("1/4"), d("3/4"));
    EXPECT_EQ(d("3/2^2").str(), "3/2^2");
    EXPECT_EQ(d("2/4"), Dyadic(1, 1));
    EXPECT_EQ(d("0.375"), Dyadic(3, 3));
    EXPECT_EQ(Dyadic(4, 2), Dyadic(1));
    EXPECT_EQ((d("3/8") * d("1/2")).str(), "3/2^4");
    EXPECT_EQ(midpoint(0, 1), d("1/2"));
    EXPECT_LT(d("-1/2"), d("1/2^60"));
}

TEST(Dyadic, RoundsAtLevels) {
    EXPECT_EQ(d("5/16").ceil_at(2), 2);
    EXPECT_EQ(d("5/16").floor_at(2), 1);
    EXPECT_EQ(d("-5/16").floor_at(2), -2);
    EXPECT_EQ(d("1/2").ceil_at(1), 1);
}

TEST(Dyadic, RejectsNonDyadicInput) {
    EXPECT_THROW(d("1/3"), ParseError);
    EXPECT_THROW(d("abc"), ParseError);
    EXPECT_THROW(Dyadic::pow2(-63), ArithmeticOverflow);
}

TEST(Interval, MakeInterval) {
    Interval i = make_interval(0, 1, Side::closed, Side::open);
    EXPECT_EQ(i.str(), "[0,1)");
    EXPECT_EQ(i.length(), Dyadic(1));
    EXPECT_THROW(make_interval(d("1/2"), d("1/2"), Side::closed, Side::closed), DegenerateInterval);
    Interval j = make_interval(d("1/4"), d("3/4"), Side::open, Side::open);
    EXPECT_EQ(j.length(), d("1/2"));
    EXPECT_FALSE(j.contains(d("1/4")));
    EXPECT_TRUE(i.contains(0));
}

TEST(Interval, VariantCodes) {
    for (int v = 0; v < 4; ++v) EXPECT_EQ(Interval::from_variant(0, 1, v).variant(), v);
    EXPECT_EQ(Interval::from_variant(0, 1, 2).str(), "[0,1)");
    EXPECT_EQ(Interval::parse("(1/4,3/4]"), make_interval(d("1/4"), d("3/4"), Side::open, Side::closed));
}

TEST(Interval, Relate) {
    auto I = [](const char* s) { return Interval::parse(s); };
    EXPECT_EQ(relate(I("[0,1]"), I("[1,2]")), Relation::abut);
    EXPECT_EQ(relate(I("[0,1]"), I("[1/2,2]")), Relation::overlap);
    EXPECT_EQ(relate(I("[0,1)"), I("(1,2]")), Relation::abut);
    EXPECT_EQ(relate(I("[0,1]"), I("(0,1)")), Relation::equal_span);
    EXPECT_EQ(relate(I("[0,2]"), I("(1/2,1)")), Relation::contains);
    EXPECT_EQ(relate(I("[0,1]"), I("[2,3]")), Relation::disjoint);
}

TEST(Interval, RelateIsSymmetric) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> k(0, 16), v(0, 3);
    for (int s = 0; s < 2000; ++s) {
        int a = k(rng), b = k(rng), c = k(rng), e = k(rng);
        if (a == b || c == e) continue;
        Interval i = Interval::from_variant(Dyadic(std::min(a, b), 3), Dyadic(std::max(a, b), 3), v(rng));
        Interval j = Interval::from_variant(Dyadic(std::min(c, e), 3), Dyadic(std::max(c, e), 3), v(rng));
        Relation r = relate(i, j);
        if (r != Relation::contains) {
            EXPECT_EQ(relate(j, i), r);
        }
    }
}

TEST(Division, FromPoints) {
    Region unit = Region::interval(0, 1);
    std::vector<Dyadic> pts{0, d("1/2"), 1};
    Division all_closed = division_from_points(unit, pts);
    ASSERT_EQ(all_closed.size(), 2u);
    EXPECT_EQ(all_closed.intervals()[0].str(), "[0,1/2^1]");
    EXPECT_EQ(all_closed.intervals()[1].str(), "[1/2^1,1]");
    EXPECT_EQ(all_closed.norm(), d("1/2"));

    std::vector<PointConvention> conv{PointConvention::parse(d("1/2"), ")(")};
    Division open = division_from_points(unit, pts, conv);
    EXPECT_EQ(open.intervals()[0].str(), "[0,1/2^1)");
    EXPECT_EQ(open.intervals()[1].str(), "(1/2^1,1]");
    EXPECT_EQ(open.conventions().front().junction(), ")(");
}

TEST(Division, FourToTheMBracketAssignments) {
    Region unit = Region::interval(0, 1);
    for (int m = 1; m <= 4; ++m) {
        std::vector<Dyadic> pts;
        for (int k = 0; k <= m; ++k) pts.push_back(Dyadic(k, 2));
        if (m < 4) pts.back() = 1;
        pts = normalize_points(unit, pts);
        auto all = all_bracket_assignments(unit, pts);
        std::size_t intervals = pts.size() - 1;
        std::set<std::vector<int>> distinct;
        for (const Division& div : all) distinct.insert(div.brackets());
        EXPECT_EQ(all.size(), std::size_t{1} << (2 * intervals));
        EXPECT_EQ(distinct.size(), all.size());
    }
}

TEST(Division, RefineHalvesAndIsIdempotent) {
    Region unit = Region::interval(0, 1);
    Division one = division_from_points(unit, std::vector<Dyadic>{0, 1});
    std::vector<Dyadic> half{d("1/2")};
    Division two = refine(one, half);
    EXPECT_EQ(two.size(), 2u);
    EXPECT_EQ(two.norm(), d("1/2"));
    EXPECT_EQ(refine(two, {}), two);
    EXPECT_EQ(refine(two, half), two);

    Division cur = one;
    for (int k = 1; k <= 8; ++k) {
        std::vector<Dyadic> mids;
        for (const Interval& i : cur.intervals()) mids.push_back(midpoint(i.lo(), i.hi()));
        cur = refine(cur, mids);
        EXPECT_EQ(cur.norm(), Dyadic::pow2(-k));
    }
}

TEST(Division, LengthsSumToRegionMeasure) {
    std::mt19937_64 rng(5);
    Region r({{0, d("3/4")}, {1, 2}});
    std::uniform_int_distribution<std::int64_t> at(0, 64);
    for (int s = 0; s < 200; ++s) {
        std::vector<Dyadic> pts;
        for (int k = 0; k < 6; ++k) {
            Dyadic p(at(rng), 5);
            if (r.contains(p)) pts.push_back(p);
        }
        Division div = division_from_points(r, normalize_points(r, pts));
        Dyadic total = 0;
        for (const Interval& i : div.intervals()) total += i.length();
        EXPECT_EQ(total, r.measure());
    }
}

TEST(Division, RejectsPointsOutsideRegion) {
    std::vector<Dyadic> pts{3};
    EXPECT_THROW(normalize_points(Region::interval(0, 1), pts), PointOutsideRegion);
}

TEST(Region, Subtract) {
    Region unit = Region::interval(0, 1);
    EXPECT_EQ(region_subtract(unit, Region::interval(d("1/4"), d("1/2"))),
              Region({{0, d("1/4")}, {d("1/2"), 1}}));
    EXPECT_TRUE(region_subtract(unit, unit).empty());
    EXPECT_EQ(region_subtract(Region({{0, 1}, {2, 3}}), Region::interval(2, 3)), unit);
    EXPECT_THROW(region_subtract(unit, Region::interval(2, 3)), NotContained);
}

TEST(Region, ParsesAndMerges) {
    EXPECT_EQ(Region::parse("0,2"), Region::interval(0, 2));
    EXPECT_EQ(Region::parse("[0,1]+[1,2]"), Region::interval(0, 2));
    EXPECT_EQ(Region::parse("[0,1]+[2,3]").measure(), Dyadic(2));
}

TEST(MeasurableSet, IntersectMeasure) {
    auto E = [](const char* s) { return MeasurableSet::parse(s); };
    EXPECT_EQ(intersect_measure(E("[0,1/2]"), Interval::parse("[1/4,3/4]")), d("1/4"));
    EXPECT_EQ(intersect_measure(E("{}"), Interval::parse("[0,1]")), Dyadic(0));
    EXPECT_EQ(intersect_measure(E("[0,1/4]+[1/2,1]"), Interval::parse("[0,1]")), d("3/4"));
}

TEST(MeasurableSet, MeetingIsBracketSensitive) {
    MeasurableSet origin = MeasurableSet::parse("{0}");
    EXPECT_FALSE(origin.meets(Interval::parse("(0,1]")));
    EXPECT_TRUE(origin.meets(Interval::parse("[0,1]")));
    EXPECT_TRUE(MeasurableSet::parse("(0,1/2)").meets(Interval::parse("(1/4,1)")));
}
