#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ivfn/catalog.hpp"
#include "ivfn/candidate_pool.hpp"
#include "ivfn/errors.hpp"
#include "ivfn/integrator.hpp"

using namespace ivfn;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

SearchConfig coarse(int last = 8) {
    SearchConfig cfg;
    cfg.e_schedule = SearchConfig::default_schedule(3, last);
    return cfg;
}

double brute_force(const IntervalFunction& g, const Region& r, const std::vector<Dyadic>& pts, Sense sense) {
    double best = sense == Sense::max ? -kInf : kInf;
    for (const Division& div : all_bracket_assignments(r, pts)) {
        double s = riemann_sum(g, div);
        best = sense == Sense::max ? std::max(best, s) : std::min(best, s);
    }
    return best;
}

}  // namespace

TEST(RiemannSum, Examples) {
    Region unit = Region::interval(0, 1);
    std::vector<Dyadic> pts{0, d("1/8"), d("1/2"), d("5/8"), 1};
    Division div = division_from_points(unit, pts);
    EXPECT_EQ(riemann_sum(length_function(), div), 1.0);
    IntervalFunction sq = stieltjes(polynomial({0, 0, 1}, "x^2"));
    for (const Division& b : all_bracket_assignments(unit, std::vector<Dyadic>{0, d("1/4"), 1}))
        EXPECT_EQ(riemann_sum(sq, b), 1.0);

    Fixture o = fixture("origin_indicator");
    std::vector<Dyadic> three{-1, 0, 1};
    std::vector<PointConvention> open{PointConvention::parse(0, ")(")}, closed{PointConvention::parse(0, "][")};
    EXPECT_EQ(riemann_sum(o.g, division_from_points(o.region, three, open)), 0.0);
    EXPECT_EQ(riemann_sum(o.g, division_from_points(o.region, three, closed)), 2.0);
}

TEST(ExtremalSum, OriginIndicator) {
    Fixture o = fixture("origin_indicator");
    std::vector<Dyadic> three{-1, 0, 1};
    EXPECT_EQ(extremal_sum(o.g, three, o.region, Sense::max).value, 2.0);
    EXPECT_EQ(extremal_sum(o.g, three, o.region, Sense::min).value, 0.0);
    EXPECT_EQ(brute_force(o.g, o.region, three, Sense::max), 2.0);
}

TEST(ExtremalSum, BracketIndependentGivesRiemannSum) {
    Region unit = Region::interval(0, 1);
    std::vector<Dyadic> pts{0, d("3/8"), d("1/2"), 1};
    IntervalFunction g = stieltjes(alternating_ramp());
    double s = riemann_sum(g, division_from_points(unit, pts));
    EXPECT_EQ(extremal_sum(g, pts, unit, Sense::max).value, s);
    EXPECT_EQ(extremal_sum(g, pts, unit, Sense::min).value, s);
}

TEST(ExtremalSum, MatchesExhaustiveOnEveryFixture) {
    std::mt19937_64 rng(101);
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        const Span& c = f.region.components().front();
        std::uniform_int_distribution<std::int64_t> at(c.lo.ceil_at(6) + 1, c.hi.floor_at(6) - 1);
        std::uniform_int_distribution<int> m(1, 5);
        for (int s = 0; s < 40; ++s) {
            std::vector<Dyadic> pts{c.lo, c.hi};
            int want = m(rng);
            while (static_cast<int>(pts.size()) < want + 1) {
                Dyadic p(at(rng), 6);
                if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
            }
            std::sort(pts.begin(), pts.end());
            for (Sense sense : {Sense::max, Sense::min})
                EXPECT_EQ(extremal_sum(f.g, pts, f.region, sense).value, brute_force(f.g, f.region, pts, sense)) << name;
        }
    }
}

TEST(NormLimits, LengthConverges) {
    LimitReport r = estimate_norm_limits(length_function(), Region::interval(0, 1), coarse());
    EXPECT_EQ(r.verdict.kind, VerdictKind::converged);
    EXPECT_EQ(r.verdict.value, 1.0);
}

TEST(NormLimits, SaksOverZeroTwo) {
    Fixture f = fixture("saks_A_counterexample");
    LimitReport r = estimate_norm_limits(f.g, f.region, coarse(10));
    EXPECT_EQ(r.finest().upper, 1.0);
    EXPECT_EQ(oscillation(r), 1.0 - r.finest().lower);
    EXPECT_EQ(r.finest().lower, 0.0);
}

TEST(NormLimits, OscLeftLimitReachesSawtoothValue) {
    Fixture f = fixture("osc_left_limit");
    LimitReport r = estimate_norm_limits(f.g, Region::interval(0, d("3/4")), coarse(10));
    EXPECT_NEAR(r.finest().upper, reciprocal_sawtooth()(0.75), 1e-9);
}

TEST(NormLimits, OriginIndicatorOscillates) {
    Fixture f = fixture("origin_indicator");
    LimitReport r = estimate_norm_limits(f.g, f.region, coarse());
    EXPECT_EQ(r.finest().upper, 2.0);
    EXPECT_EQ(r.finest().lower, 0.0);
    EXPECT_EQ(r.verdict.kind, VerdictKind::oscillating);
}

TEST(NormLimits, MonotoneAndSandwiched) {
    SearchConfig cfg = coarse();
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        LimitReport r = estimate_norm_limits(f.g, f.region, cfg);
        for (std::size_t k = 0; k < r.levels.size(); ++k) {
            EXPECT_LE(r.levels[k].lower, r.levels[k].upper) << name;
            if (k == 0) continue;
            EXPECT_LE(r.levels[k].upper, r.levels[k - 1].upper) << name;
            EXPECT_GE(r.levels[k].lower, r.levels[k - 1].lower) << name;
        }
    }
}

TEST(NormLimits, WitnessesRespectNormBound) {
    Fixture f = fixture("saks_A_counterexample");
    LimitReport r = estimate_norm_limits(f.g, f.region, coarse());
    for (const LevelEstimate& l : r.levels) {
        EXPECT_LT(l.upper_witness.norm, l.e);
        ASSERT_TRUE(l.upper_witness.division.has_value());
        EXPECT_EQ(riemann_sum(f.g, *l.upper_witness.division), l.upper);
    }
}

TEST(NormLimits, ScalingSwapsForNegativeFactor) {
    Fixture f = fixture("origin_indicator");
    SearchConfig cfg = coarse(6);
    LimitReport r = estimate_norm_limits(f.g, f.region, cfg);
    LimitReport up = estimate_norm_limits(scale(3.0, f.g), f.region, cfg);
    LimitReport down = estimate_norm_limits(scale(-2.0, f.g), f.region, cfg);
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        EXPECT_EQ(up.levels[k].upper, 3.0 * r.levels[k].upper);
        EXPECT_EQ(up.levels[k].lower, 3.0 * r.levels[k].lower);
        EXPECT_EQ(down.levels[k].upper, -2.0 * r.levels[k].lower);
        EXPECT_EQ(down.levels[k].lower, -2.0 * r.levels[k].upper);
    }
}

TEST(NormLimits, SumRule) {
    SearchConfig cfg = coarse();
    Region unit = Region::interval(0, 1);
    IntervalFunction a = stieltjes(polynomial({0, 0, 1}, "x^2")), b = length_function();
    double va = estimate_norm_limits(a, unit, cfg).verdict.value, vb = estimate_norm_limits(b, unit, cfg).verdict.value;
    LimitReport sum = estimate_norm_limits(a + b, unit, cfg);
    EXPECT_EQ(sum.verdict.kind, VerdictKind::converged);
    EXPECT_NEAR(sum.verdict.value, va + vb, 2 * cfg.tol);
}

TEST(NormLimits, FiniteAdditivityOverRegions) {
    SearchConfig cfg = coarse();
    IntervalFunction g = stieltjes(polynomial({0, 1, 0, -1}, "x-x^3"));
    double left = estimate_norm_limits(g, Region::interval(0, d("1/2")), cfg).verdict.value;
    double right = estimate_norm_limits(g, Region::interval(d("1/2"), 1), cfg).verdict.value;
    EXPECT_TRUE(singularity_scan(g, Region::interval(0, 1), cfg).empty());
    EXPECT_NEAR(estimate_norm_limits(g, Region::interval(0, 1), cfg).verdict.value, left + right, 2 * cfg.tol);
}

TEST(Defect, AdditiveIsZero) {
    IntervalFunction g = stieltjes(polynomial({0, 2, -1}, "2x-x^2"));
    EXPECT_EQ(additivity_defect(g, 0, d("1/4"), 1), 0.0);
    EXPECT_EQ(additivity_defect(length_function(), d("1/8"), d("3/8"), d("7/8")), 0.0);
}

TEST(Defect, SaksAtOne) {
    Fixture f = fixture("saks_A_counterexample");
    for (int n = 1; n <= 12; ++n) {
        Dyadic h = Dyadic::pow2(-2 * n);
        EXPECT_EQ(additivity_defect(f.g, Dyadic(1) - h, 1, Dyadic(1) + h), 1.0);
    }
}

TEST(SingularityScan, AdditiveHasNone) {
    EXPECT_TRUE(singularity_scan(length_function(), Region::interval(0, 1), coarse()).empty());
}

TEST(SingularityScan, MPowerAtOrigin) {
    Fixture f = fixture("m_power_singularity");
    auto found = singularity_scan(f.g, f.region, coarse());
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(found[0].y, Dyadic(0));
    EXPECT_NEAR(found[0].c, 1.0, 1e-9);
}

TEST(SingularityScan, DyadicBlocksHasNoDefectAtOrigin) {
    Fixture f = fixture("dyadic_blocks");
    DefectReport r = defect_at(f.g, f.region, 0, coarse());
    EXPECT_EQ(r.c, 0.0);
    EXPECT_EQ(r.sigma, 0.0);
}

TEST(SingularityScan, DefectBoundedByOscillation) {
    SearchConfig cfg = coarse();
    for (const std::string& name : fixture_names()) {
        Fixture f = fixture(name);
        LimitReport r = estimate_norm_limits(f.g, f.region, cfg);
        if (!std::isfinite(r.finest().upper) || !std::isfinite(r.finest().lower)) continue;
        for (const DefectReport& dr : singularity_scan(f.g, f.region, cfg))
            EXPECT_LE(dr.c, oscillation(r) + 2 * cfg.tol) << name << " at " << dr.y.str();
    }
}

TEST(KLimits, EmptyPermanentMatchesNormLimits) {
    SearchConfig cfg = coarse(6);
    for (const char* name : {"origin_indicator", "saks_A_counterexample"}) {
        Fixture f = fixture(name);
        LimitReport n = estimate_norm_limits(f.g, f.region, cfg), k = estimate_k_limits(f.g, f.region, {}, cfg);
        ASSERT_EQ(n.levels.size(), k.levels.size());
        for (std::size_t i = 0; i < n.levels.size(); ++i) {
            EXPECT_EQ(n.levels[i].upper, k.levels[i].upper) << name;
            EXPECT_EQ(n.levels[i].lower, k.levels[i].lower) << name;
        }
    }
}

TEST(KLimits, RebracketedFunctionConvergesToOne) {
    Fixture f = fixture("k_convention_jump");
    LimitReport h = estimate_k_limits(*f.rebracketed, f.region, f.permanent, coarse(12));
    EXPECT_NEAR(h.finest().upper, 1.0, 1e-6);
}

TEST(KLimits, AdditiveWithMatchingConventions) {
    IntervalFunction g = stieltjes(polynomial({0, 0, 1}, "x^2"));
    std::vector<PointConvention> perm{PointConvention::parse(d("1/4"), ")["), PointConvention::parse(d("1/2"), ")[")};
    LimitReport r = estimate_k_limits(g, Region::interval(0, 1), perm, coarse());
    EXPECT_EQ(r.verdict.kind, VerdictKind::converged);
    EXPECT_EQ(r.verdict.value, 1.0);
}

TEST(KLimits, ChainOrdering) {
    SearchConfig cfg = coarse();
    Fixture f = fixture("origin_indicator");
    std::vector<PointConvention> perm{PointConvention::parse(0, ")(")};
    LimitChain c = estimate_limit_chain(f.g, f.region, perm, cfg);
    for (std::size_t k = 0; k < c.norm.levels.size(); ++k) {
        EXPECT_LE(c.norm.levels[k].lower, c.all_conventions.levels[k].lower);
        EXPECT_LE(c.all_conventions.levels[k].lower, c.fixed.levels[k].lower);
        EXPECT_LE(c.fixed.levels[k].lower, c.fixed.levels[k].upper);
        EXPECT_LE(c.fixed.levels[k].upper, c.all_conventions.levels[k].upper);
        EXPECT_LE(c.all_conventions.levels[k].upper, c.norm.levels[k].upper);
    }
    EXPECT_EQ(c.fixed.finest().upper, 0.0);
}

TEST(SigmaLimit, MatchesNormLimitForContinuousFunction) {
    SearchConfig cfg = coarse();
    IntervalFunction g = stieltjes(polynomial({0, 0, 1}, "x^2"));
    LimitReport s = estimate_sigma_limit(g, Region::interval(0, 1), cfg);
    EXPECT_EQ(s.verdict.kind, VerdictKind::converged);
    EXPECT_EQ(s.verdict.value, 1.0);
}

TEST(SigmaLimit, OriginIndicatorOscillates) {
    Fixture f = fixture("origin_indicator");
    LimitReport s = estimate_sigma_limit(f.g, f.region, coarse());
    EXPECT_EQ(s.verdict.kind, VerdictKind::oscillating);
    EXPECT_EQ(s.finest().upper, 2.0);
    EXPECT_EQ(s.finest().lower, 0.0);
}

TEST(SigmaLimit, AgreesWithAllConventionsLimitForMPower) {
    SearchConfig cfg = coarse();
    Fixture f = fixture("m_power_singularity");
    LimitReport s = estimate_sigma_limit(f.g, f.region, cfg);
    LimitReport kp = estimate_k_prime_limits(f.g, f.region, {Dyadic(0)}, cfg);
    EXPECT_EQ(s.verdict.kind, kp.verdict.kind);
}

TEST(Cauchy, Checks) {
    SearchConfig cfg = coarse(6);
    CauchyCheck len = cauchy_existence_check(length_function(), Region::interval(0, 1), cfg);
    EXPECT_TRUE(len.exists);
    for (const auto& [e, gap] : len.gaps) EXPECT_EQ(gap, 0.0);
    Fixture f = fixture("origin_indicator");
    CauchyCheck o = cauchy_existence_check(f.g, f.region, cfg);
    EXPECT_FALSE(o.exists);
    for (const auto& [e, gap] : o.gaps) EXPECT_GE(gap, 1.0);
    CauchyCheck st = cauchy_existence_check(stieltjes(polynomial({0, 0, 1}, "x^2")), Region::interval(0, 1), cfg);
    EXPECT_TRUE(st.exists);
}

TEST(Config, RejectsBadSchedules) {
    SearchConfig cfg;
    cfg.e_schedule = {d("1/4"), d("1/2")};
    EXPECT_THROW(cfg.validate(), ParseError);
    cfg.e_schedule = {};
    EXPECT_THROW(cfg.validate(), ParseError);
}

TEST(Determinism, ThreadsDoNotChangeResults) {
    Fixture f = fixture("saks_A_counterexample");
    SearchConfig one = coarse(9), four = coarse(9);
    four.threads = 4;
    LimitReport a = estimate_norm_limits(f.g, f.region, one), b = estimate_norm_limits(f.g, f.region, four);
    for (std::size_t k = 0; k < a.levels.size(); ++k) {
        EXPECT_EQ(a.levels[k].upper, b.levels[k].upper);
        EXPECT_EQ(a.levels[k].lower, b.levels[k].lower);
        EXPECT_EQ(a.levels[k].upper_witness.origin, b.levels[k].upper_witness.origin);
    }
}
