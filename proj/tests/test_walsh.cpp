#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "ivfn/errors.hpp"
#include "ivfn/walsh.hpp"

using namespace ivfn;

namespace {

std::size_t reverse_bits(std::size_t v, int width) {
    std::size_t out = 0;
    for (int b = 0; b < width; ++b)
        if (v >> b & 1) out |= std::size_t{1} << (width - 1 - b);
    return out;
}

// Closed-form sign: (-1)^popcount(rev(i-1) & (j-1)) over n-1 bits.
int closed_form(std::size_t i, std::size_t j, int stage) {
    return std::popcount(reverse_bits(i - 1, stage - 1) & (j - 1)) % 2 ? -1 : 1;
}

StepFunction random_step(std::mt19937_64& rng, int stage) {
    std::uniform_int_distribution<int> num(-12, 12), den(1, 7);
    StepFunction f{stage, {}};
    for (std::size_t j = 0; j < (std::size_t{1} << (stage - 1)); ++j) f.values.emplace_back(num(rng), den(rng));
    return f;
}

StepFunction combine(const Rational& a, const StepFunction& f, const Rational& b, const StepFunction& g) {
    StepFunction out{f.stage, {}};
    for (std::size_t j = 0; j < f.values.size(); ++j) out.values.push_back(a * f.values[j] + b * g.values[j]);
    return out;
}

}  // namespace

TEST(SignTable, SmallStages) {
    auto t1 = sign_table(1);
    EXPECT_EQ(t1->size(), 1u);
    EXPECT_EQ(t1->entry(1, 1), 1);
    auto t2 = sign_table(2);
    EXPECT_EQ(t2->entry(1, 1), 1);
    EXPECT_EQ(t2->entry(1, 2), 1);
    EXPECT_EQ(t2->entry(2, 1), 1);
    EXPECT_EQ(t2->entry(2, 2), -1);
}

TEST(SignTable, MatchesClosedForm) {
    for (int n = 1; n <= 10; ++n) {
        auto t = sign_table(n);
        for (std::size_t i = 1; i <= t->size(); ++i)
            for (std::size_t j = 1; j <= t->size(); ++j) ASSERT_EQ(t->entry(i, j), closed_form(i, j, n)) << n;
    }
}

TEST(SignTable, OrthogonalAndSymmetric) {
    for (int n = 1; n <= 12; ++n) {
        auto t = sign_table(n);
        OrthogonalityReport r = orthogonality_check(*t);
        EXPECT_EQ(r.max_off_diagonal, 0) << n;
        EXPECT_TRUE(r.diagonal_is_size) << n;
        EXPECT_TRUE(is_symmetric(*t)) << n;
    }
}

TEST(SignTable, DenseMatchesEntries) {
    auto t = sign_table(5);
    Eigen::MatrixXf m = t->dense();
    ASSERT_EQ(m.rows(), 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) EXPECT_EQ(m(i, j), static_cast<float>(t->entry(i + 1, j + 1)));
    EXPECT_TRUE((m * m.transpose()).isApprox(16 * Eigen::MatrixXf::Identity(16, 16)));
}

TEST(SignTable, StageLimits) {
    EXPECT_THROW(sign_table(0), StageTooLarge);
    EXPECT_THROW(sign_table(17), StageTooLarge);
    EXPECT_THROW(sign_table(14)->dense(), StageTooLarge);
    EXPECT_THROW(span_check(*sign_table(9)), StageTooLarge);
    EXPECT_EQ(sign_table(4), sign_table(4));
}

TEST(Span, UnitRowsAndDeterminant) {
    SpanReport two = span_check(*sign_table(2));
    EXPECT_TRUE(two.unit_rows_solvable);
    EXPECT_EQ(two.determinant, BigInt(-2));
    EXPECT_EQ(span_check(*sign_table(3)).determinant, BigInt(-16));
    for (int n = 1; n <= kMaxSpanStage; ++n) {
        SpanReport r = span_check(*sign_table(n));
        EXPECT_TRUE(r.unit_rows_solvable) << n;
        EXPECT_TRUE(r.determinant_nonzero) << n;
        // Rows are orthogonal with squared length N, so det^2 = N^N.
        std::size_t size = std::size_t{1} << (n - 1);
        EXPECT_EQ(r.determinant * r.determinant, boost::multiprecision::pow(BigInt(size), static_cast<unsigned>(size))) << n;
    }
}

TEST(Basis, RoundTripIsExact) {
    std::mt19937_64 rng(4);
    for (int stage = 1; stage <= 7; ++stage) {
        StepFunction f = random_step(rng, stage);
        StepFunction back = from_coefficients(basis_coefficients(f), stage);
        EXPECT_EQ(back.values, f.values) << stage;
    }
}

TEST(Basis, TruncationOfRefinedFunctionIsIdentity) {
    std::mt19937_64 rng(8);
    StepFunction f = random_step(rng, 4);
    EXPECT_EQ(truncate(f.refine(7), 4).values, f.values);
}

TEST(PFunctional, Examples) {
    SetFunctional m = measure_functional();
    StepFunction chi{2, {Rational(1), Rational(0)}};
    EXPECT_EQ(p_functional(m, chi), Rational(1, 2));
    EXPECT_EQ(p_functional(m, StepFunction{3, std::vector<Rational>(4, Rational(0))}), Rational(0));
    SetFunctional two_x = polynomial_integral({Rational(0), Rational(2)}, "2x");
    EXPECT_EQ(p_functional(two_x, basis_function(2, 2)), Rational(-1, 2));
}

TEST(PFunctional, Distributive) {
    std::mt19937_64 rng(12);
    SetFunctional w = step_integral(random_step(rng, 3), "w");
    SetFunctional cubic = polynomial_integral({Rational(1), Rational(0), Rational(0), Rational(-3)}, "1-3x^3");
    for (int trial = 0; trial < 20; ++trial) {
        StepFunction f = random_step(rng, 5), g = random_step(rng, 5);
        Rational a(trial - 7, 3), b(5, trial + 2);
        for (const SetFunctional* s : {&w, &cubic})
            EXPECT_EQ(p_functional(*s, combine(a, f, b, g)), a * p_functional(*s, f) + b * p_functional(*s, g));
    }
}

TEST(PfIdentity, Residuals) {
    std::mt19937_64 rng(21);
    SetFunctional m = measure_functional();
    EXPECT_EQ(pf_identity_residual(m, random_step(rng, 5), 5), Rational(0));
    EXPECT_LE(pf_identity_residual(m, [](double x) { return x; }, 6), 1e-9);
    for (int trial = 0; trial < 5; ++trial) {
        SetFunctional w = step_integral(random_step(rng, 4), "w");
        EXPECT_EQ(pf_identity_residual(w, random_step(rng, 8), 6), Rational(0));
    }
}

TEST(ContinuityBound, Examples) {
    SetFunctional m = measure_functional();
    ContinuityReport r = continuity_bound(m, {{cell_union(1, {0})}}, 6);
    EXPECT_DOUBLE_EQ(r.bound, 1.0);
    SetFunctional two_x = polynomial_integral({Rational(0), Rational(2)}, "2x");
    ContinuityReport c = continuity_bound(two_x, {}, 12);
    for (std::size_t k = 1; k < c.trace.size(); ++k) EXPECT_GE(c.trace[k].bound, c.trace[k - 1].bound);
    EXPECT_LT(c.bound, 4.0 / 3.0);
    EXPECT_GT(c.bound, 4.0 / 3.0 - 1e-3);
    EXPECT_THROW(continuity_bound(m, {{MeasurableSet::parse("{1/2}")}}, 2), ZeroMeasureSet);
}

TEST(DeterminantIdentity, Checks) {
    DeterminantCheck one = determinant_identity_check({0.5}, {0.25}, 2.0);
    EXPECT_DOUBLE_EQ(one.determinant, 4.0 * 0.25 - 0.25);
    EXPECT_DOUBLE_EQ(one.closed_form, one.determinant);
    EXPECT_EQ(determinant_identity_residual({Rational(1, 3), Rational(-2, 5)}, {Rational(1, 2), Rational(3, 7)}, Rational(2)),
              Rational(0));
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.1, 1.0), s(-1.0, 1.0);
    std::vector<double> g(5), m(5);
    for (int i = 0; i < 5; ++i) {
        g[i] = s(rng);
        m[i] = u(rng);
    }
    EXPECT_LE(determinant_identity_check(g, m, 1.7).relative_residual, 1e-10);
}
