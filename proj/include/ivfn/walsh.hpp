#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "ivfn/measurable_set.hpp"

namespace ivfn {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

Rational to_rational(const Dyadic& d);

inline constexpr int kMaxSignStage = 16;
inline constexpr int kMaxDenseStage = 13;
inline constexpr int kMaxSpanStage = 8;

/// Stage-n table of signs, N = 2^(n-1) rows and columns, built by the
/// recursion from a_11(1) = +1. Rows are bit-packed (set bit = -1).
class SignTable {
public:
    int stage() const { return stage_; }
    std::size_t size() const { return size_; }
    /// 1-based indices.
    int entry(std::size_t i, std::size_t j) const;
    /// Stages up to kMaxDenseStage; throws StageTooLarge beyond.
    Eigen::MatrixXf dense() const;

private:
    friend std::shared_ptr<const SignTable> sign_table(int n);
    SignTable(int stage, std::size_t size);
    std::size_t words() const { return (size_ + 63) / 64; }

    int stage_;
    std::size_t size_;
    std::vector<std::uint64_t> bits_;  // row-major, words() per row
};

/// Cached; safe for concurrent callers. Throws StageTooLarge unless 1 <= n <= 16.
std::shared_ptr<const SignTable> sign_table(int n);

struct OrthogonalityReport {
    std::int64_t max_off_diagonal = 0;  // largest |row_i . row_j|, i != j
    bool diagonal_is_size = true;       // row_i . row_i == N
};

/// Row products by a float matrix product; entries are small integers, so
/// the result is exact.
OrthogonalityReport orthogonality_check(const SignTable& t);
bool is_symmetric(const SignTable& t);

struct SpanReport {
    bool unit_rows_solvable = false;  // every unit row is a rational combination of rows
    BigInt determinant;
    bool determinant_nonzero = false;
};

/// Exact rational elimination and a fraction-free determinant; stages up to
/// kMaxSpanStage, StageTooLarge beyond.
SpanReport span_check(const SignTable& t);

/// Values on the cells [(j-1)/N, j/N), N = 2^(stage-1).
struct StepFunction {
    int stage = 1;
    std::vector<Rational> values;

    std::size_t cells() const { return values.size(); }
    /// Same function on a finer stage.
    StepFunction refine(int finer) const;
};

StepFunction basis_function(std::size_t i, int stage);
/// b_i = integral of f h_i, i = 1..N, for the stage of f.
std::vector<Rational> basis_coefficients(const StepFunction& f);
StepFunction from_coefficients(const std::vector<Rational>& b, int stage);
/// Orthogonal projection onto h_1..h_N of a stage-m function (m >= n).
StepFunction truncate(const StepFunction& f, int stage);

/// A set function on finite unions of intervals.
class SetFunctional {
public:
    using Eval = std::function<Rational(const MeasurableSet&)>;
    SetFunctional(std::string name, Eval eval, bool additive);
    /// Additive extension of its values on single intervals [lo, hi).
    static SetFunctional additive(std::string name, std::function<Rational(const Dyadic&, const Dyadic&)> on_interval);

    Rational operator()(const MeasurableSet& e) const { return eval_(e); }
    const std::string& name() const { return name_; }
    bool is_additive() const { return additive_; }

private:
    std::string name_;
    Eval eval_;
    bool additive_;
};

SetFunctional measure_functional();
/// E -> integral over E of the polynomial with these coefficients (exact).
SetFunctional polynomial_integral(const std::vector<Rational>& coeffs, std::string name);
/// E -> integral over E of a step function (exact).
SetFunctional step_integral(const StepFunction& w, std::string name);

MeasurableSet cell_union(int stage, const std::vector<std::size_t>& cells);

/// Sum of b g(E_b) over the distinct non-zero values b of f, E_b its level set.
Rational p_functional(const SetFunctional& g, const StepFunction& f);

/// |P(f_N) - N sum F_j g(I_j)| with f_N the stage-n truncation of f (exact).
Rational pf_identity_residual(const SetFunctional& g, const StepFunction& f, int stage);
/// Same for a general f, its cell integrals F_j by quadrature.
double pf_identity_residual(const SetFunctional& g, const std::function<double(double)>& f, int stage);

struct ContinuityLevel {
    int depth = 0;
    double bound = 0.0;  // sum g^2(I)/mI over the depth-d dyadic cells
};

struct ContinuityReport {
    std::vector<ContinuityLevel> trace;
    double bound = 0.0;  // sup over the trace and the supplied packs
};

/// Throws ZeroMeasureSet for a null set in a pack.
ContinuityReport continuity_bound(const SetFunctional& g, const std::vector<std::vector<MeasurableSet>>& packs,
                                  int max_depth);

struct DeterminantCheck {
    double determinant = 0.0;
    double closed_form = 0.0;
    double relative_residual = 0.0;
};

/// det(M^2 m_i delta_ij - g_i g_j) against M^(2(n-1)) prod m_i (M^2 - sum g_i^2/m_i).
DeterminantCheck determinant_identity_check(const std::vector<double>& g, const std::vector<double>& m, double bound);
/// Exact difference of the two sides.
Rational determinant_identity_residual(const std::vector<Rational>& g, const std::vector<Rational>& m,
                                       const Rational& bound);

}  // namespace ivfn
