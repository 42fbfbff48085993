#include "ivfn/walsh.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "ivfn/density.hpp"
#include "ivfn/errors.hpp"

namespace ivfn {

Rational to_rational(const Dyadic& d) {
    return Rational(d.numerator()) / Rational(BigInt(1) << d.exponent());
}

SignTable::SignTable(int stage, std::size_t size) : stage_(stage), size_(size), bits_(size * ((size + 63) / 64), 0) {}

int SignTable::entry(std::size_t i, std::size_t j) const {
    std::size_t col = j - 1;
    std::uint64_t word = bits_[(i - 1) * words() + col / 64];
    return (word >> (col % 64)) & 1 ? -1 : 1;
}

Eigen::MatrixXf SignTable::dense() const {
    if (stage_ > kMaxDenseStage) throw StageTooLarge("dense sign table beyond stage " + std::to_string(kMaxDenseStage));
    Eigen::MatrixXf m(size_, size_);
    for (std::size_t i = 0; i < size_; ++i)
        for (std::size_t j = 0; j < size_; ++j) m(i, j) = static_cast<float>(entry(i + 1, j + 1));
    return m;
}

namespace {

// Spreads the low 32 bits of x to the even positions of the result.
std::uint64_t spread(std::uint64_t x) {
    x &= 0xFFFFFFFFull;
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFull;
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFull;
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0Full;
    x = (x | (x << 2)) & 0x3333333333333333ull;
    x = (x | (x << 1)) & 0x5555555555555555ull;
    return x;
}

std::mutex table_mutex;
std::array<std::shared_ptr<const SignTable>, kMaxSignStage + 1> table_cache;

}  // namespace

std::shared_ptr<const SignTable> sign_table(int n) {
    if (n < 1 || n > kMaxSignStage) throw StageTooLarge("sign table stage " + std::to_string(n));
    std::lock_guard<std::mutex> lock(table_mutex);
    if (!table_cache[1]) {
        std::shared_ptr<SignTable> first(new SignTable(1, 1));
        table_cache[1] = first;
    }
    for (int s = 2; s <= n; ++s) {
        if (table_cache[s]) continue;
        const SignTable& prev = *table_cache[s - 1];
        std::size_t half = prev.size_;
        std::shared_ptr<SignTable> t(new SignTable(s, 2 * half));
        std::size_t pw = prev.words(), cw = t->words();
        for (std::size_t i = 0; i < 2 * half; ++i) {
            bool lower = i >= half;
            const std::uint64_t* src = &prev.bits_[(lower ? i - half : i) * pw];
            std::uint64_t* dst = &t->bits_[i * cw];
            for (std::size_t w = 0; w < cw; ++w) {
                std::uint64_t e = spread(src[w / 2] >> (32 * (w % 2)));
                // columns 2j-1, 2j repeat a_ij; in the lower half the even column flips
                dst[w] = (e | (e << 1)) ^ (lower ? 0xAAAAAAAAAAAAAAAAull : 0);
            }
            std::size_t used = 2 * half;
            if (used < 64) dst[0] &= (std::uint64_t{1} << used) - 1;
        }
        table_cache[s] = t;
    }
    return table_cache[n];
}

OrthogonalityReport orthogonality_check(const SignTable& t) {
    Eigen::MatrixXf a = t.dense();
    Eigen::MatrixXf gram = a * a.transpose();
    OrthogonalityReport rep;
    auto n = static_cast<Eigen::Index>(t.size());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            auto v = static_cast<std::int64_t>(std::llround(gram(i, j)));
            if (i == j) {
                if (v != n) rep.diagonal_is_size = false;
            } else {
                rep.max_off_diagonal = std::max(rep.max_off_diagonal, std::abs(v));
            }
        }
    return rep;
}

bool is_symmetric(const SignTable& t) {
    for (std::size_t i = 1; i <= t.size(); ++i)
        for (std::size_t j = i + 1; j <= t.size(); ++j)
            if (t.entry(i, j) != t.entry(j, i)) return false;
    return true;
}

namespace {

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    std::size_t n = m.size();
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Solves A X = B exactly; false when A is singular.
bool solve(std::vector<std::vector<Rational>> a, std::vector<std::vector<Rational>>& b) {
    std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) return false;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        Rational inv = 1 / a[k][k];
        for (std::size_t j = k; j < n; ++j) a[k][j] *= inv;
        for (Rational& v : b[k]) v *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k] == 0) continue;
            Rational f = a[i][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            for (std::size_t j = 0; j < b[i].size(); ++j) b[i][j] -= f * b[k][j];
        }
    }
    return true;
}

}  // namespace

SpanReport span_check(const SignTable& t) {
    if (t.stage() > kMaxSpanStage) throw StageTooLarge("span check beyond stage " + std::to_string(kMaxSpanStage));
    std::size_t n = t.size();
    std::vector<std::vector<BigInt>> ints(n, std::vector<BigInt>(n));
    // coefficients c with sum_i c_i row_i = e_j solve A^T c = e_j
    std::vector<std::vector<Rational>> at(n, std::vector<Rational>(n));
    std::vector<std::vector<Rational>> rhs(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i][i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            ints[i][j] = t.entry(i + 1, j + 1);
            at[j][i] = t.entry(i + 1, j + 1);
        }
    }
    SpanReport rep;
    rep.determinant = bareiss_determinant(ints);
    rep.determinant_nonzero = rep.determinant != 0;
    if (!solve(at, rhs)) return rep;
    // rhs column j holds the coefficients of e_j; check the combination
    rep.unit_rows_solvable = true;
    for (std::size_t j = 0; j < n && rep.unit_rows_solvable; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            Rational s = 0;
            for (std::size_t i = 0; i < n; ++i) s += rhs[i][j] * t.entry(i + 1, k + 1);
            if (s != (j == k ? 1 : 0)) {
                rep.unit_rows_solvable = false;
                break;
            }
        }
    return rep;
}

namespace {

std::size_t stage_size(int stage) {
    if (stage < 1 || stage > kMaxSignStage) throw StageTooLarge("stage " + std::to_string(stage));
    return std::size_t{1} << (stage - 1);
}

}  // namespace

StepFunction StepFunction::refine(int finer) const {
    if (finer < stage) throw NotContained("cannot refine stage " + std::to_string(stage) + " to " + std::to_string(finer));
    std::size_t factor = stage_size(finer) / values.size();
    StepFunction out{finer, {}};
    out.values.reserve(values.size() * factor);
    for (const Rational& v : values)
        for (std::size_t k = 0; k < factor; ++k) out.values.push_back(v);
    return out;
}

StepFunction basis_function(std::size_t i, int stage) {
    std::size_t n = stage_size(stage);
    if (i < 1 || i > n) throw NotContained("basis index " + std::to_string(i) + " at stage " + std::to_string(stage));
    auto t = sign_table(stage);
    StepFunction f{stage, {}};
    for (std::size_t j = 1; j <= n; ++j) f.values.emplace_back(t->entry(i, j));
    return f;
}

std::vector<Rational> basis_coefficients(const StepFunction& f) {
    std::size_t n = f.values.size();
    auto t = sign_table(f.stage);
    std::vector<Rational> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < n; ++j) s += t->entry(i + 1, j + 1) * f.values[j];
        b[i] = s / n;
    }
    return b;
}

StepFunction from_coefficients(const std::vector<Rational>& b, int stage) {
    std::size_t n = stage_size(stage);
    if (b.size() > n) throw NotContained("more coefficients than basis functions at stage " + std::to_string(stage));
    auto t = sign_table(stage);
    StepFunction f{stage, std::vector<Rational>(n, Rational(0))};
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0)
            for (std::size_t j = 0; j < n; ++j) f.values[j] += b[i] * t->entry(i + 1, j + 1);
    return f;
}

StepFunction truncate(const StepFunction& f, int stage) {
    std::size_t n = stage_size(stage);
    if (f.values.size() < n) return f.refine(stage);
    std::size_t factor = f.values.size() / n;
    StepFunction out{stage, {}};
    for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t k = 0; k < factor; ++k) s += f.values[j * factor + k];
        out.values.push_back(s / factor);
    }
    return out;
}

SetFunctional::SetFunctional(std::string name, Eval eval, bool additive)
    : name_(std::move(name)), eval_(std::move(eval)), additive_(additive) {}

SetFunctional SetFunctional::additive(std::string name,
                                      std::function<Rational(const Dyadic&, const Dyadic&)> on_interval) {
    auto eval = [on_interval](const MeasurableSet& e) {
        Rational s = 0;
        for (const Piece& p : e.pieces())
            if (!p.is_point()) s += on_interval(p.lo, p.hi);
        return s;
    };
    return SetFunctional(std::move(name), eval, true);
}

SetFunctional measure_functional() {
    return SetFunctional::additive("measure", [](const Dyadic& a, const Dyadic& b) { return to_rational(b - a); });
}

SetFunctional polynomial_integral(const std::vector<Rational>& coeffs, std::string name) {
    auto antiderivative = [coeffs](const Rational& x) {
        Rational s = 0, power = x;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            s += coeffs[k] * power / (k + 1);
            power *= x;
        }
        return s;
    };
    return SetFunctional::additive(std::move(name), [antiderivative](const Dyadic& a, const Dyadic& b) {
        return antiderivative(to_rational(b)) - antiderivative(to_rational(a));
    });
}

SetFunctional step_integral(const StepFunction& w, std::string name) {
    return SetFunctional::additive(std::move(name), [w](const Dyadic& a, const Dyadic& b) {
        Rational n = w.values.size();
        Rational lo = to_rational(a), hi = to_rational(b), s = 0;
        for (std::size_t j = 0; j < w.values.size(); ++j) {
            Rational c0 = Rational(j) / n, c1 = Rational(j + 1) / n;
            Rational l = std::max(lo, c0), h = std::min(hi, c1);
            if (l < h) s += w.values[j] * (h - l);
        }
        return s;
    });
}

MeasurableSet cell_union(int stage, const std::vector<std::size_t>& cells) {
    int level = stage - 1;
    std::vector<Piece> pieces;
    for (std::size_t j : cells) {
        Dyadic lo(static_cast<std::int64_t>(j - 1), level), hi(static_cast<std::int64_t>(j), level);
        pieces.push_back({lo, hi, true, false});
    }
    return MeasurableSet(std::move(pieces));
}

Rational p_functional(const SetFunctional& g, const StepFunction& f) {
    std::map<Rational, std::vector<std::size_t>> level_sets;
    for (std::size_t j = 0; j < f.values.size(); ++j)
        if (f.values[j] != 0) level_sets[f.values[j]].push_back(j + 1);
    Rational s = 0;
    for (const auto& [b, cells] : level_sets) s += b * g(cell_union(f.stage, cells));
    return s;
}

Rational pf_identity_residual(const SetFunctional& g, const StepFunction& f, int stage) {
    StepFunction fn = truncate(f, stage);
    std::size_t n = stage_size(stage);
    Rational rhs = 0;
    for (std::size_t j = 0; j < n; ++j) {
        Rational cell_integral = fn.values[j] / n;  // equals the integral of f over the cell
        rhs += cell_integral * g(cell_union(stage, {j + 1}));
    }
    rhs *= n;
    Rational d = p_functional(g, fn) - rhs;
    return d < 0 ? Rational(-d) : d;
}

double pf_identity_residual(const SetFunctional& g, const std::function<double(double)>& f, int stage) {
    std::size_t n = stage_size(stage);
    std::vector<double> cell_integral(n), cell_g(n);
    for (std::size_t j = 0; j < n; ++j) {
        MeasurableSet cell = cell_union(stage, {j + 1});
        cell_integral[j] = lebesgue_reference(f, cell);
        cell_g[j] = static_cast<double>(g(cell));
    }
    // f_N has value N F_j on cell j; P(f_N) groups equal values
    std::map<double, std::vector<std::size_t>> level_sets;
    for (std::size_t j = 0; j < n; ++j) {
        double v = static_cast<double>(n) * cell_integral[j];
        if (v != 0.0) level_sets[v].push_back(j + 1);
    }
    double p = 0.0, rhs = 0.0;
    for (const auto& [b, cells] : level_sets) p += b * static_cast<double>(g(cell_union(stage, cells)));
    for (std::size_t j = 0; j < n; ++j) rhs += cell_integral[j] * cell_g[j];
    rhs *= static_cast<double>(n);
    return std::fabs(p - rhs);
}

ContinuityReport continuity_bound(const SetFunctional& g, const std::vector<std::vector<MeasurableSet>>& packs,
                                  int max_depth) {
    auto pack_value = [&](const std::vector<MeasurableSet>& pack) {
        Rational s = 0;
        for (const MeasurableSet& e : pack) {
            Dyadic m = e.measure();
            if (m.is_zero()) throw ZeroMeasureSet(e.str() + " has measure zero");
            Rational v = g(e);
            s += v * v / to_rational(m);
        }
        return static_cast<double>(s);
    };
    ContinuityReport rep;
    for (const auto& pack : packs) rep.bound = std::max(rep.bound, pack_value(pack));
    for (int d = 0; d <= max_depth; ++d) {
        std::vector<MeasurableSet> cells;
        std::size_t n = std::size_t{1} << d;
        for (std::size_t j = 1; j <= n; ++j) cells.push_back(cell_union(d + 1, {j}));
        ContinuityLevel lvl{d, pack_value(cells)};
        rep.bound = std::max(rep.bound, lvl.bound);
        rep.trace.push_back(lvl);
    }
    return rep;
}

namespace {

void check_sizes(std::size_t g, std::size_t m) {
    if (g != m || g == 0) throw NotContained("need matching non-empty value and measure lists");
}

}  // namespace

DeterminantCheck determinant_identity_check(const std::vector<double>& g, const std::vector<double>& m, double bound) {
    check_sizes(g.size(), m.size());
    auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd a(n, n);
    double m2 = bound * bound, sum = 0.0, prod = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(m[i] > 0)) throw ZeroMeasureSet("measure " + std::to_string(i + 1) + " is not positive");
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = (i == j ? m2 * m[i] : 0.0) - g[i] * g[j];
        sum += g[i] * g[i] / m[i];
        prod *= m[i];
    }
    DeterminantCheck rep;
    rep.determinant = a.partialPivLu().determinant();
    rep.closed_form = std::pow(m2, static_cast<double>(n - 1)) * prod * (m2 - sum);
    double scale = std::pow(m2, static_cast<double>(n)) * prod;  // size of the leading term
    rep.relative_residual = std::fabs(rep.determinant - rep.closed_form) / std::max(scale, 1e-300);
    return rep;
}

Rational determinant_identity_residual(const std::vector<Rational>& g, const std::vector<Rational>& m,
                                       const Rational& bound) {
    check_sizes(g.size(), m.size());
    std::size_t n = g.size();
    Rational m2 = bound * bound, sum = 0, prod = 1;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i] <= 0) throw ZeroMeasureSet("measure " + std::to_string(i + 1) + " is not positive");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? m2 * m[i] : Rational(0)) - g[i] * g[j];
        sum += g[i] * g[i] / m[i];
        prod *= m[i];
    }
    Rational det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k] == 0) ++p;
        if (p == n) {
            det = 0;
            break;
        }
        if (p != k) {
            std::swap(a[k], a[p]);
            det = -det;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
        }
    }
    Rational closed = prod * (m2 - sum);
    for (std::size_t k = 0; k + 1 < n; ++k) closed *= m2;
    Rational d = det - closed;
    return d < 0 ? Rational(-d) : d;
}

}  // namespace ivfn
