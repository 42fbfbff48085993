#include "ivfn/dyadic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "ivfn/errors.hpp"

namespace ivfn {
namespace {

constexpr __int128 kI64Max = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kI64Min = std::numeric_limits<std::int64_t>::min();

__int128 shifted(std::int64_t num, int by) {
    // by <= kMaxExponent, |num| < 2^63, so the result fits in 126 bits.
    return static_cast<__int128>(num) * (static_cast<__int128>(1) << by);
}

std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("not an integer: '" + std::string(s) + "'");
    return v;
}

}  // namespace

Dyadic::Dyadic(std::int64_t numerator, int exponent) {
    if (exponent < 0) {
        if (-exponent > kMaxExponent) throw ArithmeticOverflow("dyadic exponent out of range");
        *this = from_wide(shifted(numerator, -exponent), 0);
        return;
    }
    *this = from_wide(numerator, exponent);
}

Dyadic Dyadic::from_wide(__int128 num, int exp) {
    if (num == 0) return Dyadic{};
    while (exp > 0 && (num & 1) == 0) {
        num /= 2;
        --exp;
    }
    if (exp > kMaxExponent) throw ArithmeticOverflow("dyadic exponent exceeds 2^-62");
    if (num > kI64Max || num < kI64Min) throw ArithmeticOverflow("dyadic numerator overflow");
    Dyadic d;
    d.num_ = static_cast<std::int64_t>(num);
    d.exp_ = exp;
    return d;
}

Dyadic Dyadic::pow2(int k) { return Dyadic(1, -k); }

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

std::string Dyadic::str() const {
    if (exp_ == 0) return std::to_string(num_);
    return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t num = parse_int(text.substr(0, slash));
        std::string_view den = text.substr(slash + 1);
        if (den.size() > 2 && den.substr(0, 2) == "2^") {
            int k = static_cast<int>(parse_int(den.substr(2)));
            return Dyadic(num, k);
        }
        std::int64_t d = parse_int(den);
        if (d <= 0 || (d & (d - 1)) != 0) throw ParseError("denominator is not a power of two: " + std::string(text));
        int k = 0;
        while ((std::int64_t{1} << k) != d) ++k;
        return Dyadic(num, k);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        bool neg = text.front() == '-';
        std::string_view whole = text.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
        std::string_view frac = text.substr(dot + 1);
        if (frac.size() > 18) throw ParseError("too many decimal digits: " + std::string(text));
        std::int64_t w = whole.empty() ? 0 : parse_int(whole);
        std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        __int128 den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        __int128 num = static_cast<__int128>(w) * den + f;
        // num / den is dyadic iff den's factors of five divide num.
        int twos = 0;
        while (den % 5 == 0) {
            if (num % 5 != 0) throw ParseError("decimal is not dyadic: " + std::string(text));
            num /= 5;
            den /= 5;
        }
        while (den > 1) {
            den /= 2;
            ++twos;
        }
        return from_wide(neg ? -num : num, twos);
    }
    return Dyadic(parse_int(text));
}

Dyadic Dyadic::operator-() const {
    if (num_ == std::numeric_limits<std::int64_t>::min()) throw ArithmeticOverflow("dyadic negation overflow");
    Dyadic d = *this;
    d.num_ = -num_;
    return d;
}

Dyadic Dyadic::half() const { return from_wide(num_, exp_ + 1); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    int e = std::max(a.exp_, b.exp_);
    return Dyadic::from_wide(shifted(a.num_, e - a.exp_) + shifted(b.num_, e - b.exp_), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
    int e = std::max(a.exp_, b.exp_);
    return Dyadic::from_wide(shifted(a.num_, e - a.exp_) - shifted(b.num_, e - b.exp_), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic::from_wide(static_cast<__int128>(a.num_) * b.num_, a.exp_ + b.exp_);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    int e = std::max(a.exp_, b.exp_);
    __int128 x = shifted(a.num_, e - a.exp_);
    __int128 y = shifted(b.num_, e - b.exp_);
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::int64_t Dyadic::floor_at(int level) const {
    // value * 2^level, rounded toward -infinity
    if (level >= exp_) {
        __int128 v = shifted(num_, level - exp_);
        if (v > kI64Max || v < kI64Min) throw ArithmeticOverflow("grid index overflow");
        return static_cast<std::int64_t>(v);
    }
    int drop = exp_ - level;
    __int128 den = static_cast<__int128>(1) << drop;
    __int128 q = num_ / den;
    if (num_ % den != 0 && num_ < 0) --q;
    return static_cast<std::int64_t>(q);
}

std::int64_t Dyadic::ceil_at(int level) const {
    std::int64_t f = floor_at(level);
    if (Dyadic(f, level) == *this) return f;
    return f + 1;
}

Dyadic midpoint(const Dyadic& a, const Dyadic& b) { return (a + b).half(); }

Dyadic abs(const Dyadic& a) { return a.sign() < 0 ? -a : a; }

std::size_t DyadicHash::operator()(const Dyadic& d) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(d.numerator());
    return h ^ (static_cast<std::size_t>(d.exponent()) * 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace ivfn
