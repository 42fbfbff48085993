#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ivfn {

/// Exact dyadic rational numerator / 2^exponent, kept in canonical form
/// (odd numerator, or exponent zero).
class Dyadic {
public:
    static constexpr int kMaxExponent = 62;

    constexpr Dyadic() = default;
    Dyadic(std::int64_t integer) : num_(integer) {}  // NOLINT(implicit)
    Dyadic(std::int64_t numerator, int exponent);

    /// 2^k for any k with |k| <= kMaxExponent.
    static Dyadic pow2(int k);

    /// Accepts "n", "n/2^k", "n/d" with d a power of two, and finite decimals
    /// whose value is dyadic ("0.375").
    static Dyadic parse(std::string_view text);

    std::int64_t numerator() const { return num_; }
    int exponent() const { return exp_; }

    double to_double() const;
    /// "num/2^k", or just "num" for integers.
    std::string str() const;

    Dyadic operator-() const;
    Dyadic half() const;
    bool is_zero() const { return num_ == 0; }
    int sign() const { return (num_ > 0) - (num_ < 0); }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
    Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
    Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

    /// Smallest integer k with k / 2^level >= *this.
    std::int64_t ceil_at(int level) const;
    /// Largest integer k with k / 2^level <= *this.
    std::int64_t floor_at(int level) const;

private:
    static Dyadic from_wide(__int128 num, int exp);

    std::int64_t num_ = 0;
    int exp_ = 0;
};

Dyadic midpoint(const Dyadic& a, const Dyadic& b);
Dyadic abs(const Dyadic& a);

struct DyadicHash {
    std::size_t operator()(const Dyadic& d) const noexcept;
};

}  // namespace ivfn
