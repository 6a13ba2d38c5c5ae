#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobility {

__extension__ using wide_int = __int128;

// Non-negative-denominator fraction of 64-bit integers, always reduced.
// Arithmetic throws std::overflow_error instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const auto g = std::gcd(num, den);
        num_ = num / (g == 0 ? 1 : g);
        den_ = den / (g == 0 ? 1 : g);
    }

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        const auto g = std::gcd(a.den_, b.den_);
        const wide_int den = static_cast<wide_int>(a.den_ / g) * b.den_;
        const wide_int num = static_cast<wide_int>(a.num_) * (b.den_ / g) + static_cast<wide_int>(b.num_) * (a.den_ / g);
        return from_wide(num, den);
    }

    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<wide_int>(a.num_) * b.num_, static_cast<wide_int>(a.den_) * b.den_);
    }

    Rational& operator+=(const Rational& other) { return *this = *this + other; }

    friend bool operator==(const Rational&, const Rational&) = default;

private:
    static Rational from_wide(wide_int num, wide_int den) {
        wide_int a = num < 0 ? -num : num;
        wide_int b = den;
        while (b != 0) {
            const wide_int t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        constexpr wide_int lim = INT64_MAX;
        if (num > lim || num < -lim || den > lim) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace mobility
