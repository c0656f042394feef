#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace roads {

// Small exact rational for measure values. Everything the measure module
// produces is dyadic (or a /4 multiple), so int64 components are ample.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    static Rational pow2(int exponent) {
        if (exponent >= 0) {
            if (exponent > 62) throw std::overflow_error("rational overflow");
            return Rational(std::int64_t{1} << exponent, 1);
        }
        if (exponent < -62) throw std::overflow_error("rational overflow");
        return Rational(1, std::int64_t{1} << (-exponent));
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num * b.num, a.den * b.den);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

private:
    void normalize() {
        if (den == 0) throw std::invalid_argument("zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }
};

}  // namespace roads
