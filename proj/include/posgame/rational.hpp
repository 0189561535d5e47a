#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace posgame {

// Exact rational with 64-bit numerator/denominator. Density invariants and
// t_k thresholds must compare exactly; doubles only appear where a value
// feeds a threshold, never a branch on equality.
struct Rational {
    long long num = 0;
    long long den = 1; // > 0, gcd(|num|, den) = 1

    Rational() = default;

    Rational(long long n, long long d = 1)
    {
        if (d == 0)
            throw std::invalid_argument("rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num = n;
        den = d;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const
    {
        if (den == 1)
            return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        return a.num == b.num && a.den == b.den;
    }

    friend bool operator<(const Rational& a, const Rational& b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }

    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend Rational operator+(const Rational& a, const Rational& b)
    {
        return Rational(checked(static_cast<__int128>(a.num) * b.den
                                + static_cast<__int128>(b.num) * a.den),
                        checked(static_cast<__int128>(a.den) * b.den));
    }

    friend Rational operator-(const Rational& a, const Rational& b)
    {
        return a + Rational(-b.num, b.den);
    }

    friend Rational operator*(const Rational& a, const Rational& b)
    {
        return Rational(checked(static_cast<__int128>(a.num) * b.num),
                        checked(static_cast<__int128>(a.den) * b.den));
    }

    friend Rational operator/(const Rational& a, const Rational& b)
    {
        if (b.num == 0)
            throw std::domain_error("rational: division by zero");
        return Rational(checked(static_cast<__int128>(a.num) * b.den),
                        checked(static_cast<__int128>(a.den) * b.num));
    }

private:
    static long long checked(__int128 v)
    {
        if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
            throw std::overflow_error("rational: 64-bit overflow");
        return static_cast<long long>(v);
    }
};

// compares an integer count against a rational threshold, exactly
inline bool count_at_least(unsigned long long count, const Rational& t)
{
    if (t.num <= 0)
        return true;
    return static_cast<unsigned __int128>(count) * static_cast<unsigned long long>(t.den)
        >= static_cast<unsigned __int128>(static_cast<unsigned long long>(t.num));
}

} // namespace posgame
