// Exact rational scalars and small integer helpers.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pia/errors.hpp"

namespace pia {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Rational rat(long long p, long long q = 1) { return Rational(p, q); }

// r^n for integer n; n < 0 inverts (throws on 0^negative).
inline Rational rat_pow(const Rational& r, const BigInt& n) {
    if (n == 0) return Rational(1);
    if (r == 0) {
        if (n < 0) throw DomainError("0 raised to a negative power");
        return Rational(0);
    }
    BigInt a = abs(n);
    if (a > 100000) throw DomainError("power exponent too large");
    Rational base = n > 0 ? r : Rational(1) / r;
    Rational out = 1;
    unsigned long e = a.convert_to<unsigned long>();
    while (e) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

// Floor of the integer q-th root.
inline BigInt iroot(const BigInt& x, unsigned q) {
    if (x < 0) throw DomainError("iroot of negative");
    if (x <= 1 || q == 1) return x;
    if (q == 2) return sqrt(x);
    BigInt lo = 0, hi = BigInt(1) << (static_cast<unsigned>(msb(x)) / q + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (pow(mid, q) <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

// Exact q-th root of a nonnegative integer, if one exists.
inline std::optional<BigInt> exact_iroot(const BigInt& x, unsigned q) {
    BigInt r = iroot(x, q);
    if (pow(r, q) == x) return r;
    return std::nullopt;
}

// Splits x = a^q * b with a maximal. Returns (a, b).
inline std::pair<BigInt, BigInt> extract_power(const BigInt& x, unsigned q) {
    if (x == 0) return {0, 1};
    BigInt a = 1, b = x;
    // trial-divide small primes, then check whether the remainder is itself a q-th power
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    for (int p : primes) {
        unsigned cnt = 0;
        while (b % p == 0) {
            b /= p;
            ++cnt;
        }
        a *= pow(BigInt(p), cnt / q);
        b *= pow(BigInt(p), cnt % q);
    }
    if (auto r = exact_iroot(b, q)) {
        a *= *r;
        b = 1;
    }
    return {a, b};
}

inline std::string rat_to_string(const Rational& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline std::size_t rat_hash(const Rational& r) {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::size_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    const BigInt &n = num(r), &d = den(r);
    if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max() &&
        d <= std::numeric_limits<std::int64_t>::max()) {
        mix(static_cast<std::size_t>(n.convert_to<std::int64_t>()));
        mix(static_cast<std::size_t>(d.convert_to<std::int64_t>()));
    } else {
        mix(std::hash<std::string>{}(n.str()));
        mix(std::hash<std::string>{}(d.str()));
    }
    return h;
}

inline BigInt big_gcd(const BigInt& a, const BigInt& b) { return gcd(a, b); }

}  // namespace pia
