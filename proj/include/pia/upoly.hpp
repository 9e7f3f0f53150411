// Dense univariate polynomials in one kernel over the field of polynomial
// fractions in the remaining kernels. Backs partial fractions, denominator
// factoring and the rational integrator.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pia/normal.hpp"

namespace pia {

struct UPoly {
    std::vector<PolyFrac> c;  // c[d] = coefficient of v^d; trailing zeros trimmed

    UPoly() = default;
    explicit UPoly(PolyFrac k) {
        if (!k.is_zero()) c.push_back(std::move(k));
    }
    static UPoly variable() {
        UPoly u;
        u.c = {PolyFrac(Rational(0)), PolyFrac(Rational(1))};
        return u;
    }
    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const PolyFrac& lead() const { return c.back(); }
    PolyFrac coeff(int d) const {
        return d >= 0 && d < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(d)]
                                                        : PolyFrac(Rational(0));
    }
};

inline UPoly uadd(const UPoly& a, const UPoly& b) {
    UPoly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), PolyFrac(Rational(0)));
    for (std::size_t i = 0; i < out.c.size(); ++i) {
        if (i < a.c.size()) out.c[i] = out.c[i] + a.c[i];
        if (i < b.c.size()) out.c[i] = out.c[i] + b.c[i];
    }
    out.trim();
    return out;
}

inline UPoly uneg(const UPoly& a) {
    UPoly out = a;
    for (auto& x : out.c) x = -x;
    return out;
}

inline UPoly usub(const UPoly& a, const UPoly& b) { return uadd(a, uneg(b)); }

inline UPoly umul(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly();
    UPoly out;
    out.c.assign(a.c.size() + b.c.size() - 1, PolyFrac(Rational(0)));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = out.c[i + j] + a.c[i] * b.c[j];
    out.trim();
    return out;
}

inline UPoly uscale(const UPoly& a, const PolyFrac& k) {
    if (k.is_zero()) return UPoly();
    UPoly out = a;
    for (auto& x : out.c) x = x * k;
    out.trim();
    return out;
}

inline UPoly upow(const UPoly& a, unsigned n) {
    UPoly out(PolyFrac(Rational(1)));
    UPoly base = a;
    while (n) {
        if (n & 1) out = umul(out, base);
        if (n > 1) base = umul(base, base);
        n >>= 1;
    }
    return out;
}

inline std::pair<UPoly, UPoly> udivrem(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw ZeroDenominator("univariate division by zero");
    UPoly r = a, q;
    if (a.degree() >= b.degree()) q.c.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1,
                                             PolyFrac(Rational(0)));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int d = r.degree() - b.degree();
        PolyFrac f = r.lead() / b.lead();
        q.c[static_cast<std::size_t>(d)] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i) {
            std::size_t k = static_cast<std::size_t>(d) + i;
            r.c[k] = r.c[k] - f * b.c[i];
        }
        r.trim();
    }
    q.trim();
    return {q, r};
}

inline UPoly umod(const UPoly& a, const UPoly& b) { return udivrem(a, b).second; }

inline UPoly umonic(const UPoly& a) {
    if (a.is_zero()) return a;
    return uscale(a, PolyFrac(a.lead().d, a.lead().n));
}

inline UPoly ugcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = umod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return umonic(a);
}

inline UPoly uderiv(const UPoly& a) {
    UPoly out;
    for (std::size_t d = 1; d < a.c.size(); ++d)
        out.c.push_back(a.c[d] * PolyFrac(Rational(static_cast<long long>(d))));
    out.trim();
    return out;
}

inline PolyFrac ueval(const UPoly& a, const PolyFrac& x) {
    PolyFrac out(Rational(0));
    for (std::size_t d = a.c.size(); d-- > 0;) out = out * x + a.c[d];
    return out;
}

// extended gcd: returns (g, s, t) with s*a + t*b = g (g monic)
inline std::tuple<UPoly, UPoly, UPoly> uxgcd(UPoly a, UPoly b) {
    UPoly s0(PolyFrac(Rational(1))), s1;
    UPoly t0, t1(PolyFrac(Rational(1)));
    while (!b.is_zero()) {
        auto [q, r] = udivrem(a, b);
        UPoly s2 = usub(s0, umul(q, s1));
        UPoly t2 = usub(t0, umul(q, t1));
        a = std::move(b);
        b = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.is_zero()) return {a, s0, t0};
    PolyFrac u(a.lead().d, a.lead().n);
    return {uscale(a, u), uscale(s0, u), uscale(t0, u)};
}

// Yun squarefree decomposition over the field: a = lc * prod f_i^i (f_i monic)
inline std::vector<std::pair<UPoly, int>> usquarefree(const UPoly& a) {
    std::vector<std::pair<UPoly, int>> out;
    if (a.degree() <= 0) return out;
    UPoly p = umonic(a);
    UPoly dp = uderiv(p);
    UPoly g = ugcd(p, dp);
    UPoly b = udivrem(p, g).first;
    UPoly cpart = udivrem(dp, g).first;
    UPoly d = usub(cpart, uderiv(b));
    int i = 1;
    while (b.degree() > 0) {
        UPoly f = ugcd(b, d);
        if (f.degree() > 0) out.push_back({f, i});
        b = udivrem(b, f).first;
        cpart = udivrem(d, f).first;
        d = usub(cpart, uderiv(b));
        ++i;
    }
    return out;
}

// conversion between a Poly and its univariate view in kernel v
inline UPoly to_upoly(const Poly& p, int v) {
    UPoly out;
    int dg = degree_in(p, v);
    out.c.reserve(static_cast<std::size_t>(dg) + 1);
    for (int d = 0; d <= dg; ++d)
        out.c.push_back(PolyFrac(NormalBuilder::coeff_any(p, v, d), Poly(1)));
    out.trim();
    return out;
}

inline PolyFrac from_upoly(const UPoly& u, int v) {
    PolyFrac out(Rational(0));
    PolyFrac K(Poly::variable(v), Poly(1));
    for (std::size_t d = u.c.size(); d-- > 0;) out = out * K + u.c[d];
    return out;
}

// ---------------------------------------------------------------------------
// Factorization into monic linear/quadratic pieces where the coefficient
// field permits it: rational roots for rational coefficients, the quadratic
// formula when the discriminant is a perfect square. Returns nullopt when a
// factor of degree >= 3 resists splitting.

inline bool upoly_rational(const UPoly& a, std::vector<Rational>& out) {
    out.clear();
    for (const auto& x : a.c) {
        if (!x.n.is_const() || !x.d.is_const()) return false;
        out.push_back(x.n.k / x.d.k);
    }
    return true;
}

// roots by the rational root theorem (monic input scaled internally)
inline std::vector<Rational> rational_roots(std::vector<Rational> cs) {
    std::vector<Rational> roots;
    // clear denominators
    BigInt L = 1;
    for (auto& c : cs) L = lcm(L, den(c));
    std::vector<BigInt> ic;
    for (auto& c : cs) ic.push_back(num(c) * (L / den(c)));
    while (ic.size() > 1 && ic.front() == 0) {
        roots.push_back(0);
        ic.erase(ic.begin());
    }
    if (ic.size() <= 1) return roots;
    auto divisors = [](BigInt n) {
        n = abs(n);
        std::vector<BigInt> ds;
        for (BigInt d = 1; d * d <= n && d < 100000; ++d)
            if (n % d == 0) {
                ds.push_back(d);
                ds.push_back(n / d);
            }
        return ds;
    };
    auto eval = [&](const Rational& r) {
        Rational v = 0;
        for (std::size_t d = ic.size(); d-- > 0;) v = v * r + Rational(ic[d]);
        return v;
    };
    bool progress = true;
    while (progress && ic.size() > 2) {
        progress = false;
        for (const BigInt& p : divisors(ic.front())) {
            if (progress) break;
            for (const BigInt& q : divisors(ic.back())) {
                for (int sgn : {1, -1}) {
                    Rational cand(p * sgn, q);
                    if (eval(cand) == 0) {
                        roots.push_back(cand);
                        // synthetic division by (v - cand)
                        std::vector<BigInt> nc(ic.size() - 1);
                        Rational carry = 0;
                        std::vector<Rational> rc(ic.size() - 1);
                        for (std::size_t d = ic.size() - 1; d >= 1; --d) {
                            carry = Rational(ic[d]) + carry * cand;
                            rc[d - 1] = carry;
                        }
                        BigInt L2 = 1;
                        for (auto& c2 : rc) L2 = lcm(L2, den(c2));
                        ic.clear();
                        for (auto& c2 : rc) ic.push_back(num(c2) * (L2 / den(c2)));
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
        }
    }
    if (ic.size() == 2) roots.push_back(-Rational(ic[0]) / Rational(ic[1]));
    return roots;
}

struct UFactor {
    UPoly p;  // monic, irreducible as far as this engine splits
    int mult;
};

// splits a monic squarefree factor; nullopt when out of scope
inline std::optional<std::vector<UPoly>> split_squarefree(const UPoly& f) {
    std::vector<UPoly> out;
    if (f.degree() <= 1) {
        out.push_back(f);
        return out;
    }
    if (f.degree() == 2) {
        // discriminant b^2 - 4ac with a = 1
        PolyFrac b = f.coeff(1), c0 = f.coeff(0);
        PolyFrac disc = b * b - PolyFrac(Rational(4)) * c0;
        auto sn = poly_sqrt(disc.n);
        auto sd = poly_sqrt(disc.d);
        if (sn && sd) {
            PolyFrac s(*sn, *sd);
            PolyFrac half(Rational(1, 2));
            PolyFrac r1 = (-b + s) * half, r2 = (-b - s) * half;
            for (const PolyFrac& r : {r1, r2}) {
                UPoly lin = UPoly::variable();
                lin = usub(lin, UPoly(r));
                out.push_back(lin);
            }
            return out;
        }
        out.push_back(f);  // irreducible quadratic stays
        return out;
    }
    std::vector<Rational> cs;
    if (upoly_rational(f, cs)) {
        auto roots = rational_roots(cs);
        UPoly rest = f;
        for (const auto& r : roots) {
            UPoly lin = UPoly::variable();
            lin = usub(lin, UPoly(PolyFrac(r)));
            rest = udivrem(rest, lin).first;
            out.push_back(lin);
        }
        if (rest.degree() == 0) return out;
        if (rest.degree() <= 2) {
            auto sub = split_squarefree(rest);
            for (auto& s : *sub) out.push_back(s);
            return out;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

// full factorization: f = lead * prod factors_i^mult_i, nullopt if out of scope
inline std::optional<std::pair<PolyFrac, std::vector<UFactor>>> ufactor(const UPoly& f) {
    if (f.is_zero()) return std::nullopt;
    PolyFrac lead = f.lead();
    std::vector<UFactor> out;
    if (f.degree() == 0) return std::make_pair(lead, out);
    auto sf = usquarefree(f);
    for (auto& [g, m] : sf) {
        auto split = split_squarefree(g);
        if (!split) return std::nullopt;
        for (auto& p : *split) out.push_back({p, m});
    }
    return std::make_pair(lead, out);
}

}  // namespace pia
