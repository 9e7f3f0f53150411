// Multivariate polynomials over exact rationals, recursive dense
// representation: a polynomial is either a constant or a dense vector of
// coefficients in its main variable, where every coefficient only involves
// strictly smaller variable indices. GCDs use the subresultant PRS.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pia/errors.hpp"
#include "pia/rational.hpp"

namespace pia {

class Poly {
  public:
    int var = -1;         // -1: constant
    Rational k = 0;       // constant payload
    std::vector<Poly> c;  // c[d] = coefficient of K_var^d (invariant: c.back() nonzero)

    Poly() = default;
    explicit Poly(Rational r) : var(-1), k(std::move(r)) {}
    explicit Poly(long long n) : var(-1), k(n) {}

    static Poly variable(int v) {
        Poly p;
        p.var = v;
        p.c = {Poly(0), Poly(1)};
        return p;
    }
    static Poly make(int v, std::vector<Poly> cs) {
        while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
        if (cs.empty()) return Poly(0);
        if (cs.size() == 1) return std::move(cs.front());
        Poly p;
        p.var = v;
        p.c = std::move(cs);
        return p;
    }

    bool is_const() const { return var < 0; }
    bool is_zero() const { return var < 0 && k == 0; }
    bool is_one() const { return var < 0 && k == 1; }
    int degree() const { return var < 0 ? 0 : static_cast<int>(c.size()) - 1; }
    const Poly& lead() const { return c.back(); }
};

inline bool operator==(const Poly& a, const Poly& b) {
    if (a.var != b.var) return false;
    if (a.var < 0) return a.k == b.k;
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

inline Poly add(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_const() && b.is_const()) return Poly(a.k + b.k);
    if (a.var == b.var) {
        std::vector<Poly> cs(std::max(a.c.size(), b.c.size()));
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i < a.c.size() && i < b.c.size())
                cs[i] = add(a.c[i], b.c[i]);
            else
                cs[i] = i < a.c.size() ? a.c[i] : b.c[i];
        }
        return Poly::make(a.var, std::move(cs));
    }
    const Poly& hi = a.var > b.var ? a : b;
    const Poly& lo = a.var > b.var ? b : a;
    std::vector<Poly> cs = hi.c;
    cs[0] = add(cs[0], lo);
    return Poly::make(hi.var, std::move(cs));
}

inline Poly neg(const Poly& a) {
    if (a.is_const()) return Poly(-a.k);
    std::vector<Poly> cs;
    cs.reserve(a.c.size());
    for (const auto& x : a.c) cs.push_back(neg(x));
    Poly p;
    p.var = a.var;
    p.c = std::move(cs);
    return p;
}

inline Poly sub(const Poly& a, const Poly& b) { return add(a, neg(b)); }

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(0);
    if (a.is_const() && b.is_const()) return Poly(a.k * b.k);
    if (a.var == b.var) {
        std::vector<Poly> cs(a.c.size() + b.c.size() - 1);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j)
                cs[i + j] = add(cs[i + j], mul(a.c[i], b.c[j]));
        return Poly::make(a.var, std::move(cs));
    }
    const Poly& hi = a.var > b.var ? a : b;
    const Poly& lo = a.var > b.var ? b : a;
    std::vector<Poly> cs;
    cs.reserve(hi.c.size());
    for (const auto& x : hi.c) cs.push_back(mul(x, lo));
    return Poly::make(hi.var, std::move(cs));
}

inline Poly mul_rat(const Poly& a, const Rational& r) {
    if (r == 0) return Poly(0);
    if (r == 1) return a;
    return mul(a, Poly(r));
}

inline Poly pow_poly(const Poly& a, unsigned n) {
    Poly out(1), base = a;
    while (n) {
        if (n & 1) out = mul(out, base);
        base = n > 1 ? mul(base, base) : base;
        n >>= 1;
    }
    return out;
}

// P * v^d for v >= P.var
inline Poly shift_var(const Poly& p, int v, int d) {
    if (p.is_zero()) return p;
    if (d == 0 && p.var != v) return p;
    std::vector<Poly> cs;
    if (p.var == v) {
        cs.assign(static_cast<std::size_t>(d), Poly(0));
        for (const auto& x : p.c) cs.push_back(x);
    } else {
        cs.assign(static_cast<std::size_t>(d), Poly(0));
        cs.push_back(p);
    }
    return Poly::make(v, std::move(cs));
}

inline int degree_in(const Poly& p, int v) {
    if (p.is_const()) return 0;
    if (p.var == v) return p.degree();
    if (p.var < v) return 0;
    int d = 0;
    for (const auto& x : p.c) d = std::max(d, degree_in(x, v));
    return d;
}

// coefficient of v^d when p.var <= v
inline Poly coeff_in(const Poly& p, int v, int d) {
    if (p.var == v) return d <= p.degree() ? p.c[static_cast<std::size_t>(d)] : Poly(0);
    return d == 0 ? p : Poly(0);
}

inline int max_var(const Poly& p) { return p.var; }

inline Poly derivative(const Poly& p, int v) {
    if (p.is_const() || p.var < v) return Poly(0);
    if (p.var == v) {
        std::vector<Poly> cs;
        for (std::size_t d = 1; d < p.c.size(); ++d)
            cs.push_back(mul_rat(p.c[d], Rational(static_cast<long long>(d))));
        return Poly::make(v, std::move(cs));
    }
    std::vector<Poly> cs;
    cs.reserve(p.c.size());
    for (const auto& x : p.c) cs.push_back(derivative(x, v));
    return Poly::make(p.var, std::move(cs));
}

inline std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Poly(0);
    if (b.is_const()) {
        if (a.is_const()) return Poly(a.k / b.k);
        std::vector<Poly> cs;
        cs.reserve(a.c.size());
        for (const auto& x : a.c) {
            auto q = exact_div(x, b);
            if (!q) return std::nullopt;
            cs.push_back(std::move(*q));
        }
        return Poly::make(a.var, std::move(cs));
    }
    if (a.is_const()) return std::nullopt;
    if (a.var < b.var) return std::nullopt;
    if (a.var > b.var) {
        std::vector<Poly> cs;
        cs.reserve(a.c.size());
        for (const auto& x : a.c) {
            auto q = exact_div(x, b);
            if (!q) return std::nullopt;
            cs.push_back(std::move(*q));
        }
        return Poly::make(a.var, std::move(cs));
    }
    // same main variable: long division, remainder must vanish
    int v = a.var;
    if (a.degree() < b.degree()) return std::nullopt;
    Poly r = a;
    std::vector<Poly> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Poly(0));
    while (!r.is_zero() && degree_in(r, v) >= b.degree() && r.var == v) {
        int d = r.degree() - b.degree();
        auto qc = exact_div(r.lead(), b.lead());
        if (!qc) return std::nullopt;
        q[static_cast<std::size_t>(d)] = *qc;
        r = sub(r, mul(shift_var(*qc, v, d), b));
    }
    if (!r.is_zero()) return std::nullopt;
    return Poly::make(v, std::move(q));
}

// gcd of rationals: gcd of numerators over lcm of denominators (positive)
inline Rational rat_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    BigInt n = gcd(num(a), num(b));
    BigInt d = lcm(den(a), den(b));
    return Rational(n, d);
}

inline Rational rat_content(const Poly& p) {
    if (p.is_const()) return abs(p.k);
    Rational g = 0;
    for (const auto& x : p.c) {
        g = rat_gcd(g, rat_content(x));
        if (g == 1) break;
    }
    return g;
}

inline Rational lead_rat(const Poly& p) { return p.is_const() ? p.k : lead_rat(p.lead()); }

// scales to integer-primitive with positive leading rational
inline Poly canonical_unit(const Poly& p) {
    if (p.is_zero()) return p;
    Rational r = rat_content(p);
    if (lead_rat(p) < 0) r = -r;
    return *exact_div(p, Poly(r));
}

Poly gcd_poly(const Poly& a, const Poly& b);

namespace detail {

inline void collect_vars(const Poly& p, std::vector<int>& vars) {
    if (p.is_const()) return;
    if (std::find(vars.begin(), vars.end(), p.var) == vars.end()) vars.push_back(p.var);
    for (const auto& c : p.c) collect_vars(c, vars);
}

// dense coefficients of p viewed in v, with all other variables evaluated
inline std::vector<Rational> uni_eval(const Poly& p, int v,
                                      const std::map<int, Rational>& pt) {
    if (p.is_const()) return {p.k};
    if (p.var == v) {
        std::vector<Rational> out;
        out.reserve(p.c.size());
        for (const auto& c : p.c) {
            auto cv = uni_eval(c, v, pt);
            out.push_back(cv.empty() ? Rational(0) : cv[0]);
        }
        return out;
    }
    Rational t = pt.at(p.var);
    std::vector<Rational> acc{Rational(0)};
    for (std::size_t d = p.c.size(); d-- > 0;) {
        auto cv = uni_eval(p.c[d], v, pt);
        std::vector<Rational> next(std::max(acc.size(), cv.size()), Rational(0));
        for (std::size_t k = 0; k < acc.size(); ++k) next[k] = acc[k] * t;
        for (std::size_t k = 0; k < cv.size(); ++k) next[k] += cv[k];
        acc = std::move(next);
    }
    return acc;
}

inline int uni_degree(const std::vector<Rational>& c) {
    int d = static_cast<int>(c.size()) - 1;
    while (d >= 0 && c[static_cast<std::size_t>(d)] == 0) --d;
    return d;
}

// certified test that the primitive parts share no factor involving v:
// at a point where both leading coefficients survive, a common divisor with
// positive v-degree would survive specialization
inline bool coprime_by_evaluation(const Poly& a, const Poly& b, int v) {
    std::vector<int> vars;
    collect_vars(a, vars);
    collect_vars(b, vars);
    static const int primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::map<int, Rational> pt;
        int idx = attempt;
        for (int w : vars) {
            if (w == v) continue;
            pt[w] = Rational(primes[idx % 12], 1 + (idx % 5));
            idx += 5;
        }
        std::vector<Rational> ua, ub;
        try {
            ua = uni_eval(a, v, pt);
            ub = uni_eval(b, v, pt);
        } catch (...) {
            continue;
        }
        if (uni_degree(ua) != degree_in(a, v) || uni_degree(ub) != degree_in(b, v))
            continue;  // degenerate point, retry
        // univariate Euclid over Q
        std::vector<Rational> f = ua, g = ub;
        while (uni_degree(g) > 0) {
            int df = uni_degree(f), dg = uni_degree(g);
            if (df < dg) {
                std::swap(f, g);
                continue;
            }
            Rational q = f[static_cast<std::size_t>(df)] / g[static_cast<std::size_t>(dg)];
            for (int k = 0; k <= dg; ++k)
                f[static_cast<std::size_t>(df - dg + k)] -= q * g[static_cast<std::size_t>(k)];
            if (uni_degree(f) < dg) std::swap(f, g);
        }
        if (uni_degree(g) == 0 && !(g.empty() || g[0] == 0)) return true;
        return false;  // a common factor is indicated (or g vanished): run the PRS
    }
    return false;
}

}  // namespace detail

inline Poly content_main(const Poly& p) {
    if (p.is_const()) return Poly(abs(p.k));
    for (const auto& x : p.c)
        if (x.is_const() && !x.is_zero()) {
            // a constant coefficient forces a constant content
            Rational g = 0;
            for (const auto& y : p.c) g = rat_gcd(g, rat_content(y));
            return Poly(g);
        }
    Poly g(0);
    for (const auto& x : p.c) {
        g = gcd_poly(g, x);
        if (g.is_one()) break;
    }
    return g;
}

// pseudo-remainder of a by b in their shared main variable
inline Poly prem(const Poly& a, const Poly& b, int v) {
    int db = degree_in(b, v);
    Poly lcb = coeff_in(b, v, db);
    Poly r = a;
    int e = degree_in(a, v) - db + 1;
    while (!r.is_zero() && degree_in(r, v) >= db) {
        int dr = degree_in(r, v);
        Poly lcr = coeff_in(r, v, dr);
        r = sub(mul(lcb, r), mul(shift_var(lcr, v, dr - db), b));
        --e;
    }
    for (; e > 0; --e) r = mul(r, lcb);
    return r;
}

inline Poly gcd_poly(const Poly& a, const Poly& b) {
    if (a.is_zero()) return canonical_unit(b);
    if (b.is_zero()) return canonical_unit(a);
    if (a.is_const() && b.is_const()) return Poly(rat_gcd(a.k, b.k));
    if (a.is_const()) return Poly(rat_gcd(abs(a.k), rat_content(b)));
    if (b.is_const()) return Poly(rat_gcd(abs(b.k), rat_content(a)));
    if (a.var != b.var) {
        const Poly& hi = a.var > b.var ? a : b;
        const Poly& lo = a.var > b.var ? b : a;
        return gcd_poly(content_main(hi), lo);
    }
    int v = a.var;
    if (detail::coprime_by_evaluation(a, b, v)) {
        // no common factor involves v; only the contents can share one
        return gcd_poly(content_main(a), content_main(b));
    }
    Poly ca = content_main(a), cb = content_main(b);
    Poly cg = gcd_poly(ca, cb);
    Poly F = *exact_div(a, ca), G = *exact_div(b, cb);
    if (F.degree() < G.degree()) std::swap(F, G);
    Poly g(1), h(1);
    for (;;) {
        int delta = degree_in(F, v) - degree_in(G, v);
        Poly R = prem(F, G, v);
        if (R.is_zero()) {
            Poly pg = *exact_div(G, content_main(G));
            return canonical_unit(mul(cg, pg));
        }
        if (degree_in(R, v) == 0) return canonical_unit(cg);
        F = G;
        Poly divisor = mul(g, pow_poly(h, static_cast<unsigned>(delta)));
        G = *exact_div(R, divisor);
        g = coeff_in(F, v, degree_in(F, v));
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = *exact_div(pow_poly(g, static_cast<unsigned>(delta)),
                           pow_poly(h, static_cast<unsigned>(delta - 1)));
        }
    }
}

// exact square root in Q[vars], if it exists (sign-normalized to positive lead)
inline std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly(0);
    if (lead_rat(p) < 0) return std::nullopt;
    if (p.is_const()) {
        if (p.k < 0) return std::nullopt;
        auto n = exact_iroot(num(p.k), 2);
        auto d = exact_iroot(den(p.k), 2);
        if (!n || !d) return std::nullopt;
        return Poly(Rational(*n, *d));
    }
    int v = p.var;
    int dg = p.degree();
    if (dg % 2) return std::nullopt;
    int m = dg / 2;
    auto top = poly_sqrt(p.lead());
    if (!top) return std::nullopt;
    Poly s = shift_var(*top, v, m);
    for (int kdeg = m - 1; kdeg >= 0; --kdeg) {
        Poly r = sub(p, mul(s, s));
        if (r.is_zero()) break;
        Poly t = coeff_in(r, v, m + kdeg);
        auto sk = exact_div(t, mul_rat(*top, Rational(2)));
        if (!sk) return std::nullopt;
        s = add(s, shift_var(*sk, v, kdeg));
    }
    if (!(mul(s, s) == p)) return std::nullopt;
    return s;
}

// squarefree decomposition (Yun) in the main variable v: p = unit * prod f_i^i
inline std::vector<std::pair<Poly, int>> squarefree(const Poly& p, int v) {
    std::vector<std::pair<Poly, int>> out;
    if (degree_in(p, v) == 0) return out;
    Poly dp = derivative(p, v);
    Poly a = gcd_poly(p, dp);
    Poly b = *exact_div(p, a);
    Poly cpart = *exact_div(dp, a);
    Poly d = sub(cpart, derivative(b, v));
    int i = 1;
    while (degree_in(b, v) > 0) {
        Poly f = gcd_poly(b, d);
        if (degree_in(f, v) > 0) out.push_back({f, i});
        b = *exact_div(b, f);
        cpart = *exact_div(d, f);
        d = sub(cpart, derivative(b, v));
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fractions of polynomials, kept normalized: numerator and denominator are
// integer polynomials with coprime contents and positive-leading denominator.

struct PolyFrac {
    Poly n{Rational(0)};
    Poly d{Rational(1)};

    PolyFrac() = default;
    explicit PolyFrac(Rational r) : n(std::move(r)), d(Rational(1)) {}
    PolyFrac(Poly num_, Poly den_) : n(std::move(num_)), d(std::move(den_)) { normalize(); }

    bool is_zero() const { return n.is_zero(); }

    void normalize() {
        if (d.is_zero()) throw ZeroDenominator("polynomial fraction");
        if (n.is_zero()) {
            d = Poly(1);
            return;
        }
        Poly g = gcd_poly(n, d);
        if (!g.is_one()) {
            n = *exact_div(n, g);
            d = *exact_div(d, g);
        }
        Rational u = rat_content(d);
        if (lead_rat(d) < 0) u = -u;
        n = *exact_div(n, Poly(u));
        d = *exact_div(d, Poly(u));
        Rational cn = rat_content(n);
        BigInt q = den(cn);
        if (q != 1) {
            n = mul_rat(n, Rational(q));
            d = mul_rat(d, Rational(q));
        }
    }
};

inline PolyFrac operator+(const PolyFrac& a, const PolyFrac& b) {
    return PolyFrac(add(mul(a.n, b.d), mul(b.n, a.d)), mul(a.d, b.d));
}
inline PolyFrac operator-(const PolyFrac& a) { return PolyFrac(neg(a.n), a.d); }
inline PolyFrac operator-(const PolyFrac& a, const PolyFrac& b) { return a + (-b); }
inline PolyFrac operator*(const PolyFrac& a, const PolyFrac& b) {
    // cross-cancel before multiplying to keep intermediates small
    Poly g1 = gcd_poly(a.n, b.d), g2 = gcd_poly(b.n, a.d);
    Poly an = g1.is_one() ? a.n : *exact_div(a.n, g1);
    Poly bd = g1.is_one() ? b.d : *exact_div(b.d, g1);
    Poly bn = g2.is_one() ? b.n : *exact_div(b.n, g2);
    Poly ad = g2.is_one() ? a.d : *exact_div(a.d, g2);
    return PolyFrac(mul(an, bn), mul(ad, bd));
}
inline PolyFrac operator/(const PolyFrac& a, const PolyFrac& b) {
    if (b.is_zero()) throw ZeroDenominator("division of polynomial fractions");
    return a * PolyFrac(b.d, b.n);
}

inline PolyFrac pow_frac(const PolyFrac& a, long long e) {
    if (e == 0) return PolyFrac(Rational(1));
    bool inv = e < 0;
    unsigned long long n = inv ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    PolyFrac out{Rational(1)}, base = a;
    if (inv) {
        if (a.is_zero()) throw ZeroDenominator("inverse of zero fraction");
        base = PolyFrac(a.d, a.n);
    }
    while (n) {
        if (n & 1) out = out * base;
        if (n > 1) base = base * base;
        n >>= 1;
    }
    return out;
}

inline bool operator==(const PolyFrac& a, const PolyFrac& b) { return a.n == b.n && a.d == b.d; }

}  // namespace pia
