// Symbolic differentiation, the Simplify/Together/Apart analogs, the
// restricted integrator, and zero testing.
#pragma once

#include <complex>
#include <random>
#include <tuple>

#include "pia/expr.hpp"
#include "pia/normal.hpp"
#include "pia/upoly.hpp"

namespace pia {

// carries the fallback single-fraction form
struct FactorizationOutOfScope : Error {
    Expr together_form;
    explicit FactorizationOutOfScope(Expr together)
        : Error("denominator factorization out of scope"), together_form(std::move(together)) {}
};

// ---------------------------------------------------------------------------
// Differentiation (exact, structural).

inline Expr differentiate1(const Expr& e, const std::string& v) {
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::ImagUnit: return Expr::number(0);
        case Kind::Symbol: return e.name() == v ? Expr::number(1) : Expr::number(0);
        case Kind::Sum: {
            ExprList ts;
            ts.reserve(e.args().size());
            for (const auto& t : e.args()) ts.push_back(differentiate1(t, v));
            return Expr::sum(std::move(ts));
        }
        case Kind::Product: {
            ExprList ts;
            const auto& fs = e.args();
            for (std::size_t j = 0; j < fs.size(); ++j) {
                Expr dj = differentiate1(fs[j], v);
                if (dj.is_zero()) continue;
                ExprList rest{dj};
                for (std::size_t k = 0; k < fs.size(); ++k)
                    if (k != j) rest.push_back(fs[k]);
                ts.push_back(Expr::product(std::move(rest)));
            }
            return Expr::sum(std::move(ts));
        }
        case Kind::Power: {
            const Expr& b = e.base();
            const Expr& w = e.exponent();
            Expr db = differentiate1(b, v);
            if (w.is_rational()) {
                if (db.is_zero()) return Expr::number(0);
                return w * Expr::pow(b, Expr::number(w.rational() - 1)) * db;
            }
            Expr dw = differentiate1(w, v);
            Expr out = Expr::number(0);
            if (!dw.is_zero()) out = out + dw * log_of(b) * e;
            if (!db.is_zero()) out = out + w * db / b * e;
            return out;
        }
        case Kind::Call: {
            const Expr& u = e.call_arg();
            Expr du = differentiate1(u, v);
            if (du.is_zero()) return Expr::number(0);
            const std::string& fn = e.name();
            if (e.call_deriv() == 0) {
                if (fn == "sin") return cos_of(u) * du;
                if (fn == "cos") return -(sin_of(u) * du);
                if (fn == "tan") return (1 + pow(tan_of(u), 2)) * du;
                if (fn == "exp") return e * du;
                if (fn == "log") return du / u;
            }
            return Expr::call(e.name(), u, e.call_deriv() + 1) * du;
        }
    }
    return Expr::number(0);
}

inline Expr differentiate(const Expr& e, const std::string& v, int order = 1) {
    if (order < 1) throw DomainError("derivative order must be >= 1");
    Expr out = e;
    for (int k = 0; k < order; ++k) out = differentiate1(out, v);
    return out;
}

// ---------------------------------------------------------------------------
// Opaque-function definitions and their expansion.

struct FuncDef {
    std::string param;
    Expr body;
};
using FuncDefs = std::map<std::string, FuncDef>;

inline Expr expand_definitions(const Expr& e, const FuncDefs& defs, int depth = 0) {
    if (depth > 64) throw DomainError("function definitions nest too deeply");
    switch (e.kind()) {
        case Kind::Rational:
        case Kind::ImagUnit:
        case Kind::Symbol: return e;
        case Kind::Call: {
            Expr arg = expand_definitions(e.call_arg(), defs, depth + 1);
            auto it = defs.find(e.name());
            if (it == defs.end()) return Expr::call(e.name(), arg, e.call_deriv());
            Expr body = expand_definitions(it->second.body, defs, depth + 1);
            if (e.call_deriv() > 0) body = differentiate(body, it->second.param, e.call_deriv());
            return substitute(body, {{it->second.param, arg}});
        }
        case Kind::Power:
            return Expr::pow(expand_definitions(e.base(), defs, depth + 1),
                             expand_definitions(e.exponent(), defs, depth + 1));
        case Kind::Product:
        case Kind::Sum: {
            ExprList xs;
            xs.reserve(e.args().size());
            for (const auto& a : e.args()) xs.push_back(expand_definitions(a, defs, depth + 1));
            return e.kind() == Kind::Product ? Expr::product(std::move(xs))
                                             : Expr::sum(std::move(xs));
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Display helpers: rebuilding factored expressions from polynomials.

namespace detail {

Expr factored_poly_expr(const Poly& p, const KernelTable& t);

inline Expr upoly_expr(const UPoly& u, int v, const KernelTable& t) {
    ExprList terms;
    Expr K = t.key_of(v);
    for (std::size_t d = 0; d < u.c.size(); ++d) {
        if (u.c[d].is_zero()) continue;
        NormalForm nf{u.c[d], nullptr, true};
        Expr coeff = expr_of_poly(u.c[d].n, t) / expr_of_poly(u.c[d].d, t);
        if (d == 0)
            terms.push_back(coeff);
        else
            terms.push_back(coeff * Expr::pow(K, Expr::number(static_cast<long long>(d))));
    }
    return Expr::sum(std::move(terms));
}

inline Expr factored_poly_expr(const Poly& p, const KernelTable& t) {
    if (p.is_const()) return Expr::number(p.k);
    int v = p.var;
    Poly cont = content_main(p);
    Poly prim = p;
    Expr front = Expr::number(1);
    if (!cont.is_one()) {
        auto q = exact_div(p, cont);
        if (q) {
            prim = *q;
            front = factored_poly_expr(cont, t);
        }
    }
    auto sf = squarefree(prim, v);
    if (sf.empty()) return front * expr_of_poly(prim, t);
    Poly check(1);
    for (auto& [f, m] : sf) check = mul(check, pow_poly(f, static_cast<unsigned>(m)));
    auto unit = exact_div(prim, check);
    if (!unit || !unit->is_const()) return front * expr_of_poly(prim, t);
    ExprList fs;
    if (unit->k != 1) fs.push_back(Expr::number(unit->k));
    bool nontrivial = sf.size() > 1 || sf.front().second > 1;
    for (auto& [f, m] : sf) {
        // try to split a factor further for display (x(x-1) rather than x^2-x)
        Expr fe = expr_of_poly(f, t);
        if (nontrivial || degree_in(f, v) > 1) {
            auto split = split_squarefree(umonic(to_upoly(f, v)));
            if (split && split->size() > 1) {
                Rational lead = lead_rat(f);
                ExprList gs;
                if (lead != 1) gs.push_back(Expr::number(lead));
                for (auto& g : *split) gs.push_back(upoly_expr(g, v, t));
                fe = Expr::product(std::move(gs));
            }
        }
        fs.push_back(m == 1 ? fe : Expr::pow(fe, Expr::number(m)));
    }
    return front * Expr::product(std::move(fs));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// simplify / together / trig_expand.

struct Simplified {
    Expr value;
    bool rigorous = true;
};

inline Simplified simplify_ex(const Expr& e) {
    NormalForm nf = normal_form(e);
    if (nf.is_zero()) return {Expr::number(0), true};
    Expr n = detail::expr_of_poly(nf.frac.n, *nf.table);
    if (nf.frac.d.is_one()) return {n, nf.rigorous};
    Expr d = detail::factored_poly_expr(nf.frac.d, *nf.table);
    return {n / d, nf.rigorous};
}

inline Expr simplify(const Expr& e) { return simplify_ex(e).value; }

inline Expr together(const Expr& e) { return simplify_ex(e).value; }

inline Expr trig_expand(const Expr& e) { return simplify_ex(e).value; }

// ---------------------------------------------------------------------------
// Zero testing with the randomized numeric fallback for non-rigorous forms.

enum class ZeroStatus { Zero, NonZero, ProbablyZero, ProbablyNonZero };

namespace detail {

using Cplx = std::complex<double>;

// numeric evaluation treating every opaque kernel as an independent value
struct RandomEval {
    std::mt19937_64 rng;
    std::map<Expr, Cplx, ExprLess> opaque;
    explicit RandomEval(std::uint64_t seed) : rng(seed) {}

    Cplx fresh() {
        std::uniform_real_distribution<double> mag(0.5, 1.5), ang(0.1, 1.4);
        double m = mag(rng), a = ang(rng);
        return {m * std::cos(a), m * std::sin(a)};
    }

    Cplx eval(const Expr& e) {
        switch (e.kind()) {
            case Kind::Rational: return {static_cast<double>(e.rational()), 0.0};
            case Kind::ImagUnit: return {0.0, 1.0};
            case Kind::Symbol: {
                auto it = opaque.find(e);
                if (it == opaque.end()) it = opaque.emplace(e, fresh()).first;
                return it->second;
            }
            case Kind::Sum: {
                Cplx s = 0;
                for (const auto& t : e.args()) s += eval(t);
                return s;
            }
            case Kind::Product: {
                Cplx p = 1;
                for (const auto& f : e.args()) p *= eval(f);
                return p;
            }
            case Kind::Power: return std::pow(eval(e.base()), eval(e.exponent()));
            case Kind::Call: {
                if (e.call_deriv() == 0) {
                    Cplx u = eval(e.call_arg());
                    if (e.name() == "sin") return std::sin(u);
                    if (e.name() == "cos") return std::cos(u);
                    if (e.name() == "tan") return std::tan(u);
                    if (e.name() == "exp") return std::exp(u);
                    if (e.name() == "log") return std::log(u);
                }
                auto it = opaque.find(e);
                if (it == opaque.end()) it = opaque.emplace(e, fresh()).first;
                return it->second;
            }
        }
        return 0;
    }
};

}  // namespace detail

inline ZeroStatus is_zero_status(const Expr& e) {
    NormalForm nf = normal_form(e);
    if (nf.is_zero()) return ZeroStatus::Zero;
    if (nf.rigorous) return ZeroStatus::NonZero;
    // randomized numeric fallback: 20 points, threshold 1e-10
    int zeroish = 0;
    for (int t = 0; t < 20; ++t) {
        detail::RandomEval ev(0x5eed0000u + static_cast<std::uint64_t>(t));
        try {
            auto v = ev.eval(e);
            if (std::abs(v) < 1e-10) ++zeroish;
        } catch (const Error&) {
        }
    }
    return zeroish == 20 ? ZeroStatus::ProbablyZero : ZeroStatus::ProbablyNonZero;
}

inline bool is_exactly_zero(const Expr& e) { return is_zero_status(e) == ZeroStatus::Zero; }

// ---------------------------------------------------------------------------
// Partial fractions.

struct ApartTerm {
    Expr numerator;  // degree < degree of base
    Expr base;       // monic factor in v
    int power = 1;   // denominator exponent
};

struct ApartResult {
    Expr poly_part;  // polynomial in v
    std::vector<ApartTerm> terms;
    Expr assembled() const {
        ExprList ts{poly_part};
        for (const auto& t : terms)
            ts.push_back(t.numerator / Expr::pow(t.base, Expr::number(t.power)));
        return Expr::sum(std::move(ts));
    }
};

inline ApartResult apart_terms(const Expr& e, const std::string& v) {
    NormalBuilder builder;
    PolyFrac f = builder.build(e);
    const KernelTable& table = *builder.table;
    int vi = builder.table->index_of(Expr::sym(v));
    ApartResult out;
    if (vi < 0 || degree_in(f.d, vi) == 0) {
        // nothing to split
        NormalForm nf{f, builder.table, true};
        out.poly_part = to_expr(nf);
        return out;
    }
    UPoly N = to_upoly(f.n, vi), D = to_upoly(f.d, vi);
    // coefficients of N and D in other kernels must be v-free, which the
    // recursive-dense representation guarantees by construction
    auto fac = ufactor(D);
    if (!fac) {
        NormalForm nf{f, builder.table, true};
        throw FactorizationOutOfScope(to_expr(nf));
    }
    auto& [lead, factors] = *fac;
    N = uscale(N, PolyFrac(lead.d, lead.n));  // absorb the leading unit
    auto [Q, R] = udivrem(N, umonic(D));
    out.poly_part = detail::upoly_expr(Q, vi, table);
    for (std::size_t idx = 0; idx < factors.size(); ++idx) {
        const UPoly& p = factors[idx].p;
        int m = factors[idx].mult;
        UPoly pm = upow(p, static_cast<unsigned>(m));
        // g = D_monic / p^m (product of the other factor powers)
        UPoly g(PolyFrac(Rational(1)));
        for (std::size_t j = 0; j < factors.size(); ++j)
            if (j != idx) g = umul(g, upow(factors[j].p, static_cast<unsigned>(factors[j].mult)));
        auto [gg, s, t] = uxgcd(umod(g, pm), pm);
        if (gg.degree() != 0) throw DomainError("internal: factors not coprime in apart");
        // A = R * g^{-1} mod p^m
        UPoly A = umod(umul(umod(R, pm), uscale(s, PolyFrac(gg.coeff(0).d, gg.coeff(0).n))), pm);
        // base-p digits: A = sum_j digit_j * p^j, digit deg < deg p
        for (int j = 0; j < m && !A.is_zero(); ++j) {
            auto [q2, digit] = udivrem(A, p);
            if (!digit.is_zero()) {
                ApartTerm term;
                term.numerator = detail::upoly_expr(digit, vi, table);
                term.base = detail::upoly_expr(p, vi, table);
                term.power = m - j;
                out.terms.push_back(std::move(term));
            }
            A = q2;
        }
    }
    return out;
}

inline Expr apart(const Expr& e, const std::string& v) { return apart_terms(e, v).assembled(); }


// ---------------------------------------------------------------------------
// Restricted symbolic integration. Supported classes: polynomials in v,
// rational functions whose denominator splits into linear/quadratic factors,
// trig polynomials with arguments linear in v (times polynomial coefficients),
// and rational integrands in v and a single root of a linear function of v.

inline Expr integrate(const Expr& e, const std::string& v);

namespace detail {

// complex rational constants a + b*i used by the trig linearization
struct CRat {
    Rational re, im;
    CRat() : re(0), im(0) {}
    CRat(Rational r, Rational i2) : re(std::move(r)), im(std::move(i2)) {}
};
inline CRat operator*(const CRat& a, const CRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline Expr crat_expr(const CRat& z) {
    return Expr::number(z.re) + Expr::i() * Expr::number(z.im);
}

// integral of numerator/(base^m) with base linear in v, or quadratic split
// over its (possibly irrational or complex) roots
inline Expr integrate_fraction_term(const Expr& numerator, const Expr& base, int m,
                                    const std::string& v) {
    Expr var = Expr::sym(v);
    Expr a = differentiate1(base, v);
    if (!contains_symbol(a, v)) {
        // linear factor a*v + c; apart guarantees a v-free numerator
        if (contains_symbol(numerator, v))
            throw NotIntegrable("nonconstant numerator over a linear factor");
        if (m == 1) return numerator / a * log_of(base);
        return numerator / (a * Expr::number(1 - m)) *
               Expr::pow(base, Expr::number(static_cast<long long>(1 - m)));
    }
    Expr d2 = differentiate1(a, v);
    if (contains_symbol(d2, v)) throw NotIntegrable("denominator factor beyond quadratic");
    Expr lead = d2 / 2;
    Expr b1 = substitute(a, {{v, Expr::number(0)}});
    Expr c1 = substitute(base, {{v, Expr::number(0)}});
    Expr disc = simplify(b1 * b1 - 4 * lead * c1);
    Expr scaled = numerator / Expr::pow(lead, Expr::number(m));
    if (disc.is_zero()) {
        // double root r: integrate N(v)/(v-r)^{2m} directly by Taylor shift
        Expr r = simplify(-b1 / (2 * lead));
        Expr out = Expr::number(0);
        Expr gk = scaled;
        Rational fact = 1;
        for (int k2 = 0;; ++k2) {
            if (k2 > 0) {
                gk = differentiate1(gk, v);
                if (gk.is_zero()) break;
                fact *= k2;
            }
            Expr ck = simplify(substitute(gk, {{v, r}}) / Expr::number(fact));
            int power = 2 * m - k2;
            if (power <= 0) break;
            if (!ck.is_zero()) {
                if (power == 1)
                    out = out + ck * log_of(var - r);
                else
                    out = out + ck * Expr::pow(var - r, Expr::number(1 - power)) /
                                    Expr::number(1 - power);
            }
            if (k2 == 0 && gk.is_zero()) break;
        }
        return out;
    }
    Expr s = sqrt_of(disc);
    Expr r1 = simplify((-b1 + s) / (2 * lead));
    Expr r2 = simplify((-b1 - s) / (2 * lead));
    Expr out = Expr::number(0);
    for (int which = 0; which < 2; ++which) {
        const Expr& r = which == 0 ? r1 : r2;
        const Expr& other = which == 0 ? r2 : r1;
        // Taylor coefficients of scaled/(v-other)^m around v = r
        Expr g = scaled / Expr::pow(var - other, Expr::number(m));
        Expr gk = g;
        Rational fact = 1;
        for (int k2 = 0; k2 < m; ++k2) {
            if (k2 > 0) {
                gk = differentiate1(gk, v);
                fact *= k2;
            }
            Expr ck = simplify(substitute(gk, {{v, r}}) / Expr::number(fact));
            if (ck.is_zero()) continue;
            int power = m - k2;
            if (power == 1)
                out = out + ck * log_of(var - r);
            else
                out = out + ck * Expr::pow(var - r, Expr::number(1 - power)) /
                                Expr::number(1 - power);
        }
    }
    return out;
}

inline Expr integrate_rational(const Expr& e, const std::string& v) {
    ApartResult parts;
    try {
        parts = apart_terms(e, v);
    } catch (const FactorizationOutOfScope&) {
        throw NotIntegrable("denominator does not factor within the supported class");
    }
    Expr var = Expr::sym(v);
    Expr out = Expr::number(0);
    if (!parts.poly_part.is_zero()) {
        NormalBuilder b;
        PolyFrac f = b.build(parts.poly_part);
        int vi = b.table->index_of(var);
        if (vi >= 0 && degree_in(f.d, vi) != 0)
            throw NotIntegrable("unexpected variable in polynomial-part denominator");
        Expr den_cst = expr_of_poly(f.d, *b.table);
        if (vi < 0) {
            out = out + parts.poly_part * var;
        } else {
            UPoly P = to_upoly(f.n, vi);
            Expr acc = Expr::number(0);
            for (std::size_t d = 0; d < P.c.size(); ++d) {
                if (P.c[d].is_zero()) continue;
                Expr coeff = expr_of_poly(P.c[d].n, *b.table) / expr_of_poly(P.c[d].d, *b.table);
                acc = acc + coeff * Expr::pow(var, Expr::number(static_cast<long long>(d + 1))) /
                                Expr::number(static_cast<long long>(d + 1));
            }
            out = out + acc / den_cst;
        }
    }
    for (const auto& t : parts.terms)
        out = out + integrate_fraction_term(t.numerator, t.base, t.power, v);
    return out;
}

template <class F>
void for_each_monomial(const Poly& p, std::map<int, long long>& exps, const F& fn) {
    if (p.is_const()) {
        if (p.k != 0) fn(exps, p.k);
        return;
    }
    for (std::size_t d = 0; d < p.c.size(); ++d) {
        if (p.c[d].is_zero()) continue;
        if (d > 0) exps[p.var] = static_cast<long long>(d);
        for_each_monomial(p.c[d], exps, fn);
        exps.erase(p.var);
    }
}

// trig-polynomial path via complex exponentials; den must be v-free
inline Expr integrate_trig(const NormalBuilder& builder, const PolyFrac& f, const std::string& v) {
    const KernelTable& table = *builder.table;
    int vi = table.index_of(Expr::sym(v));
    if (degree_in(f.d, vi) > 0)
        throw NotIntegrable("rational-trigonometric mixtures are out of class");
    Expr var = Expr::sym(v);
    Expr den_cst = expr_of_poly(f.d, table);

    Expr total = Expr::number(0);
    std::map<int, long long> exps;
    std::vector<Expr> pieces;
    for_each_monomial(f.n, exps, [&](const std::map<int, long long>& m, const Rational& coeff) {
        long long vpow = 0;
        Expr rest = Expr::number(coeff);
        std::vector<std::pair<Expr, long long>> sins, coss;  // atom -> power
        for (auto& [kv, d] : m) {
            const KernelInfo& info = table.kernels[static_cast<std::size_t>(kv)];
            if (kv == vi) {
                vpow = d;
            } else if ((info.type == KernelType::Sin || info.type == KernelType::Cos) &&
                       contains_symbol(info.trig_atom, v)) {
                Expr datom = differentiate1(info.trig_atom, v);
                if (contains_symbol(simplify(datom), v))
                    throw NotIntegrable("trig argument not linear in the variable");
                (info.type == KernelType::Sin ? sins : coss).push_back({info.trig_atom, d});
            } else {
                if (contains_symbol(info.key, v))
                    throw NotIntegrable("unsupported kernel depends on the variable");
                rest = rest * Expr::pow(info.key, Expr::number(d));
            }
        }
        // expand the trig factor over frequency vectors
        struct Entry {
            CRat z;
            std::map<Expr, long long, ExprLess> freq;
        };
        std::vector<Entry> entries{Entry{CRat{Rational(1), Rational(0)}, {}}};
        auto mul_in = [&](const Expr& atom, const CRat& zp, const CRat& zm) {
            std::vector<Entry> next;
            next.reserve(entries.size() * 2);
            for (const auto& en : entries) {
                Entry p = en;
                p.z = p.z * zp;
                p.freq[atom] += 1;
                if (p.freq[atom] == 0) p.freq.erase(atom);
                next.push_back(std::move(p));
                Entry q = en;
                q.z = q.z * zm;
                q.freq[atom] -= 1;
                if (q.freq[atom] == 0) q.freq.erase(atom);
                next.push_back(std::move(q));
            }
            entries = std::move(next);
        };
        for (auto& [atom, d] : sins)
            for (long long r = 0; r < d; ++r)
                mul_in(atom, CRat{Rational(0), Rational(-1, 2)}, CRat{Rational(0), Rational(1, 2)});
        for (auto& [atom, d] : coss)
            for (long long r = 0; r < d; ++r)
                mul_in(atom, CRat{Rational(1, 2), Rational(0)}, CRat{Rational(1, 2), Rational(0)});

        for (const auto& en : entries) {
            ExprList phi_terms;
            for (auto& [atom, n] : en.freq)
                phi_terms.push_back(Expr::number(n) * atom);
            Expr phi = Expr::sum(std::move(phi_terms));
            Expr alpha = simplify(differentiate1(phi, v));
            Expr zc = crat_expr(en.z) * rest;
            if (alpha.is_zero()) {
                Expr phase = phi.is_zero() ? Expr::number(1) : (cos_of(phi) + Expr::i() * sin_of(phi));
                pieces.push_back(zc * phase * Expr::pow(var, Expr::number(vpow + 1)) /
                                 Expr::number(vpow + 1));
            } else {
                // integral of v^k e^{i phi} with phi' = alpha constant in v
                Expr phase = cos_of(phi) + Expr::i() * sin_of(phi);
                Expr ialpha = Expr::i() * alpha;
                Expr acc = Expr::number(0);
                Rational fall = 1;  // k!/(k-t)!
                for (long long t = 0; t <= vpow; ++t) {
                    if (t > 0) fall *= Rational(vpow - t + 1);
                    Expr term = Expr::number((t % 2 == 0 ? 1 : -1) * fall) *
                                Expr::pow(var, Expr::number(vpow - t)) /
                                Expr::pow(ialpha, Expr::number(t + 1));
                    acc = acc + term;
                }
                pieces.push_back(zc * phase * acc);
            }
        }
    });
    total = Expr::sum(std::move(pieces));
    return trig_expand(total / den_cst);
}

}  // namespace detail

inline Expr integrate(const Expr& e, const std::string& v) {
    if (e.is_zero()) return e;
    NormalBuilder builder;
    PolyFrac f = builder.build(e);
    const KernelTable& table = *builder.table;
    int vi = table.index_of(Expr::sym(v));
    if (vi < 0) return e * Expr::sym(v);  // constant in v

    bool has_trig_v = false;
    std::vector<int> roots_v;
    for (std::size_t k = 0; k < table.kernels.size(); ++k) {
        const KernelInfo& info = table.kernels[k];
        bool used = degree_in(f.n, static_cast<int>(k)) > 0 ||
                    degree_in(f.d, static_cast<int>(k)) > 0;
        if (!used) continue;
        switch (info.type) {
            case KernelType::Sin:
            case KernelType::Cos:
                if (contains_symbol(info.trig_atom, v)) has_trig_v = true;
                break;
            case KernelType::Root:
                if (contains_symbol(info.radicand, v)) roots_v.push_back(static_cast<int>(k));
                break;
            case KernelType::Opaque:
                if (contains_symbol(info.key, v))
                    throw NotIntegrable("opaque function of the variable");
                break;
            default: break;
        }
    }

    Expr result;
    if (!roots_v.empty()) {
        if (roots_v.size() > 1 || has_trig_v)
            throw NotIntegrable("more than one radical of the variable");
        const KernelInfo& K = table.kernels[static_cast<std::size_t>(roots_v.front())];
        // substitution t = (a v + b)^{1/q}: requires a linear radicand
        Expr a = differentiate1(K.radicand, v);
        if (contains_symbol(a, v) || a.is_zero())
            throw NotIntegrable("radicand is not linear in the variable");
        Expr b = substitute(K.radicand, {{v, Expr::number(0)}});
        std::string t = "pia_subst_t";
        Expr tv = Expr::sym(t);
        unsigned q = K.root_q;
        Expr v_of_t = (Expr::pow(tv, Expr::number(static_cast<long long>(q))) - b) / a;
        Expr dv_dt =
            Expr::number(static_cast<long long>(q)) *
            Expr::pow(tv, Expr::number(static_cast<long long>(q) - 1)) / a;
        // rewrite e in terms of t; after substitution a*v+b = t^q, so the
        // kernel (a*v+b)^{p/q} becomes t^p
        Expr et = substitute(e, {{v, v_of_t}});
        std::function<Expr(const Expr&)> repl = [&](const Expr& x) -> Expr {
            if (detail::is_root_power(x)) {
                Expr key = detail::root_kernel_key(x);
                Expr rad = simplify(key.base() -
                                    Expr::pow(tv, Expr::number(static_cast<long long>(q))));
                if (rad.is_zero() &&
                    den(x.exponent().rational()).convert_to<unsigned>() == q) {
                    BigInt p = num(x.exponent().rational());
                    return Expr::pow(tv, Expr::number(Rational(p)));
                }
            }
            switch (x.kind()) {
                case Kind::Rational:
                case Kind::ImagUnit:
                case Kind::Symbol: return x;
                case Kind::Call: return Expr::call(x.name(), repl(x.call_arg()), x.call_deriv());
                case Kind::Power: return Expr::pow(repl(x.base()), repl(x.exponent()));
                case Kind::Product:
                case Kind::Sum: {
                    ExprList xs;
                    for (const auto& y : x.args()) xs.push_back(repl(y));
                    return x.kind() == Kind::Product ? Expr::product(std::move(xs))
                                                     : Expr::sum(std::move(xs));
                }
            }
            return x;
        };
        Expr integrand_t = simplify(repl(et) * dv_dt);
        if (contains_symbol(integrand_t, v))
            throw NotIntegrable("radical substitution did not eliminate the variable");
        Expr F_t = detail::integrate_rational(integrand_t, t);
        result = substitute(F_t, {{t, K.key}});
    } else if (has_trig_v) {
        result = detail::integrate_trig(builder, f, v);
    } else {
        result = detail::integrate_rational(e, v);
    }

    // self-check: d(result)/dv - e must vanish exactly
    Expr check = differentiate1(result, v) - e;
    if (is_zero_status(check) != ZeroStatus::Zero)
        throw NotIntegrable("antiderivative failed the exact derivative check");
    return result;
}

}  // namespace pia
