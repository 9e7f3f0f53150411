// Rational-trig normal form.
//
// An expression is mapped to a fraction of multivariate polynomials over
// "kernels": symbols, the imaginary unit, sin/cos of canonical atoms, q-th
// roots, and opaque applications (user functions, exp, log, symbolic powers).
// Side relations are applied as exponent reductions: i^2 -> -1,
// sin(a)^2 -> 1 - cos(a)^2, (u^{1/q})^q -> u. Numerator vanishing is a
// decidable zero test inside this class; kernels without complete relations
// mark the form non-rigorous.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pia/expr.hpp"
#include "pia/poly.hpp"

namespace pia {

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return Expr::cmp(a, b) < 0; }
};

enum class KernelType { Imag, Symbol, Cos, Sin, Root, Opaque };

struct KernelInfo {
    Expr key;        // canonical expression the kernel stands for
    KernelType type = KernelType::Symbol;
    Expr trig_atom;  // Cos/Sin
    Expr radicand;   // Root
    unsigned root_q = 0;
    bool complete = true;
    int depth = 0;
};

struct KernelRelation {
    unsigned modulus = 0;  // exponent bound q: K^q rewrites to rhs
    PolyFrac rhs;
};

class KernelTable {
  public:
    std::vector<KernelInfo> kernels;
    std::vector<std::optional<KernelRelation>> relations;

    int index_of(const Expr& key) const {
        auto it = index_.find(key);
        return it == index_.end() ? -1 : it->second;
    }
    void finalize_indices() {
        index_.clear();
        for (std::size_t k = 0; k < kernels.size(); ++k)
            index_[kernels[k].key] = static_cast<int>(k);
        relations.assign(kernels.size(), std::nullopt);
    }
    const Expr& key_of(int v) const { return kernels[static_cast<std::size_t>(v)].key; }

  private:
    std::map<Expr, int, ExprLess> index_;
};

namespace detail {

// leading-sign test used to orient trig atoms deterministically
inline bool leading_negative(const Expr& e) {
    switch (e.kind()) {
        case Kind::Rational: return e.rational() < 0;
        case Kind::Product: return e.args().front().is_rational() && e.args().front().rational() < 0;
        case Kind::Sum: return leading_negative(e.args().front());
        default: return false;
    }
}

struct TrigTerm {
    BigInt n;   // integer multiple
    Expr atom;  // canonical atom, sign-oriented
};

// Splits a trig argument into an integer combination of atoms.
// Returns an empty list when the argument should be kept atomic.
inline std::vector<TrigTerm> trig_terms(const Expr& arg) {
    std::vector<TrigTerm> out;
    ExprList terms = arg.kind() == Kind::Sum ? arg.args() : ExprList{arg};
    for (const auto& t : terms) {
        auto [c, rest] = coeff_rest(t);
        BigInt p = num(c);
        BigInt q = den(c);
        Expr atom;
        if (rest.is_one())
            atom = Expr::number(Rational(1, q));
        else if (q == 1)
            atom = rest;
        else
            atom = Expr::product({Expr::number(Rational(1, q)), rest});
        if (leading_negative(atom)) {
            atom = -atom;
            p = -p;
        }
        if (abs(p) > 64) return {};  // keep the whole argument atomic
        out.push_back({p, atom});
    }
    // merge equal atoms (can appear after sign orientation)
    std::sort(out.begin(), out.end(),
              [](const TrigTerm& a, const TrigTerm& b) { return Expr::cmp(a.atom, b.atom) < 0; });
    std::vector<TrigTerm> merged;
    for (auto& t : out) {
        if (!merged.empty() && merged.back().atom == t.atom)
            merged.back().n += t.n;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const TrigTerm& t) { return t.n == 0; });
    return merged;
}

inline bool is_root_power(const Expr& e) {
    return e.kind() == Kind::Power && e.exponent().is_rational() && !e.exponent().is_integer();
}

inline Expr root_kernel_key(const Expr& power) {
    unsigned q = den(power.exponent().rational()).convert_to<unsigned>();
    return Expr::pow(power.base(), Expr::number(Rational(1, q)));
}

}  // namespace detail

class NormalBuilder {
  public:
    std::shared_ptr<KernelTable> table = std::make_shared<KernelTable>();
    bool rigorous = true;

    PolyFrac build(const Expr& e) {
        std::map<Expr, KernelInfo, ExprLess> found;
        scan(e, found);
        order(found);
        compute_relations();
        PolyFrac f = convert(e);
        f = reduce_full(f);
        f = rationalize(f);
        for (const auto& k : table->kernels)
            if (!k.complete) rigorous = false;
        return f;
    }

    // conversion for expressions whose kernels are already registered
    PolyFrac convert_more(const Expr& e) { return rationalize(reduce_full(convert(e))); }

  private:
    std::vector<std::optional<KernelRelation>>& rels() { return table->relations; }

    void note_kernel(std::map<Expr, KernelInfo, ExprLess>& found, KernelInfo info) {
        auto it = found.find(info.key);
        if (it == found.end()) found.emplace(info.key, std::move(info));
    }

    void scan(const Expr& e, std::map<Expr, KernelInfo, ExprLess>& found) {
        switch (e.kind()) {
            case Kind::Rational: return;
            case Kind::ImagUnit: {
                KernelInfo k;
                k.key = e;
                k.type = KernelType::Imag;
                note_kernel(found, std::move(k));
                return;
            }
            case Kind::Symbol: {
                KernelInfo k;
                k.key = e;
                k.type = KernelType::Symbol;
                note_kernel(found, std::move(k));
                return;
            }
            case Kind::Sum:
            case Kind::Product:
                for (const auto& a : e.args()) scan(a, found);
                return;
            case Kind::Power: {
                if (e.exponent().is_rational()) {
                    if (e.exponent().is_integer()) {
                        scan(e.base(), found);
                        return;
                    }
                    Expr key = detail::root_kernel_key(e);
                    KernelInfo k;
                    k.key = key;
                    k.type = KernelType::Root;
                    k.radicand = key.base();
                    k.root_q = den(e.exponent().rational()).convert_to<unsigned>();
                    note_kernel(found, std::move(k));
                    scan(key.base(), found);
                    return;
                }
                KernelInfo k;  // symbolic exponent: opaque
                k.key = e;
                k.type = KernelType::Opaque;
                k.complete = false;
                note_kernel(found, std::move(k));
                return;
            }
            case Kind::Call: {
                const std::string& fn = e.name();
                if ((fn == "sin" || fn == "cos" || fn == "tan") && e.call_deriv() == 0) {
                    auto terms = detail::trig_terms(e.call_arg());
                    std::vector<Expr> atoms;
                    if (terms.empty())
                        atoms.push_back(e.call_arg());  // atomic fallback
                    else
                        for (auto& t : terms) atoms.push_back(t.atom);
                    for (const auto& a : atoms) {
                        for (bool issin : {false, true}) {
                            KernelInfo k;
                            k.key = Expr::call(issin ? "sin" : "cos", a);
                            k.type = issin ? KernelType::Sin : KernelType::Cos;
                            k.trig_atom = a;
                            note_kernel(found, std::move(k));
                        }
                        scan(a, found);
                    }
                    return;
                }
                KernelInfo k;  // exp, log, user functions, builtin derivatives
                k.key = e;
                k.type = KernelType::Opaque;
                k.complete = !(fn == "exp" || fn == "log");
                note_kernel(found, std::move(k));
                return;
            }
        }
    }

    static void kernel_keys_in(const Expr& e, const std::map<Expr, int, ExprLess>& idx,
                               std::vector<Expr>& out) {
        if (idx.count(e)) {
            out.push_back(e);
            // a registered key can still contain smaller kernels (root radicand)
        }
        for (const auto& a : e.args()) kernel_keys_in(a, idx, out);
    }

    void order(std::map<Expr, KernelInfo, ExprLess>& found) {
        std::map<Expr, int, ExprLess> keyset;
        for (auto& [k, info] : found) keyset[k] = 1;
        // depth by containment
        std::map<Expr, int, ExprLess> depth;
        std::function<int(const Expr&)> depth_of = [&](const Expr& key) -> int {
            auto it = depth.find(key);
            if (it != depth.end()) return it->second;
            depth[key] = 0;  // provisional (cycles cannot occur structurally)
            const KernelInfo& info = found.at(key);
            int d = 0;
            auto probe = [&](const Expr& sub) {
                std::vector<Expr> inner;
                kernel_keys_in(sub, keyset, inner);
                for (const auto& kk : inner)
                    if (!(kk == key)) d = std::max(d, 1 + depth_of(kk));
            };
            switch (info.type) {
                case KernelType::Root: probe(info.radicand); d = std::max(d, 1); break;
                case KernelType::Cos:
                case KernelType::Sin: probe(info.trig_atom); d = std::max(d, 1); break;
                default: break;
            }
            depth[key] = d;
            return d;
        };
        for (auto& [k, info] : found) info.depth = depth_of(k);

        std::vector<KernelInfo> ks;
        ks.reserve(found.size());
        for (auto& [k, info] : found) ks.push_back(info);
        auto type_rank = [](KernelType t) {
            switch (t) {
                case KernelType::Imag: return 0;
                case KernelType::Symbol: return 1;
                case KernelType::Cos: return 2;
                case KernelType::Sin: return 3;
                case KernelType::Root: return 4;
                case KernelType::Opaque: return 5;
            }
            return 6;
        };
        std::sort(ks.begin(), ks.end(), [&](const KernelInfo& a, const KernelInfo& b) {
            if (a.depth != b.depth) return a.depth < b.depth;
            int ra = type_rank(a.type), rb = type_rank(b.type);
            if (ra != rb) return ra < rb;
            return Expr::cmp(a.key, b.key) < 0;
        });
        table->kernels = std::move(ks);
        table->finalize_indices();
    }

    void compute_relations() {
        for (std::size_t v = 0; v < table->kernels.size(); ++v) {
            KernelInfo& k = table->kernels[v];
            switch (k.type) {
                case KernelType::Imag:
                    rels()[v] = KernelRelation{2, PolyFrac(Rational(-1))};
                    break;
                case KernelType::Sin: {
                    int cosv = table->index_of(Expr::call("cos", k.trig_atom));
                    PolyFrac c(Poly::variable(cosv), Poly(1));
                    rels()[v] = KernelRelation{2, PolyFrac(Rational(1)) - c * c};
                    break;
                }
                case KernelType::Root: {
                    PolyFrac rad = reduce_full(convert(k.radicand));
                    // zero-divisor risk: a perfect-square radicand
                    auto ns = poly_sqrt(rad.n);
                    auto ds = poly_sqrt(rad.d);
                    if (k.root_q % 2 == 0 && ns && ds) k.complete = false;
                    rels()[v] = KernelRelation{k.root_q, std::move(rad)};
                    break;
                }
                default: break;
            }
        }
    }

    PolyFrac kernel_frac(const Expr& key) {
        int v = table->index_of(key);
        if (v < 0) throw DomainError("internal: unregistered kernel");
        return PolyFrac(Poly::variable(v), Poly(1));
    }

    // sin/cos of n*atom via the angle-multiple recursion
    std::pair<PolyFrac, PolyFrac> sincos_multiple(long long n, const Expr& atom) {
        PolyFrac s = kernel_frac(Expr::call("sin", atom));
        PolyFrac c = kernel_frac(Expr::call("cos", atom));
        if (n < 0) {
            auto [sp, cp] = sincos_multiple(-n, atom);
            return {-sp, cp};
        }
        if (n == 0) return {PolyFrac(Rational(0)), PolyFrac(Rational(1))};
        PolyFrac sn = s, cn = c;
        for (long long k = 1; k < n; ++k) {
            PolyFrac s2 = sn * c + cn * s;
            PolyFrac c2 = cn * c - sn * s;
            sn = std::move(s2);
            cn = std::move(c2);
        }
        return {sn, cn};
    }

    std::pair<PolyFrac, PolyFrac> sincos_of_terms(const std::vector<detail::TrigTerm>& terms,
                                                  std::size_t from) {
        auto [s, c] = sincos_multiple(terms[from].n.convert_to<long long>(), terms[from].atom);
        if (from + 1 == terms.size()) return {s, c};
        auto [s2, c2] = sincos_of_terms(terms, from + 1);
        return {s * c2 + c * s2, c * c2 - s * s2};
    }

    PolyFrac convert(const Expr& e) {
        switch (e.kind()) {
            case Kind::Rational: return PolyFrac(e.rational());
            case Kind::ImagUnit:
            case Kind::Symbol: return kernel_frac(e);
            case Kind::Sum: {
                PolyFrac out(Rational(0));
                for (const auto& t : e.args()) out = out + convert(t);
                return out;
            }
            case Kind::Product: {
                PolyFrac out(Rational(1));
                for (const auto& f : e.args()) out = out * convert(f);
                return out;
            }
            case Kind::Power: {
                if (e.exponent().is_rational()) {
                    const Rational& er = e.exponent().rational();
                    if (pia::is_integer(er))
                        return pow_frac(convert(e.base()), num(er).convert_to<long long>());
                    Expr key = detail::root_kernel_key(e);
                    return pow_frac(kernel_frac(key), num(er).convert_to<long long>());
                }
                return kernel_frac(e);
            }
            case Kind::Call: {
                const std::string& fn = e.name();
                if ((fn == "sin" || fn == "cos" || fn == "tan") && e.call_deriv() == 0) {
                    auto terms = detail::trig_terms(e.call_arg());
                    PolyFrac s, c;
                    if (terms.empty()) {
                        s = kernel_frac(Expr::call("sin", e.call_arg()));
                        c = kernel_frac(Expr::call("cos", e.call_arg()));
                    } else {
                        std::tie(s, c) = sincos_of_terms(terms, 0);
                    }
                    if (fn == "sin") return s;
                    if (fn == "cos") return c;
                    return s / c;
                }
                return kernel_frac(e);
            }
        }
        throw DomainError("internal: unreachable node kind");
    }

  public:
    // applies the side relations so every related kernel has exponent < q
    PolyFrac reduce(const Poly& p) {
        if (p.is_const()) return PolyFrac(p.k);
        int v = p.var;
        std::vector<PolyFrac> rc;
        rc.reserve(p.c.size());
        for (const auto& x : p.c) rc.push_back(reduce(x));
        const auto& rel = rels()[static_cast<std::size_t>(v)];
        PolyFrac K(Poly::variable(v), Poly(1));
        PolyFrac out(Rational(0));
        if (!rel) {
            for (std::size_t d = rc.size(); d-- > 0;) out = out * K + rc[d];
            return out;
        }
        unsigned q = rel->modulus;
        std::vector<PolyFrac> bucket(q, PolyFrac(Rational(0)));
        for (std::size_t d = 0; d < rc.size(); ++d) {
            unsigned r = static_cast<unsigned>(d % q);
            unsigned a = static_cast<unsigned>(d / q);
            PolyFrac term = rc[d];
            for (unsigned t = 0; t < a; ++t) term = term * rel->rhs;
            bucket[r] = bucket[r] + term;
        }
        PolyFrac kp(Rational(1));
        for (unsigned r = 0; r < q; ++r) {
            out = out + bucket[r] * kp;
            if (r + 1 < q) kp = kp * K;
        }
        return out;
    }

    PolyFrac reduce(const PolyFrac& f) {
        PolyFrac n = reduce(f.n), d = reduce(f.d);
        if (d.is_zero()) throw ZeroDenominator("denominator vanishes under side relations");
        return n / d;
    }

    bool is_reduced(const Poly& p) {
        if (p.is_const()) return true;
        const auto& rel = rels()[static_cast<std::size_t>(p.var)];
        if (rel && p.c.size() > rel->modulus) return false;
        for (const auto& c : p.c)
            if (!is_reduced(c)) return false;
        return true;
    }

    // reduction passes can reintroduce excess powers in lower kernels
    // (nested radicals, relation right-hand sides); iterate to a fixpoint
    PolyFrac reduce_full(PolyFrac f) {
        for (int pass = 0; pass < 64; ++pass) {
            if (is_reduced(f.n) && is_reduced(f.d)) return f;
            f = reduce(f);
        }
        throw DomainError("internal: side-relation reduction did not converge");
    }

    // coefficient of v^d in p (v need not be the main variable)
    static Poly coeff_any(const Poly& p, int v, int d) {
        if (p.is_const() || p.var < v) return d == 0 ? p : Poly(0);
        if (p.var == v) return d <= p.degree() ? p.c[static_cast<std::size_t>(d)] : Poly(0);
        std::vector<Poly> cs;
        cs.reserve(p.c.size());
        for (const auto& x : p.c) cs.push_back(coeff_any(x, v, d));
        return Poly::make(p.var, std::move(cs));
    }

    // Clears the imaginary unit, square roots and sin kernels out of the
    // denominator (every quadratic-relation kernel). Afterwards the
    // representation is linear in each such kernel over a cleared
    // denominator, which makes it unique up to the sign convention.
    PolyFrac rationalize(PolyFrac f) {
        for (;;) {
            f = reduce_full(f);
            int pick = -1;
            for (int v = static_cast<int>(table->kernels.size()) - 1; v >= 0; --v) {
                const KernelInfo& k = table->kernels[static_cast<std::size_t>(v)];
                bool clearable = k.type == KernelType::Imag || k.type == KernelType::Sin ||
                                 (k.type == KernelType::Root && k.root_q == 2);
                if (clearable && degree_in(f.d, v) > 0) {
                    pick = v;
                    break;
                }
            }
            if (pick < 0) return f;
            const auto& rel = rels()[static_cast<std::size_t>(pick)];
            Poly A = coeff_any(f.d, pick, 0);
            Poly B = coeff_any(f.d, pick, 1);
            // den = A + B*K ; multiply through by (A - B*K), K^2 -> rhs
            PolyFrac newden(sub(mul(mul(A, A), rel->rhs.d), mul(mul(B, B), rel->rhs.n)),
                            rel->rhs.d);
            Poly K = shift_var(Poly(1), pick, 1);
            PolyFrac newnum(mul(f.n, sub(A, mul(B, K))), Poly(1));
            f = reduce_full(reduce_full(newnum) / reduce_full(newden));
        }
    }
};

struct NormalForm {
    PolyFrac frac;
    std::shared_ptr<KernelTable> table;
    bool rigorous = true;

    bool is_zero() const { return frac.is_zero(); }
};

namespace detail {

inline Expr expr_of_poly(const Poly& p, const KernelTable& t) {
    if (p.is_const()) return Expr::number(p.k);
    Expr K = t.key_of(p.var);
    ExprList terms;
    for (std::size_t d = 0; d < p.c.size(); ++d) {
        if (p.c[d].is_zero()) continue;
        Expr coeff = expr_of_poly(p.c[d], t);
        if (d == 0)
            terms.push_back(coeff);
        else
            terms.push_back(coeff * Expr::pow(K, Expr::number(static_cast<long long>(d))));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace detail

inline Expr to_expr(const NormalForm& nf) {
    Expr n = detail::expr_of_poly(nf.frac.n, *nf.table);
    if (nf.frac.d.is_one()) return n;
    Expr d = detail::expr_of_poly(nf.frac.d, *nf.table);
    return n / d;
}

inline NormalForm normal_form(const Expr& e) {
    NormalBuilder b;
    NormalForm nf;
    nf.frac = b.build(e);
    nf.table = b.table;
    nf.rigorous = b.rigorous;
    return nf;
}

}  // namespace pia
