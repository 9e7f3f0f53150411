// Coupled phase-integral pipeline for two ODEs of Schroedinger type:
// eigen-split of the 2x2 matrix, eigenvector frame, the b_m recurrence and
// the per-order extraction of cp_m, c_m, s_m, Y_m under the theory variants.
// The abstract mode produces the b_m formulas with opaque sv_s, Y_a.
#pragma once

#include <array>
#include <chrono>
#include <optional>

#include "pia/calculus.hpp"
#include "pia/jet.hpp"
#include "pia/job.hpp"

namespace pia {

using Vec2 = std::array<Expr, 2>;

namespace detail {

// Test hook for the mutation-sanity suite (see ScalarWeights).
struct CoupledWeights {
    Rational s1_inner{2};   // the 2 in (sv_s + 2(Y_s sv_0 - b_s))
    Rational s5_factor{2};  // i * 2 * sum5
    Rational s6_cross{3, 4};
    Rational s6_half{1, 2};
    Rational overall{1, 2};
    Rational eps_dq{5, 16};
    Rational eps_ddq{1, 4};
};

inline Vec2 vadd(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 vscale(const Expr& k, const Vec2& a) { return {k * a[0], k * a[1]}; }

}  // namespace detail

struct EigenFrame {
    Expr Delta, sqrtDel, Qsq, Q, eps0;
    int signQsq = 1;
    Expr G11, G12, G21, G22;
    Expr s02os01, g;
    Vec2 s0v, spv;
    Expr asqr;
    Expr theta;  // invalid when no phase integral was taken
    Expr intg;   // gauge integrand (cc(s0v), s0v')
    Expr den, coef;
};

struct CoupledSeries {
    std::map<int, Vec2> bv;  // m >= 1 (one extra order is kept internally)
    std::map<int, Vec2> sv;  // sv[0] = s0v
    std::map<int, Expr> cpf, cf, Y;  // m >= 1; Y[0] = 1 implicitly
    double cpu_compute = 0;
};

// ---------------------------------------------------------------------------
// Eigen split.

inline Expr factor_expr(const Expr& e) {
    NormalForm nf = normal_form(e);
    Expr n = detail::factored_poly_expr(nf.frac.n, *nf.table);
    if (nf.frac.d.is_one()) return n;
    return n / detail::factored_poly_expr(nf.frac.d, *nf.table);
}

inline int resolve_sign_qsq(const CoupledProblem& p, const Expr& Qsq) {
    if (!p.automatic) return p.sign_qsq_override;
    if (p.parrepls.empty())
        throw SignUndeterminable("automatic sign of Qsq needs parameter replacements");
    Expr at = substitute(Qsq, p.parrepls);
    try {
        EvalContext<Complex> ctx;
        ctx.var = "";
        ctx.order = 0;
        Complex v = eval_value(expand_definitions(at, p.defs), ctx);
        if (std::abs(v.imag()) > 1e-9 * (1 + std::abs(v.real()))) return 1;  // inconclusive
        return v.real() < 0 ? -1 : 1;
    } catch (const Error&) {
        return 1;  // inconclusive evaluations default to the plus sign
    }
}

inline EigenFrame eigen_split(const CoupledProblem& p,
                              const detail::CoupledWeights& w = {}) {
    EigenFrame f;
    f.G11 = p.R11 - p.af;
    f.G12 = p.R12;
    f.G21 = p.R21;
    f.G22 = p.R22 - p.af;
    const std::string v = "x";

    if (p.automatic) {
        Expr delta = pow(f.G11 - f.G22, 2) + 4 * f.G12 * f.G21;
        if (p.trig_expand_flag) delta = trig_expand(delta);
        f.Delta = factor_expr(simplify(delta));
        if (f.Delta.is_zero())
            throw DomainError("degenerate eigenvalue problem: Delta vanishes identically");
        f.sqrtDel = sqrt_of(f.Delta);
    } else {
        f.Delta = p.delta_override;
        f.sqrtDel = p.sqrt_delta_override;
    }

    Expr qsq = (f.G11 + f.G22 + (p.branch == Branch::Minus ? -f.sqrtDel : f.sqrtDel)) / 2;
    qsq = simplify(qsq);
    if (p.trig_expand_flag) qsq = trig_expand(qsq);
    f.Qsq = qsq;
    f.signQsq = resolve_sign_qsq(p, f.Qsq);
    f.Q = f.signQsq < 0 ? -(Expr::i() * sqrt_of(simplify(-f.Qsq)))
                        : sqrt_of(f.Qsq);

    if (p.eps0_override.valid()) {
        f.eps0 = p.eps0_override;
    } else {
        Expr dq = differentiate(f.Qsq, v);
        Expr e0 = (Expr::number(w.eps_dq) * pow(dq / f.Qsq, 2) -
                   Expr::number(w.eps_ddq) * differentiate(f.Qsq, v, 2) / f.Qsq + p.af) /
                  f.Qsq;
        f.eps0 = together(simplify(e0));
    }
    return f;
}

// ---------------------------------------------------------------------------
// Eigenvector frame.

inline void eigenvector(const CoupledProblem& p, EigenFrame& f) {
    const std::string v = "x";
    if (is_exactly_zero(f.G12))
        throw DomainError("G12 vanishes identically; the eigenvector pipeline needs G12 != 0");
    Expr ratio = (f.Qsq - f.G11) / f.G12;
    if (p.trig_expand_flag) ratio = trig_expand(ratio);
    f.s02os01 = simplify(ratio);
    f.g = p.g_factor;
    Expr s01 = f.g;
    Expr s02 = f.g * f.s02os01;

    Expr asqr = s01 * cc(s01) + s02 * cc(s02);
    if (p.trig_expand_flag) asqr = trig_expand(asqr);
    if (p.normalize) {
        Expr ms0v = sqrt_of(simplify(asqr));
        s01 = s01 / ms0v;
        s02 = s02 / ms0v;
        asqr = Expr::number(1);
        Expr intg = cc(s01) * differentiate(s01, v) + cc(s02) * differentiate(s02, v);
        if (p.trig_expand_flag) intg = trig_expand(intg);
        intg = simplify(intg);
        f.intg = intg;
        if (!intg.is_zero() && p.integrate_theta) {
            Expr theta = simplify(Expr::i() * integrate(intg, v));
            f.theta = theta;
            Expr phasf = cos_of(theta) + Expr::i() * sin_of(theta);
            s01 = s01 * phasf;
            s02 = s02 * phasf;
        }
    }
    s01 = simplify(s01);
    s02 = simplify(s02);
    f.s0v = {s01, s02};
    f.spv = {-cc(s02), cc(s01)};
    f.asqr = asqr;

    Expr s01ms = s01 * cc(s01), s02ms = s02 * cc(s02);
    Expr den = s01ms * (f.G22 - f.Qsq) + s02ms * (f.G11 - f.Qsq) -
               cc(s01) * s02 * f.G12 - s01 * cc(s02) * f.G21;
    if (p.trig_expand_flag) den = trig_expand(den);
    den = simplify(den);
    if (den.is_zero())
        throw ZeroDenominator("eigenvector denominator D vanishes identically");
    try {
        f.den = apart(den, v);
    } catch (const FactorizationOutOfScope& oos) {
        f.den = oos.together_form;
    }
    f.coef = -(2 * f.Qsq / f.den);
}

// ---------------------------------------------------------------------------
// The b_m recurrence (shared by the full and the abstract pipelines).

struct RecurrenceRefs {
    std::function<Expr(int)> Y;    // Y_a
    std::function<Vec2(int)> sv;   // s_s
    std::function<Vec2(int)> bv;   // b_s  (s < m)
    Expr Qm1, Qm2, dQ, eps0;
    std::string var = "x";
};

inline Vec2 b_recurrence_step(int m, const RecurrenceRefs& r,
                              const detail::CoupledWeights& w = {}) {
    using detail::vadd;
    using detail::vscale;
    const std::string& x = r.var;
    auto dv = [&](const Vec2& u, int k) -> Vec2 {
        return {differentiate(u[0], x, k), differentiate(u[1], x, k)};
    };
    Vec2 zero{Expr::number(0), Expr::number(0)};
    Expr two_inner = Expr::number(w.s1_inner);

    Vec2 sum1 = zero, sum2 = zero, sum5 = zero, sum6 = zero;
    Expr sum3 = Expr::number(0), sum4 = Expr::number(0);

    for (int a = 0; a <= m - 1; ++a)
        for (int b = 0; b <= m - 1; ++b)
            for (int s = 1; s <= m - 1; ++s)
                if (a + b + s == m) {
                    Expr yab = r.Y(a) * r.Y(b);
                    Vec2 inner = vadd(r.sv(s),
                                      vscale(two_inner,
                                             vadd(vscale(r.Y(s), r.sv(0)),
                                                  vscale(Expr::number(-1), r.bv(s)))));
                    sum1 = vadd(sum1, vscale(yab, inner));
                }
    for (int a = 0; a <= m - 1; ++a)
        for (int b = 0; b <= m - 1; ++b)
            for (int g = 0; g <= m - 1; ++g)
                for (int d = 0; d <= m - 1; ++d)
                    for (int s = 1; s <= m - 1; ++s)
                        if (a + b + g + d + s == m)
                            sum2 = vadd(sum2, vscale(r.Y(a) * r.Y(b) * r.Y(g) * r.Y(d), r.sv(s)));
    {
        ExprList t3, t4;
        for (int a = 1; a <= m - 1; ++a)
            for (int b = 1; b <= m - 1; ++b)
                if (a + b == m) t3.push_back(r.Y(a) * r.Y(b));
        for (int a = 0; a <= m - 1; ++a)
            for (int b = 0; b <= m - 1; ++b)
                for (int g = 0; g <= m - 1; ++g)
                    for (int d = 0; d <= m - 1; ++d)
                        if (a + b + g + d == m) t4.push_back(r.Y(a) * r.Y(b) * r.Y(g) * r.Y(d));
        sum3 = Expr::sum(std::move(t3));
        sum4 = Expr::sum(std::move(t4));
    }
    for (int a = 0; a <= m - 1; ++a)
        for (int b = 0; b <= m - 1; ++b)
            for (int g = 0; g <= m - 1; ++g)
                for (int s = 0; s <= m - 1; ++s)
                    if (a + b + g + s == m - 1)
                        sum5 = vadd(sum5, vscale(r.Y(a) * r.Y(b) * r.Y(g) * r.Qm1, dv(r.sv(s), 1)));
    for (int a = 0; a <= m - 2; ++a)
        for (int b = 0; b <= m - 2; ++b)
            for (int s = 0; s <= m - 2; ++s)
                if (a + b + s == m - 2) {
                    Vec2 svs = r.sv(s);
                    Vec2 dsv1 = dv(svs, 1), dsv2 = dv(svs, 2);
                    Expr ya = r.Y(a), yb = r.Y(b);
                    Expr dyb1 = differentiate(yb, x), dyb2 = differentiate(yb, x, 2);
                    Expr dya1 = differentiate(ya, x);
                    Vec2 part1 = vadd(vscale(r.Qm2, vadd(dsv2, vscale(-(r.Qm1 * r.dQ), dsv1))),
                                      vscale(r.eps0, svs));
                    Vec2 inner = vadd(vscale(yb, part1),
                                      vadd(vscale(-(r.Qm2 * dyb1), dsv1),
                                           vscale(-(Expr::number(w.s6_half) * r.Qm2 *
                                                    (dyb2 - r.Qm1 * r.dQ * dyb1)),
                                                  svs)));
                    Vec2 term = vadd(vscale(ya, inner),
                                     vscale(Expr::number(w.s6_cross) * r.Qm2 * dya1 * dyb1, svs));
                    sum6 = vadd(sum6, term);
                }

    Vec2 s34 = vscale(sum3 - sum4, r.sv(0));
    Vec2 s5 = vscale(Expr::i() * Expr::number(w.s5_factor), sum5);
    Vec2 total = vadd(vadd(vadd(sum1, vscale(Expr::number(-1), sum2)), s34), vadd(s5, sum6));
    return vscale(Expr::number(w.overall), total);
}

// ---------------------------------------------------------------------------
// Per-order extraction: cp_m, c_m, s_m, Y_m.

struct ExtractedOrder {
    Expr cpf, cf, Y;
    Vec2 sv;
};

inline ExtractedOrder extract_order(int m1, const CoupledProblem& p, const EigenFrame& f,
                                    const CoupledSeries& series, const Expr& Qm2) {
    const std::string x = "x";
    ExtractedOrder out;
    const Vec2& b = series.bv.at(m1);
    Expr cpf = f.coef * (-(f.s0v[1] * b[0]) + f.s0v[0] * b[1]);
    if (p.trig_expand_flag) cpf = trig_expand(cpf);
    out.cpf = cpf;

    Expr intgnt = Expr::number(0);
    if (p.theory != TheoryVariant::Simplified) {
        Expr ds01 = differentiate(f.s0v[0], x), ds02 = differentiate(f.s0v[1], x);
        Expr dot = cc(ds01) * f.spv[0] + cc(ds02) * f.spv[1];
        if (m1 % 2 == 1 && p.theory == TheoryVariant::Wronskian)
            intgnt = 2 * re(cpf * dot);
        else
            intgnt = Expr::i() * 2 * im(cpf * dot);
        if (p.trig_expand_flag) intgnt = trig_expand(intgnt);
        for (int alpha = 1; alpha <= m1 - 1; ++alpha) {
            Expr sgn = (alpha % 2 == 1 && p.theory == TheoryVariant::Wronskian)
                           ? Expr::number(-1)
                           : Expr::number(1);
            const Vec2& sa = series.sv.at(alpha);
            const Vec2& sm = series.sv.at(m1 - alpha);
            Expr term = cc(sa[0]) * differentiate(sm[0], x) + cc(sa[1]) * differentiate(sm[1], x);
            intgnt = intgnt - sgn * term;
        }
        if (p.trig_expand_flag) intgnt = trig_expand(intgnt);
        intgnt = simplify(intgnt);
    }

    if (p.theory == TheoryVariant::Simplified) {
        out.cf = Expr::number(0);
    } else {
        try {
            out.cf = integrate(intgnt, x);
        } catch (const NotIntegrable& e) {
            throw NotIntegrable(std::string(e.what()) +
                                " (c_" + std::to_string(m1) +
                                " integral; rerun with theory = s)");
        }
    }

    out.sv = detail::vadd(detail::vscale(out.cpf, f.spv), detail::vscale(out.cf, f.s0v));
    if (p.trig_expand_flag) out.sv = {trig_expand(out.sv[0]), trig_expand(out.sv[1])};

    if (p.hermitian == Hermiticity::Hermitian) {
        out.Y = (cc(f.s0v[0]) * b[0] + cc(f.s0v[1]) * b[1]) / f.asqr;
    } else {
        out.Y = (Qm2 * out.cpf * f.G12 * f.asqr / (2 * f.s0v[0]) + b[0]) / f.s0v[0];
    }
    if (p.trig_expand_flag) out.Y = trig_expand(out.Y);
    return out;
}

struct CoupledResult {
    EigenFrame frame;
    CoupledSeries series;
};

inline CoupledResult coupled_corrections(const CoupledProblem& p,
                                         const detail::CoupledWeights& w = {}) {
    auto t0 = std::chrono::steady_clock::now();
    const std::string x = "x";
    CoupledResult out;
    out.frame = eigen_split(p, w);
    eigenvector(p, out.frame);
    EigenFrame& f = out.frame;
    CoupledSeries& s = out.series;

    Expr Qm1 = 1 / f.Q;
    Expr Qm2 = Qm1 * Qm1;
    Expr dQ = differentiate(f.Q, x);

    s.sv[0] = f.s0v;
    s.bv[1] = {Expr::i() * Qm1 * differentiate(f.s0v[0], x),
               Expr::i() * Qm1 * differentiate(f.s0v[1], x)};

    RecurrenceRefs refs;
    refs.var = x;
    refs.Qm1 = Qm1;
    refs.Qm2 = Qm2;
    refs.dQ = dQ;
    refs.eps0 = f.eps0;
    refs.Y = [&s](int a) { return a == 0 ? Expr::number(1) : s.Y.at(a); };
    refs.sv = [&s](int m) { return s.sv.at(m); };
    refs.bv = [&s](int m) { return s.bv.at(m); };

    for (int m = 2; m <= p.mmax + 1; ++m) {
        int m1 = m - 1;
        ExtractedOrder ord = extract_order(m1, p, f, s, Qm2);
        s.cpf[m1] = ord.cpf;
        s.cf[m1] = ord.cf;
        s.sv[m1] = ord.sv;
        s.Y[m1] = ord.Y;
        if (m < p.mmax + 1) s.bv[m] = b_recurrence_step(m, refs, w);
    }
    s.cpu_compute = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

// ---------------------------------------------------------------------------
// Abstract b_m run: opaque sv_s(x), Y_a(x), Q(x), eps0(x).

struct AbstractSeries {
    std::map<int, Expr> bv;  // generic component of the vector b_m
    double cpu_compute = 0;
    std::string var;
};

inline AbstractSeries abstract_bvm(const AbstractProblem& p,
                                   const detail::CoupledWeights& w = {}) {
    auto t0 = std::chrono::steady_clock::now();
    AbstractSeries out;
    std::string v = p.var_name();
    out.var = v;
    Expr var = Expr::sym(v);

    Expr Q = p.variable == VariableChoice::Zeta ? Expr::number(1) : Expr::call("Q", var);
    Expr Qm1 = 1 / Q;

    std::map<int, Expr> Y;
    std::map<int, Vec2> sv;
    std::map<int, Vec2> bv;
    Y[0] = Expr::number(1);
    if (p.y1_zero) Y[1] = Expr::number(0);
    for (int a = 1; a <= p.mmax; ++a)
        if (!Y.count(a)) Y[a] = Expr::call("Y" + std::to_string(a), var);
    for (int m = 0; m <= p.mmax; ++m) {
        Expr svm = Expr::call("sv" + std::to_string(m), var);
        sv[m] = {svm, svm};
    }
    bv[1] = {Expr::i() * Qm1 * differentiate(sv[0][0], v),
             Expr::i() * Qm1 * differentiate(sv[0][1], v)};

    RecurrenceRefs refs;
    refs.var = v;
    refs.Qm1 = Qm1;
    refs.Qm2 = Qm1 * Qm1;
    refs.dQ = differentiate(Q, v);
    refs.eps0 = Expr::call("eps0", var);
    refs.Y = [&Y](int a) { return Y.at(a); };
    refs.sv = [&sv](int m) { return sv.at(m); };
    refs.bv = [&bv](int m) { return bv.at(m); };

    for (int m = 2; m <= p.mmax + 1; ++m) bv[m] = b_recurrence_step(m, refs, w);

    for (int m = 1; m <= p.mmax; ++m) out.bv[m] = bv[m][0];
    out.cpu_compute = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace pia
