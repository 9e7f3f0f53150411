// Numeric re-implementation of both recurrences in jet arithmetic, the
// theta / c_m quadrature, and the symbolic-vs-numeric comparison report.
#pragma once

#include <functional>
#include <optional>
#include <sstream>

#include "pia/coupled.hpp"
#include "pia/jet.hpp"
#include "pia/scalar.hpp"

namespace pia {

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7/K15) quadrature on a real interval.

namespace detail {

template <class C>
std::pair<C, double> gk15(const std::function<C(double)>& f, double a, double b) {
    static const double xs[8] = {0.0,
                                 0.2077849550078985,
                                 0.4058451513773972,
                                 0.5860872354676911,
                                 0.7415311855993945,
                                 0.8648644233597691,
                                 0.9491079123427585,
                                 0.9914553711208126};
    static const double wk[8] = {0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
                                 0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
                                 0.0630920926299786, 0.0229353220105292};
    static const double wg[4] = {0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                                 0.1294849661688697};
    double h = (b - a) / 2, mid = (a + b) / 2;
    C fk(0), fg(0);
    C fm = f(mid);
    fk += C(wk[0]) * fm;
    fg += C(wg[0]) * fm;
    for (int j = 1; j < 8; ++j) {
        C f1 = f(mid - h * xs[j]), f2 = f(mid + h * xs[j]);
        fk += C(wk[j]) * (f1 + f2);
        if (j % 2 == 0) fg += C(wg[j / 2]) * (f1 + f2);
    }
    C ik = fk * C(h), ig = fg * C(h);
    return {ik, mag(ik - ig)};
}

template <class C>
C adaptive_quad(const std::function<C(double)>& f, double a, double b, double tol,
                int depth = 0) {
    auto [v, err] = gk15<C>(f, a, b);
    if (err <= tol || depth >= 24) return v;
    double mid = (a + b) / 2;
    return adaptive_quad<C>(f, a, mid, tol / 2, depth + 1) +
           adaptive_quad<C>(f, mid, b, tol / 2, depth + 1);
}

// antiderivative jet with prescribed value at the expansion point
template <class C>
Jet<C> antiderivative(const Jet<C>& u, const C& value_at_x0) {
    Jet<C> F(u.a.size() + 1);
    F.a[0] = value_at_x0;
    for (std::size_t k = 0; k < u.a.size(); ++k)
        F.a[k + 1] = u.a[k] / C(static_cast<double>(k + 1));
    return F;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar jet recurrence.

template <class C>
struct ScalarJetResult {
    Jet<C> Qsq, eps0;
    std::map<int, Jet<C>> Y;
};

template <class C>
ScalarJetResult<C> scalar_corrections_jet(const ScalarProblem& p, const EvalContext<C>& ctx) {
    ScalarJetResult<C> out;
    const int K = ctx.order;
    Jet<C> one = Jet<C>::constant(C(1), K);
    Jet<C> qsqor1 = one, ep0 = one;
    if (p.input_mode == InputMode::Explicit) {
        Jet<C> R = jet_eval(expand_definitions(p.R, p.defs), ctx);
        Jet<C> af = jet_eval(expand_definitions(p.af, p.defs), ctx);
        Jet<C> qsq = R - af;
        Jet<C> dq = qsq.derivative();
        Jet<C> w1 = jet_div(dq, qsq, ctx.floor);
        C c516 = scalar_from_rational<C>(Rational(5, 16));
        C c14 = scalar_from_rational<C>(Rational(1, 4));
        ep0 = jet_div(Jet<C>::constant(c516, K) * w1 * w1 -
                          jet_div(Jet<C>::constant(c14, K) * dq.derivative(), qsq, ctx.floor) + af,
                      qsq, ctx.floor);
        qsqor1 = qsq;
        out.Qsq = qsq;
    } else {
        // general mode needs eps0 (and Qsqr in x mode) supplied as definitions
        Expr e0 = expand_definitions(Expr::call("eps0", Expr::sym(ctx.var)), p.defs);
        ep0 = jet_eval(e0, ctx);
        if (p.variable == VariableChoice::X) {
            Expr qs = expand_definitions(Expr::call("Qsqr", Expr::sym(ctx.var)), p.defs);
            qsqor1 = jet_eval(qs, ctx);
        }
        out.Qsq = qsqor1;
    }
    out.eps0 = ep0;
    Jet<C> qm2 = jet_div(one, qsqor1, ctx.floor);
    Jet<C> dqsqor1 = qsqor1.derivative();
    C half = scalar_from_rational<C>(Rational(1, 2));
    C threequarter = scalar_from_rational<C>(Rational(3, 4));

    std::map<int, Jet<C>> Y;
    Y[0] = one;
    auto yd = [&](int m, int k) {
        Jet<C> j = Y.at(m);
        for (int t = 0; t < k; ++t) j = j.derivative();
        return j;
    };
    for (int n = 1; n <= p.nmax; ++n) {
        int m = 2 * n;
        Jet<C> s1 = Jet<C>::constant(C(0), K), s2 = s1, s3 = s1;
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                if (a + b == m) s1 = s1 + Y.at(a) * Y.at(b);
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                for (int g = 0; g <= m - 2; g += 2)
                    for (int d = 0; d <= m - 2; d += 2)
                        if (a + b + g + d == m)
                            s2 = s2 + Y.at(a) * Y.at(b) * Y.at(g) * Y.at(d);
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                if (a + b == m - 2) {
                    Jet<C> term =
                        ep0 * Y.at(a) * Y.at(b) +
                        Jet<C>::constant(threequarter, K) * qm2 * yd(a, 1) * yd(b, 1) -
                        Jet<C>::constant(half, K) * Y.at(a) * qm2 *
                            (yd(b, 2) -
                             Jet<C>::constant(half, K) * qm2 * dqsqor1 * yd(b, 1));
                    s3 = s3 + term;
                }
        Jet<C> ym = s1 - s2 + s3;
        for (auto& c : ym.a) c *= half;
        Y[m] = ym;
    }
    out.Y = std::move(Y);
    return out;
}

// ---------------------------------------------------------------------------
// Coupled jet pipeline.

template <class C>
struct CoupledJetResult {
    Jet<C> Delta, Qsq, Q, eps0, asqr, den, coef, theta;
    bool has_theta = false;
    std::array<Jet<C>, 2> s0v, spv;
    std::map<int, std::array<Jet<C>, 2>> bv, sv;
    std::map<int, Jet<C>> cpf, cf, Y;
    int signQsq = 1;
};

namespace detail {

// eigenframe pieces that can be evaluated independently at any point
template <class C>
struct FrameJets {
    Jet<C> delta, qsq, Q, qm1, qm2, dQ, eps0, asqr, den, coef, intg, G12;
    std::array<Jet<C>, 2> s0, spv;
};

template <class C>
int coupled_sign(const CoupledProblem& p, double floor) {
    if (!p.automatic) return p.sign_qsq_override;
    if (p.parrepls.empty())
        throw SignUndeterminable("automatic sign of Qsq needs parameter replacements");
    try {
        EvalContext<C> at;
        at.var = "";
        at.order = 0;
        at.floor = floor;
        Bindings all = p.parrepls;
        Expr qsq_expr = ((p.R11 - p.af) + (p.R22 - p.af) +
                         (p.branch == Branch::Minus ? Expr::number(-1) : Expr::number(1)) *
                             sqrt_of(pow((p.R11 - p.af) - (p.R22 - p.af), 2) +
                                     4 * p.R12 * p.R21)) /
                        2;
        C q0 = eval_value(expand_definitions(substitute(qsq_expr, all), p.defs), at);
        Complex z = Complex(static_cast<double>(q0.real()), static_cast<double>(q0.imag()));
        if (std::abs(z.imag()) > 1e-9 * (1 + std::abs(z.real()))) return 1;
        return z.real() < 0 ? -1 : 1;
    } catch (const Error&) {
        return 1;
    }
}

template <class C>
FrameJets<C> coupled_frame_jets(const CoupledProblem& p, const EvalContext<C>& ctx, int sign,
                                bool apply_theta_phase, const C& theta_value) {
    FrameJets<C> f;
    const int K = ctx.order;
    auto ev = [&](const Expr& e) { return jet_eval(expand_definitions(e, p.defs), ctx); };
    Jet<C> one = Jet<C>::constant(C(1), K);
    Jet<C> iu = Jet<C>::constant(C(0, 1), K);
    C half = scalar_from_rational<C>(Rational(1, 2));

    Jet<C> G11 = ev(p.R11 - p.af), G12 = ev(p.R12), G21 = ev(p.R21), G22 = ev(p.R22 - p.af);
    f.G12 = G12;
    f.delta = p.automatic
                  ? (G11 - G22) * (G11 - G22) + Jet<C>::constant(C(4), K) * G12 * G21
                  : ev(p.delta_override);
    Jet<C> sqrt_del = p.automatic ? jet_sqrt(f.delta, ctx.floor) : ev(p.sqrt_delta_override);
    f.qsq = G11 + G22 + (p.branch == Branch::Minus ? -sqrt_del : sqrt_del);
    for (auto& c : f.qsq.a) c *= half;
    f.Q = sign < 0 ? -(iu * jet_sqrt(-f.qsq, ctx.floor)) : jet_sqrt(f.qsq, ctx.floor);
    f.qm1 = jet_div(one, f.Q, ctx.floor);
    f.qm2 = f.qm1 * f.qm1;
    f.dQ = f.Q.derivative();

    if (p.eps0_override.valid()) {
        f.eps0 = ev(p.eps0_override);
    } else {
        Jet<C> dq = f.qsq.derivative();
        Jet<C> w1 = jet_div(dq, f.qsq, ctx.floor);
        C c516 = scalar_from_rational<C>(Rational(5, 16));
        C c14 = scalar_from_rational<C>(Rational(1, 4));
        f.eps0 = jet_div(
            Jet<C>::constant(c516, K) * w1 * w1 -
                jet_div(Jet<C>::constant(c14, K) * dq.derivative(), f.qsq, ctx.floor) + ev(p.af),
            f.qsq, ctx.floor);
    }

    Jet<C> ratio = jet_div(f.qsq - G11, G12, ctx.floor);
    Jet<C> g = ev(p.g_factor);
    f.s0 = {g, g * ratio};
    f.asqr = f.s0[0] * f.s0[0].conjugated() + f.s0[1] * f.s0[1].conjugated();
    f.intg = Jet<C>::constant(C(0), K);
    if (p.normalize) {
        Jet<C> ms = jet_sqrt(f.asqr, ctx.floor);
        f.s0 = {jet_div(f.s0[0], ms, ctx.floor), jet_div(f.s0[1], ms, ctx.floor)};
        f.asqr = one;
        f.intg = f.s0[0].conjugated() * f.s0[0].derivative() +
                 f.s0[1].conjugated() * f.s0[1].derivative();
        if (apply_theta_phase) {
            Jet<C> theta = detail::antiderivative(f.intg * iu, theta_value);
            theta.a.resize(std::min(theta.a.size(), f.s0[0].a.size()));
            auto [st, ct] = jet_sincos(theta);
            Jet<C> phasf = ct + iu * st;
            f.s0 = {f.s0[0] * phasf, f.s0[1] * phasf};
        }
    }
    f.spv = {-(f.s0[1].conjugated()), f.s0[0].conjugated()};
    f.den = f.s0[0] * f.s0[0].conjugated() * (G22 - f.qsq) +
            f.s0[1] * f.s0[1].conjugated() * (G11 - f.qsq) -
            f.s0[0].conjugated() * f.s0[1] * G12 - f.s0[0] * f.s0[1].conjugated() * G21;
    if (mag(f.den.value()) <= ctx.floor) throw SingularPoint("eigenvector denominator vanishes");
    f.coef = jet_div(-(f.qsq + f.qsq), f.den, ctx.floor);
    return f;
}

}  // namespace detail

template <class C>
CoupledJetResult<C> coupled_corrections_jet(const CoupledProblem& p, const EvalContext<C>& ctx,
                                            std::optional<Hermiticity> herm_override = {}) {
    using VJ = std::array<Jet<C>, 2>;
    CoupledJetResult<C> out;
    const int K = ctx.order;
    Hermiticity herm = herm_override.value_or(p.hermitian);
    Jet<C> one = Jet<C>::constant(C(1), K);
    Jet<C> iu = Jet<C>::constant(C(0, 1), K);
    C half = scalar_from_rational<C>(Rational(1, 2));

    int sign = detail::coupled_sign<C>(p, ctx.floor);
    out.signQsq = sign;

    // the quadrature anchor, when integrals are needed
    auto anchor_value = [&]() -> double {
        if (!p.anchor.valid()) throw NotIntegrable("job supplies no quadrature anchor");
        EvalContext<C> a0;
        a0.order = 0;
        a0.floor = ctx.floor;
        C v = eval_value(expand_definitions(p.anchor, p.defs), a0);
        return static_cast<double>(v.real());
    };
    auto real_x0 = [&]() {
        Complex z(static_cast<double>(ctx.x0.real()), static_cast<double>(ctx.x0.imag()));
        if (std::abs(z.imag()) > 1e-12)
            throw DomainError("jet conjugation requires a real evaluation point");
        return z.real();
    };
    auto frame_at = [&](double xi, int order) {
        EvalContext<C> c2 = ctx;
        c2.x0 = C(xi);
        c2.order = order;
        return detail::coupled_frame_jets<C>(p, c2, sign, false, C(0));
    };

    // theta phase: quadrature of the gauge integrand from the anchor
    bool use_theta = false;
    C theta0(0);
    detail::FrameJets<C> frame = detail::coupled_frame_jets<C>(p, ctx, sign, false, C(0));
    if (p.normalize && p.integrate_theta) {
        bool nonzero = false;
        for (const auto& c : frame.intg.a)
            if (mag(c) > 1e-10) nonzero = true;
        if (nonzero) {
            double x0 = real_x0(), a0 = anchor_value();
            std::function<C(double)> g = [&](double xi) { return frame_at(xi, 1).intg.value(); };
            theta0 = C(0, 1) * detail::adaptive_quad<C>(g, a0, x0, 1e-12);
            frame = detail::coupled_frame_jets<C>(p, ctx, sign, true, theta0);
            use_theta = true;
        }
    }
    out.has_theta = use_theta;
    if (use_theta) out.theta = detail::antiderivative(frame.intg * iu, theta0);

    out.Delta = frame.delta;
    out.Qsq = frame.qsq;
    out.Q = frame.Q;
    out.eps0 = frame.eps0;
    out.s0v = frame.s0;
    out.spv = frame.spv;
    out.asqr = frame.asqr;
    out.den = frame.den;
    out.coef = frame.coef;

    std::map<int, VJ> bv, sv;
    std::map<int, Jet<C>> Ym, cpf, cf;
    sv[0] = frame.s0;
    bv[1] = {iu * frame.qm1 * frame.s0[0].derivative(), iu * frame.qm1 * frame.s0[1].derivative()};
    auto Yof = [&](int a) { return a == 0 ? one : Ym.at(a); };

    // first-order theory integrand at an arbitrary point (frame level only)
    auto intgnt1_at = [&](double xi) -> C {
        auto fr = frame_at(xi, 1);
        using std::conj;
        C qm1v = fr.qm1.value();
        C s00 = fr.s0[0].value(), s01 = fr.s0[1].value();
        C ds0 = fr.s0[0].derivative().value(), ds1 = fr.s0[1].derivative().value();
        C b10 = C(0, 1) * qm1v * ds0;
        C b11 = C(0, 1) * qm1v * ds1;
        C cp = fr.coef.value() * (-(s01 * b10) + s00 * b11);
        C dot = conj(ds0) * fr.spv[0].value() + conj(ds1) * fr.spv[1].value();
        C w = cp * dot;
        if (p.theory == TheoryVariant::Wronskian) return w + conj(w);
        return w - conj(w);
    };

    for (int m = 2; m <= p.mmax + 1; ++m) {
        int m1 = m - 1;
        const VJ& b = bv.at(m1);
        Jet<C> cp = frame.coef * (-(frame.s0[1] * b[0]) + frame.s0[0] * b[1]);
        cpf[m1] = cp;
        Jet<C> c;
        if (p.theory == TheoryVariant::Simplified) {
            c = Jet<C>::constant(C(0), K);
        } else if (m1 == 1) {
            // c_1 by quadrature of the first-order integrand from the anchor
            Jet<C> ds0 = frame.s0[0].derivative(), ds1 = frame.s0[1].derivative();
            Jet<C> dot = ds0.conjugated() * frame.spv[0] + ds1.conjugated() * frame.spv[1];
            Jet<C> w = cp * dot;
            Jet<C> integrand(w.a.size());
            if (p.theory == TheoryVariant::Wronskian) {
                using std::conj;
                for (std::size_t k2 = 0; k2 < w.a.size(); ++k2)
                    integrand.a[k2] = w.a[k2] + conj(w.a[k2]);
            } else {
                using std::conj;
                for (std::size_t k2 = 0; k2 < w.a.size(); ++k2)
                    integrand.a[k2] = w.a[k2] - conj(w.a[k2]);
            }
            double x0 = real_x0(), a0 = anchor_value();
            std::function<C(double)> g = [&](double xi) { return intgnt1_at(xi); };
            C c0 = detail::adaptive_quad<C>(g, a0, x0, 1e-12);
            c = detail::antiderivative(integrand, c0);
            c.a.resize(std::min(c.a.size(), cp.a.size()));
        } else {
            throw NotIntegrable("numeric c_m for m >= 2 needs theory = s (the quadrature would "
                                "recurse through all lower orders)");
        }
        cf[m1] = c;
        sv[m1] = {cp * frame.spv[0] + c * frame.s0[0], cp * frame.spv[1] + c * frame.s0[1]};
        if (herm == Hermiticity::Hermitian)
            Ym[m1] = jet_div(frame.s0[0].conjugated() * b[0] + frame.s0[1].conjugated() * b[1],
                             frame.asqr, ctx.floor);
        else
            Ym[m1] = jet_div(jet_div(frame.qm2 * cp * frame.G12 * frame.asqr,
                                     Jet<C>::constant(C(2), K) * frame.s0[0], ctx.floor) +
                                 b[0],
                             frame.s0[0], ctx.floor);

        if (m < p.mmax + 1) {
            VJ sum1{Jet<C>::constant(C(0), K), Jet<C>::constant(C(0), K)};
            VJ sum2 = sum1, sum5 = sum1, sum6 = sum1;
            Jet<C> sum3 = Jet<C>::constant(C(0), K), sum4 = sum3;
            auto dv = [](const VJ& u) -> VJ { return {u[0].derivative(), u[1].derivative()}; };
            for (int a = 0; a <= m - 1; ++a)
                for (int b2 = 0; b2 <= m - 1; ++b2)
                    for (int s2 = 1; s2 <= m - 1; ++s2)
                        if (a + b2 + s2 == m) {
                            Jet<C> yab = Yof(a) * Yof(b2);
                            for (int comp = 0; comp < 2; ++comp) {
                                Jet<C> inner = sv.at(s2)[comp] +
                                               Jet<C>::constant(C(2), K) *
                                                   (Yof(s2) * sv.at(0)[comp] - bv.at(s2)[comp]);
                                sum1[comp] = sum1[comp] + yab * inner;
                            }
                        }
            for (int a = 0; a <= m - 1; ++a)
                for (int b2 = 0; b2 <= m - 1; ++b2)
                    for (int g2 = 0; g2 <= m - 1; ++g2)
                        for (int d2 = 0; d2 <= m - 1; ++d2)
                            for (int s2 = 1; s2 <= m - 1; ++s2)
                                if (a + b2 + g2 + d2 + s2 == m) {
                                    Jet<C> yy = Yof(a) * Yof(b2) * Yof(g2) * Yof(d2);
                                    for (int comp = 0; comp < 2; ++comp)
                                        sum2[comp] = sum2[comp] + yy * sv.at(s2)[comp];
                                }
            for (int a = 1; a <= m - 1; ++a)
                for (int b2 = 1; b2 <= m - 1; ++b2)
                    if (a + b2 == m) sum3 = sum3 + Yof(a) * Yof(b2);
            for (int a = 0; a <= m - 1; ++a)
                for (int b2 = 0; b2 <= m - 1; ++b2)
                    for (int g2 = 0; g2 <= m - 1; ++g2)
                        for (int d2 = 0; d2 <= m - 1; ++d2)
                            if (a + b2 + g2 + d2 == m)
                                sum4 = sum4 + Yof(a) * Yof(b2) * Yof(g2) * Yof(d2);
            for (int a = 0; a <= m - 1; ++a)
                for (int b2 = 0; b2 <= m - 1; ++b2)
                    for (int g2 = 0; g2 <= m - 1; ++g2)
                        for (int s2 = 0; s2 <= m - 1; ++s2)
                            if (a + b2 + g2 + s2 == m - 1) {
                                Jet<C> yy = Yof(a) * Yof(b2) * Yof(g2) * frame.qm1;
                                VJ ds = dv(sv.at(s2));
                                for (int comp = 0; comp < 2; ++comp)
                                    sum5[comp] = sum5[comp] + yy * ds[comp];
                            }
            C threequarter = scalar_from_rational<C>(Rational(3, 4));
            for (int a = 0; a <= m - 2; ++a)
                for (int b2 = 0; b2 <= m - 2; ++b2)
                    for (int s2 = 0; s2 <= m - 2; ++s2)
                        if (a + b2 + s2 == m - 2) {
                            VJ svs = sv.at(s2);
                            VJ ds1 = dv(svs), ds2 = dv(ds1);
                            Jet<C> ya = Yof(a), yb = Yof(b2);
                            Jet<C> dyb1 = yb.derivative();
                            Jet<C> dyb2 = dyb1.derivative();
                            Jet<C> dya1 = ya.derivative();
                            for (int comp = 0; comp < 2; ++comp) {
                                Jet<C> part1 =
                                    frame.qm2 * (ds2[comp] - frame.qm1 * frame.dQ * ds1[comp]) +
                                    frame.eps0 * svs[comp];
                                Jet<C> inner =
                                    yb * part1 - frame.qm2 * dyb1 * ds1[comp] -
                                    Jet<C>::constant(half, K) * frame.qm2 *
                                        (dyb2 - frame.qm1 * frame.dQ * dyb1) * svs[comp];
                                Jet<C> term = ya * inner + Jet<C>::constant(threequarter, K) *
                                                               frame.qm2 * dya1 * dyb1 * svs[comp];
                                sum6[comp] = sum6[comp] + term;
                            }
                        }
            VJ bm;
            for (int comp = 0; comp < 2; ++comp) {
                Jet<C> t = sum1[comp] - sum2[comp] + (sum3 - sum4) * sv.at(0)[comp] +
                           iu * Jet<C>::constant(C(2), K) * sum5[comp] + sum6[comp];
                for (auto& cfc : t.a) cfc *= half;
                bm[comp] = t;
            }
            bv[m] = bm;
        }
    }
    out.bv = std::move(bv);
    out.sv = std::move(sv);
    out.cpf = std::move(cpf);
    out.cf = std::move(cf);
    out.Y = std::move(Ym);
    return out;
}

// ---------------------------------------------------------------------------
// Comparison report.

struct CompareRow {
    std::string name;
    Complex symbolic{}, jet{};
    double err = 0;
    bool pass = true;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    bool pass = true;
    std::string worst;
    double worst_err = 0;

    void add(const std::string& name, Complex a, Complex b, double tol) {
        CompareRow r;
        r.name = name;
        r.symbolic = a;
        r.jet = b;
        double scale = std::max({1.0, std::abs(a), std::abs(b)});
        r.err = std::abs(a - b) / scale;
        r.pass = r.err <= tol;
        if (r.err > worst_err) {
            worst_err = r.err;
            worst = name;
        }
        pass = pass && r.pass;
        rows.push_back(r);
    }

    std::string to_string() const {
        std::ostringstream os;
        for (const auto& r : rows) {
            os << (r.pass ? "  ok   " : "  FAIL ") << r.name << "  symbolic=(" << r.symbolic.real()
               << "," << r.symbolic.imag() << ")  jet=(" << r.jet.real() << "," << r.jet.imag()
               << ")  rel=" << r.err << "\n";
        }
        if (!rows.empty())
            os << (pass ? "PASS" : "FAIL") << "  worst: " << worst << " rel=" << worst_err << "\n";
        return os.str();
    }
};

inline Complex to_std_complex(const Complex& z) { return z; }
inline Complex to_std_complex(const BigComplex& z) {
    return {z.real().convert_to<double>(), z.imag().convert_to<double>()};
}

}  // namespace pia
