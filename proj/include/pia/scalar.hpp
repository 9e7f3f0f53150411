// Scalar phase-integral corrections Y_2n for u'' + R u = 0: eps0 construction
// and the even-order recurrence, in explicit or general mode, x or zeta
// variable.
#pragma once

#include <chrono>
#include <map>

#include "pia/calculus.hpp"
#include "pia/job.hpp"

namespace pia {

namespace detail {

// Test hook: the recurrence's rational coefficients. Mutating any of these
// must break the acceptance identities (mutation-sanity suite).
struct ScalarWeights {
    Rational eps_dq{5, 16};    // (dQsq/Qsq)^2 weight in eps0
    Rational eps_ddq{1, 4};    // Qsq''/Qsq weight in eps0
    Rational s3_cross{3, 4};   // Y_a' Y_b' cross term in sum3
    Rational s3_second{1, 2};  // Y_a (Y_b'' - ...) term in sum3
    Rational s3_qprime{1, 2};  // inner (Q^2)' Y_b' correction
    Rational overall{1, 2};    // global (sum1 - sum2 + sum3)/2
};

}  // namespace detail

struct ScalarSeries {
    Expr Qsq, eps0;
    std::map<int, Expr> Y;  // even orders, Y[0] = 1
    double cpu_compute = 0;
    std::string var;
};

// Qsq = R - af and the base smallness function eps0
inline std::pair<Expr, Expr> eps0_scalar(const Expr& R, const Expr& af, const std::string& v,
                                         const detail::ScalarWeights& w = {}) {
    Expr Qsq = R - af;
    Expr dQsq = differentiate(Qsq, v);
    Expr ep0 = (Expr::number(w.eps_dq) * pow(dQsq / Qsq, 2) -
                Expr::number(w.eps_ddq) * differentiate(dQsq, v) / Qsq + af) /
               Qsq;
    return {Qsq, together(simplify(ep0))};
}

inline ScalarSeries scalar_corrections(const ScalarProblem& p,
                                       const detail::ScalarWeights& w = {}) {
    auto t0 = std::chrono::steady_clock::now();
    ScalarSeries out;
    std::string v = p.var_name();
    out.var = v;
    Expr var = Expr::sym(v);

    Expr ep0, Qsqor1;
    if (p.input_mode == InputMode::Explicit) {
        auto [Qsq, e0] = eps0_scalar(p.R, p.af, v, w);
        out.Qsq = Qsq;
        ep0 = e0;
        Qsqor1 = Qsq;
    } else {
        ep0 = Expr::call("eps0", var);
        if (p.variable == VariableChoice::X) {
            Qsqor1 = Expr::call("Qsqr", var);
            out.Qsq = Qsqor1;
        } else {
            Qsqor1 = Expr::number(1);
            out.Qsq = Qsqor1;
        }
    }
    out.eps0 = ep0;
    Expr Qm2 = 1 / Qsqor1;
    Expr dQsqor1 = differentiate(Qsqor1, v);

    std::map<int, Expr> Y;
    Y[0] = Expr::number(1);
    auto Yd = [&](int m, int order) { return differentiate(Y.at(m), v, order); };

    for (int n = 1; n <= p.nmax; ++n) {
        int m = 2 * n;
        ExprList sum1, sum2, sum3;
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                if (a + b == m) sum1.push_back(Y.at(a) * Y.at(b));
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                for (int g = 0; g <= m - 2; g += 2)
                    for (int d = 0; d <= m - 2; d += 2)
                        if (a + b + g + d == m)
                            sum2.push_back(Y.at(a) * Y.at(b) * Y.at(g) * Y.at(d));
        for (int a = 0; a <= m - 2; a += 2)
            for (int b = 0; b <= m - 2; b += 2)
                if (a + b == m - 2) {
                    Expr term =
                        ep0 * Y.at(a) * Y.at(b) +
                        Expr::number(w.s3_cross) * Qm2 * Yd(a, 1) * Yd(b, 1) -
                        Expr::number(w.s3_second) * Y.at(a) * Qm2 *
                            (Yd(b, 2) - Expr::number(w.s3_qprime) * Qm2 * dQsqor1 * Yd(b, 1));
                    sum3.push_back(term);
                }
        Expr ym = Expr::number(w.overall) *
                  (Expr::sum(std::move(sum1)) - Expr::sum(std::move(sum2)) +
                   Expr::sum(std::move(sum3)));
        // memoize in simplified form: unsimplified reuse explodes at higher orders
        Y[m] = simplify(ym);
    }
    out.Y = std::move(Y);
    out.cpu_compute = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace pia
