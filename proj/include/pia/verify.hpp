// Symbolic-vs-jet cross-validation driver used by the CLI `verify`
// subcommand and the acceptance suite.
#pragma once

#include "pia/resultfile.hpp"

namespace pia {

struct VerifyOptions {
    std::vector<double> points;  // evaluation points for the active variable
    double rel_tol = 1e-10;
    int jet_order = 0;           // 0: derive from nmax/mmax
    std::map<std::string, Complex> params;  // extra parameter values
};

namespace detail {

template <class C>
std::map<std::string, C> param_values(const Bindings& parrepls, const std::string& var,
                                      const FuncDefs& defs,
                                      const std::map<std::string, Complex>& extra) {
    std::map<std::string, C> out;
    EvalContext<C> c0;
    c0.order = 0;
    for (const auto& [k, v] : parrepls) {
        if (k == var) continue;
        out[k] = eval_value(expand_definitions(v, defs), c0);
    }
    for (const auto& [k, v] : extra) out[k] = C(v.real(), v.imag());
    return out;
}

}  // namespace detail

template <class C>
CompareReport verify_scalar(const ScalarProblem& p, const ScalarSeries& s,
                            const VerifyOptions& opt) {
    CompareReport rep;
    int order = opt.jet_order > 0 ? opt.jet_order : 2 * p.nmax + 2;
    for (double x0 : opt.points) {
        EvalContext<C> ctx;
        ctx.var = s.var;
        ctx.x0 = C(x0);
        ctx.order = order;
        ctx.params = detail::param_values<C>(p.parrepls, s.var, p.defs, opt.params);
        auto jr = scalar_corrections_jet(p, ctx);
        std::string at = "@" + std::to_string(x0);
        rep.add("eps0 " + at, to_std_complex(eval_value(expand_definitions(s.eps0, p.defs), ctx)),
                to_std_complex(jr.eps0.value()), opt.rel_tol);
        for (int n = 1; n <= p.nmax; ++n) {
            int m = 2 * n;
            Complex sym =
                to_std_complex(eval_value(expand_definitions(s.Y.at(m), p.defs), ctx));
            rep.add("Y" + std::to_string(m) + " " + at, sym, to_std_complex(jr.Y.at(m).value()),
                    opt.rel_tol);
        }
    }
    return rep;
}

template <class C>
CompareReport verify_coupled(const CoupledProblem& p, const CoupledResult& r,
                             const VerifyOptions& opt) {
    CompareReport rep;
    int order = opt.jet_order > 0 ? opt.jet_order : 2 * p.mmax + 4;
    for (double x0 : opt.points) {
        EvalContext<C> ctx;
        ctx.var = "x";
        ctx.x0 = C(x0);
        ctx.order = order;
        ctx.params = detail::param_values<C>(p.parrepls, "x", p.defs, opt.params);
        auto jr = coupled_corrections_jet(p, ctx);
        auto sym = [&](const Expr& e) {
            return to_std_complex(eval_value(expand_definitions(e, p.defs), ctx));
        };
        std::string at = "@" + std::to_string(x0);
        rep.add("Q " + at, sym(r.frame.Q), to_std_complex(jr.Q.value()), opt.rel_tol);
        rep.add("eps0 " + at, sym(r.frame.eps0), to_std_complex(jr.eps0.value()), opt.rel_tol);
        for (int m = 1; m <= p.mmax; ++m) {
            rep.add("Y_" + std::to_string(m) + " " + at, sym(r.series.Y.at(m)),
                    to_std_complex(jr.Y.at(m).value()), opt.rel_tol);
            rep.add("cp_" + std::to_string(m) + " " + at, sym(r.series.cpf.at(m)),
                    to_std_complex(jr.cpf.at(m).value()), opt.rel_tol);
            // c_m carries an anchor-dependent constant; its derivative (the
            // integrand) is what the pipelines share, so only the simplified
            // theory's identically-zero c_m is compared directly
            if (p.theory == TheoryVariant::Simplified)
                rep.add("c_" + std::to_string(m) + " " + at, sym(r.series.cf.at(m)),
                        to_std_complex(jr.cf.at(m).value()), opt.rel_tol);
        }
    }
    return rep;
}

}  // namespace pia
