// Result-file writers for the three run kinds, plus the appended
// evaluation script (symbolic echo + numeric substitution of the computed
// quantities). Timing lines are isolated on '# CPU' marked lines so result
// files stay byte-comparable.
#pragma once

#include <iomanip>
#include <sstream>

#include "pia/coupled.hpp"
#include "pia/fixtures.hpp"
#include "pia/oracle.hpp"
#include "pia/render.hpp"
#include "pia/scalar.hpp"

namespace pia {

namespace detail {

inline std::string fmt_complex(const Complex& z) {
    std::ostringstream os;
    os << std::setprecision(15);
    double a = z.real(), b = z.imag();
    if (b == 0 || std::abs(b) < 1e-14 * std::max(1.0, std::abs(a))) {
        os << a;
        return os.str();
    }
    if (a == 0 || std::abs(a) < 1e-14 * std::abs(b)) {
        os << b << "*i";
        return os.str();
    }
    os << a << (b < 0 ? " - " : " + ") << std::abs(b) << "*i";
    return os.str();
}

inline std::string render_bindings(const Bindings& b) {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : b) {
        if (!first) out += ", ";
        out += k + " -> " + render(v);
        first = false;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar result files.

struct ScalarRunTimings {
    double compute = 0, simplify = 0;
};

inline std::string write_scalar_result(const ScalarProblem& p, const ScalarSeries& s,
                                       ScalarRunTimings* timings = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream os;
    RenderSpec spec = p.render;
    spec.var = s.var;
    os << "Corrections Y2n for one ODE of Schroedinger type\n\n";
    os << "variable = " << s.var << "\n";
    os << "nmax = " << p.nmax << "\n\n";
    if (p.input_mode == InputMode::Explicit) {
        os << "R =\n" << render(p.R, spec) << "\n\n";
        os << "auxiliary function a =\n" << render(p.af, spec) << "\n\n";
        os << "eps0 =\n" << render(s.eps0, spec) << "\n";
    } else if (p.variable == VariableChoice::X) {
        os << "Y2n as functions of eps0(x), Qsqr(x) and derivatives\n";
    } else {
        os << "Y2n as functions of eps0(z) and derivatives\n";
    }
    os << "# CPU time used for computation (seconds) = " << s.cpu_compute << "\n";
    for (int n = 1; n <= p.nmax; ++n) {
        int m = 2 * n;
        os << "\nn = " << n << "\n";
        os << "Y" << m << " =\n" << render(s.Y.at(m), spec) << "\n";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << "\n# CPU time used for computation & simplification (seconds) = "
       << s.cpu_compute + dt << "\n";
    if (timings) {
        timings->compute = s.cpu_compute;
        timings->simplify = dt;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Coupled result files (field order mirrors the pipeline's write sequence).

inline std::string write_coupled_result(const CoupledProblem& p, const CoupledResult& r,
                                        ScalarRunTimings* timings = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream os;
    const RenderSpec& spec = p.render;
    RenderSpec raw{spec.form, FractionStyle::None, spec.var};
    const EigenFrame& f = r.frame;
    os << "Corrections Y_m and vectors s_m for two ODEs of Schroedinger type\n\n";
    os << "mmax = " << p.mmax << "\n\n";
    os << "R11 =\n" << render(p.R11, raw) << "\n\n";
    os << "R12 =\n" << render(p.R12, raw) << "\n\n";
    os << "R21 =\n" << render(p.R21, raw) << "\n\n";
    os << "R22 =\n" << render(p.R22, raw) << "\n\n";
    os << "af =\n" << render(p.af, raw) << "\n\n";
    if (p.automatic)
        os << "parameter replacements: " << detail::render_bindings(p.parrepls) << "\n";
    else
        os << "*** non-automatic calculation ***\n";
    os << "Qsq branch: " << (p.branch == Branch::Minus ? "minus" : "plus") << " sqrt(Delta)\n\n";
    os << "Delta =\n" << render(f.Delta, raw) << "\n\n";
    os << "signQsq = " << f.signQsq << "\n\n";
    os << "Qsq =\n" << render(f.Qsq, raw) << "\n\n";
    os << "eps0 =\n" << render(f.eps0, raw) << "\n\n";
    os << "Q =\n" << render(f.Q, raw) << "\n\n";
    os << "s02/s01 =\n" << render(f.s02os01, raw) << "\n\n";
    os << "factor g =\n" << render(f.g, raw) << "\n\n";
    if (f.theta.valid()) os << "theta =\n" << render(f.theta, raw) << "\n\n";
    os << "s0v =\n{" << render(f.s0v[0], raw) << ", " << render(f.s0v[1], raw) << "}\n\n";
    os << "spv =\n{" << render(f.spv[0], raw) << ", " << render(f.spv[1], raw) << "}\n\n";
    os << "*** sv_m = cp_m*spv + c_m*s0v, m = 1..." << p.mmax << " ***\n\n";
    os << "D =\n" << render(f.den, raw) << "\n\n";
    os << "*** " << (p.hermitian == Hermiticity::Hermitian ? "Hermitian" : "Non-hermitian")
       << " theory";
    if (p.hermitian == Hermiticity::Hermitian) {
        os << " ("
           << (p.theory == TheoryVariant::Simplified
                   ? "simplified"
                   : (p.theory == TheoryVariant::Fulling ? "Fulling" : "Wronskian conserving"))
           << ")";
    }
    os << " ***\n";
    os << "# CPU time used for computation (seconds) = " << r.series.cpu_compute << "\n";

    for (int m = 1; m <= p.mmax; ++m) {
        os << "\nm = " << m << "\n";
        bool do_simplify = p.simplify_results && m <= p.simplify_max_order;
        auto shown = [&](const Expr& e) {
            Expr v = do_simplify ? simplify(e) : e;
            return render(v, spec);
        };
        os << "Y_" << m << " =\n" << shown(r.series.Y.at(m)) << "\n\n";
        os << "cp_" << m << " =\n" << shown(r.series.cpf.at(m)) << "\n\n";
        os << "c_" << m << " =\n" << shown(r.series.cf.at(m)) << "\n";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << "\n# CPU time used for computation & simplification (seconds) = "
       << r.series.cpu_compute + dt << "\n";
    if (timings) {
        timings->compute = r.series.cpu_compute;
        timings->simplify = dt;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Abstract b_m result files.

inline std::string write_abstract_result(const AbstractProblem& p, const AbstractSeries& s,
                                         ScalarRunTimings* timings = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream os;
    RenderSpec spec = p.render;
    spec.var = s.var;
    os << "Vectors b_m as functions of " << (p.variable == VariableChoice::Zeta ? "z" : "x")
       << " (generic component; sv_s, Y_a opaque)\n\n";
    os << "mmax = " << p.mmax << "\n";
    if (p.y1_zero) os << "Y1 = 0 assumed\n";
    os << "# CPU time used for computation (seconds) = " << s.cpu_compute << "\n";
    for (int m = 1; m <= p.mmax; ++m) {
        os << "\nm = " << m << "\n";
        os << "b_" << m << " =\n" << render(together(simplify(s.bv.at(m))), spec) << "\n";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << "\n# CPU time used for computation & simplification (seconds) = "
       << s.cpu_compute + dt << "\n";
    if (timings) {
        timings->compute = s.cpu_compute;
        timings->simplify = dt;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Appended evaluation scripts: `define`, `parrepls = ...`, `write <expr>`,
// `print <expr>`; expressions may reference the run's computed quantities
// (Q, eps0, Qsq, Delta, D, asqr, Y_m, cp_m, c_m, s0v_1, s0v_2, spv_1, spv_2).

inline Bindings coupled_quantity_bindings(const CoupledProblem& p, const CoupledResult& r) {
    Bindings b;
    b["Q"] = r.frame.Q;
    b["Qsq"] = r.frame.Qsq;
    b["Delta"] = r.frame.Delta;
    b["eps0"] = r.frame.eps0;
    b["D"] = r.frame.den;
    b["coef"] = r.frame.coef;
    b["asqr"] = r.frame.asqr;
    b["s0v_1"] = r.frame.s0v[0];
    b["s0v_2"] = r.frame.s0v[1];
    b["spv_1"] = r.frame.spv[0];
    b["spv_2"] = r.frame.spv[1];
    for (int m = 1; m <= p.mmax; ++m) {
        b["Y_" + std::to_string(m)] = r.series.Y.at(m);
        b["cp_" + std::to_string(m)] = r.series.cpf.at(m);
        b["c_" + std::to_string(m)] = r.series.cf.at(m);
        b["b_" + std::to_string(m) + "_1"] = r.series.bv.at(m)[0];
        b["b_" + std::to_string(m) + "_2"] = r.series.bv.at(m)[1];
    }
    return b;
}

inline std::string run_appended(const CoupledProblem& p, const CoupledResult& r,
                                const std::string& script) {
    std::ostringstream os;
    os << "\n*** appended evaluation ***\n";
    Bindings quantities = coupled_quantity_bindings(p, r);
    FuncDefs defs = p.defs;
    Bindings parrepls = p.parrepls;
    std::istringstream in(script);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.rfind("define ", 0) == 0) {
            std::string rest = detail::trim(line.substr(7));
            auto open = rest.find('('), close = rest.find(')'), eq = rest.find('=');
            if (open == std::string::npos || close == std::string::npos ||
                eq == std::string::npos || !(open < close && close < eq))
                throw TypeMismatch("append script define (line " + std::to_string(lineno) + ")");
            std::string fname = detail::trim(rest.substr(0, open));
            std::string param = detail::trim(rest.substr(open + 1, close - open - 1));
            defs[fname] = FuncDef{param, parse_expr(detail::trim(rest.substr(eq + 1)))};
            continue;
        }
        if (line.rfind("parrepls", 0) == 0) {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw TypeMismatch("append script parrepls (line " + std::to_string(lineno) + ")");
            Bindings extra = detail::parse_bindings("parrepls", detail::trim(line.substr(eq + 1)));
            for (auto& [k, v] : extra) parrepls[k] = v;
            os << "replacements: " << detail::render_bindings(parrepls) << "\n";
            continue;
        }
        bool is_write = line.rfind("write ", 0) == 0;
        bool is_print = line.rfind("print ", 0) == 0;
        if (!is_write && !is_print)
            throw TypeMismatch("append script expects define/parrepls/write/print (line " +
                               std::to_string(lineno) + ")");
        std::string text = detail::trim(line.substr(6));
        Expr e = parse_expr(text);
        // quantity names substitute as symbols
        Expr bound = substitute(e, quantities);
        if (is_write) {
            Expr shown;
            try {
                shown = together(bound);
            } catch (const Error&) {
                shown = bound;
            }
            os << text << " =\n" << render(shown, p.render) << "\n";
            continue;
        }
        // numeric evaluation in high precision after definitions + parrepls
        Expr numeric = substitute(expand_definitions(bound, defs), parrepls);
        EvalContext<BigComplex> ctx;
        ctx.var = "";
        ctx.order = 0;
        BigComplex v = eval_value(numeric, ctx);
        os << text << " = " << detail::fmt_complex(to_std_complex(v)) << "\n";
    }
    return os.str();
}

}  // namespace pia
