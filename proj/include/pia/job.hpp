// Job descriptions and the line-oriented job-file format
// (`key = value`, `#` comments, `define f(x) = ...` function definitions).
#pragma once

#include <climits>
#include <sstream>
#include <string>
#include <vector>

#include "pia/calculus.hpp"
#include "pia/parser.hpp"
#include "pia/render.hpp"

namespace pia {

enum class JobKind { Scalar, Coupled, Abstract };
enum class InputMode { Explicit, General };
enum class VariableChoice { X, Zeta };
enum class Branch { Minus, Plus };
enum class Hermiticity { Hermitian, NonHermitian };
enum class TheoryVariant { Simplified, Fulling, Wronskian };

struct ScalarProblem {
    Expr R = Expr::number(0);
    Expr af = Expr::number(0);
    int nmax = 2;
    InputMode input_mode = InputMode::Explicit;
    VariableChoice variable = VariableChoice::X;
    RenderSpec render;
    Bindings parrepls;
    std::vector<std::string> positive;
    FuncDefs defs;

    std::string var_name() const { return variable == VariableChoice::Zeta ? "z" : "x"; }
};

struct CoupledProblem {
    Expr R11, R12, R21, R22;
    Expr af = Expr::number(0);
    int mmax = 2;
    Branch branch = Branch::Minus;
    bool automatic = true;
    Bindings parrepls;
    Expr delta_override, sqrt_delta_override;  // non-automatic inputs
    int sign_qsq_override = 0;                 // -1 or +1 when non-automatic
    Expr eps0_override;                        // optional replacement for eps0
    Expr g_factor = Expr::number(1);
    bool normalize = false;
    bool integrate_theta = false;
    Hermiticity hermitian = Hermiticity::Hermitian;
    TheoryVariant theory = TheoryVariant::Simplified;
    bool trig_expand_flag = false;
    bool y1_zero = false;  // only honored by abstract runs
    bool simplify_results = true;
    int simplify_max_order = INT_MAX;
    RenderSpec render;
    std::vector<std::string> positive;
    FuncDefs defs;
    Expr anchor;  // quadrature anchor for numeric c_m (optional)
};

struct AbstractProblem {
    int mmax = 2;
    VariableChoice variable = VariableChoice::X;
    bool y1_zero = false;
    RenderSpec render;

    std::string var_name() const { return variable == VariableChoice::Zeta ? "z" : "x"; }
};

struct JobFile {
    JobKind kind = JobKind::Scalar;
    ScalarProblem scalar;
    CoupledProblem coupled;
    AbstractProblem abstract;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline bool parse_yn(const std::string& key, const std::string& v) {
    if (v == "y" || v == "yes" || v == "true") return true;
    if (v == "n" || v == "no" || v == "false") return false;
    throw TypeMismatch(key + " expects y/n, got '" + v + "'");
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        int n = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return n;
    } catch (...) {
        throw TypeMismatch(key + " expects an integer, got '" + v + "'");
    }
}

inline Expr parse_value_expr(const std::string& key, const std::string& v) {
    try {
        return parse_expr(v);
    } catch (const SyntaxError& e) {
        throw TypeMismatch(key + ": " + e.what());
    }
}

inline Bindings parse_bindings(const std::string& key, const std::string& v) {
    Bindings out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto arrow = item.find("->");
        if (arrow == std::string::npos)
            throw TypeMismatch(key + ": expected 'name -> expression' in '" + item + "'");
        std::string name = trim(item.substr(0, arrow));
        std::string rhs = trim(item.substr(arrow + 2));
        if (name.empty() || rhs.empty())
            throw TypeMismatch(key + ": expected 'name -> expression' in '" + item + "'");
        out[name] = parse_value_expr(key, rhs);
    }
    return out;
}

}  // namespace detail

inline JobFile parse_job(const std::string& text) {
    using detail::trim;
    std::map<std::string, std::string> kv;
    FuncDefs defs;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("define ", 0) == 0) {
            // define name(param) = body
            std::string rest = trim(line.substr(7));
            auto open = rest.find('(');
            auto close = rest.find(')');
            auto eq = rest.find('=');
            if (open == std::string::npos || close == std::string::npos || eq == std::string::npos ||
                !(open < close && close < eq))
                throw TypeMismatch("define: expected 'define name(param) = expression' (line " +
                                   std::to_string(lineno) + ")");
            std::string fname = trim(rest.substr(0, open));
            std::string param = trim(rest.substr(open + 1, close - open - 1));
            std::string body = trim(rest.substr(eq + 1));
            if (fname.empty() || param.empty() || body.empty())
                throw TypeMismatch("define: empty name, parameter or body (line " +
                                   std::to_string(lineno) + ")");
            defs[fname] = FuncDef{param, detail::parse_value_expr("define " + fname, body)};
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw TypeMismatch("expected 'key = value' (line " + std::to_string(lineno) + ")");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw TypeMismatch("empty key (line " + std::to_string(lineno) + ")");
        if (kv.count(key)) throw TypeMismatch("duplicate key '" + key + "'");
        kv[key] = val;
    }

    JobFile job;
    auto kind_it = kv.find("kind");
    if (kind_it == kv.end()) throw MissingRequiredField("kind");
    if (kind_it->second == "scalar")
        job.kind = JobKind::Scalar;
    else if (kind_it->second == "coupled")
        job.kind = JobKind::Coupled;
    else if (kind_it->second == "abstract")
        job.kind = JobKind::Abstract;
    else
        throw TypeMismatch("kind expects scalar/coupled/abstract, got '" + kind_it->second + "'");
    kv.erase(kind_it);

    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    RenderSpec render;
    if (auto v = take("output")) {
        if (*v == "o") render.form = OutputForm::Plain;
        else if (*v == "t") render.form = OutputForm::TeX;
        else if (*v == "f") render.form = OutputForm::Fortran;
        else throw TypeMismatch("output expects o/t/f, got '" + *v + "'");
    }
    if (auto v = take("fractions")) {
        if (*v == "s") render.fractions = FractionStyle::SimpleFractions;
        else if (*v == "c") render.fractions = FractionStyle::CommonDenominator;
        else if (*v == "n") render.fractions = FractionStyle::None;
        else throw TypeMismatch("fractions expects s/c/n, got '" + *v + "'");
    }
    std::vector<std::string> positive;
    if (auto v = take("positive")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) positive.push_back(item);
        }
    }
    Bindings parrepls;
    if (auto v = take("parrepls")) parrepls = detail::parse_bindings("parrepls", *v);

    auto expand = [&defs](const Expr& e) { return expand_definitions(e, defs); };

    if (job.kind == JobKind::Scalar) {
        ScalarProblem& p = job.scalar;
        p.render = render;
        p.positive = positive;
        p.parrepls = parrepls;
        p.defs = defs;
        if (auto v = take("input")) {
            if (*v == "i") p.input_mode = InputMode::Explicit;
            else if (*v == "g") p.input_mode = InputMode::General;
            else throw TypeMismatch("input expects i/g, got '" + *v + "'");
        }
        if (auto v = take("variable")) {
            if (*v == "x") p.variable = VariableChoice::X;
            else if (*v == "z") p.variable = VariableChoice::Zeta;
            else throw TypeMismatch("variable expects x/z, got '" + *v + "'");
        }
        if (p.variable == VariableChoice::Zeta && p.input_mode == InputMode::Explicit)
            throw TypeMismatch("the zeta variable requires general input mode");
        if (auto v = take("nmax")) p.nmax = detail::parse_int("nmax", *v);
        if (p.nmax < 1) throw TypeMismatch("nmax must be positive");
        if (auto v = take("R")) p.R = expand(detail::parse_value_expr("R", *v));
        else if (p.input_mode == InputMode::Explicit) throw MissingRequiredField("R");
        if (auto v = take("af")) p.af = expand(detail::parse_value_expr("af", *v));
        p.render.var = p.var_name();
    } else if (job.kind == JobKind::Coupled) {
        CoupledProblem& p = job.coupled;
        p.render = render;
        p.positive = positive;
        p.parrepls = parrepls;
        p.defs = defs;
        const std::pair<const char*, Expr*> entries[] = {
            {"R11", &p.R11}, {"R12", &p.R12}, {"R21", &p.R21}, {"R22", &p.R22}};
        for (auto [key, field] : entries) {
            if (auto v = take(key)) *field = expand(detail::parse_value_expr(key, *v));
            else throw MissingRequiredField(key);
        }
        if (auto v = take("af")) p.af = expand(detail::parse_value_expr("af", *v));
        if (auto v = take("mmax")) p.mmax = detail::parse_int("mmax", *v);
        if (p.mmax < 1) throw TypeMismatch("mmax must be positive");
        if (auto v = take("branch")) {
            if (*v == "m") p.branch = Branch::Minus;
            else if (*v == "p") p.branch = Branch::Plus;
            else throw TypeMismatch("branch expects m/p, got '" + *v + "'");
        }
        if (auto v = take("automatic")) p.automatic = detail::parse_yn("automatic", *v);
        if (auto v = take("Delta")) p.delta_override = expand(detail::parse_value_expr("Delta", *v));
        if (auto v = take("sqrtDel"))
            p.sqrt_delta_override = expand(detail::parse_value_expr("sqrtDel", *v));
        if (auto v = take("signQsq")) {
            int s = detail::parse_int("signQsq", *v);
            if (s != 1 && s != -1) throw TypeMismatch("signQsq expects -1 or 1");
            p.sign_qsq_override = s;
        }
        if (!p.automatic &&
            (!p.delta_override.valid() || !p.sqrt_delta_override.valid() ||
             p.sign_qsq_override == 0))
            throw MissingRequiredField("non-automatic jobs need Delta, sqrtDel and signQsq");
        if (auto v = take("eps0")) p.eps0_override = expand(detail::parse_value_expr("eps0", *v));
        if (auto v = take("g")) p.g_factor = expand(detail::parse_value_expr("g", *v));
        if (auto v = take("normalize")) p.normalize = detail::parse_yn("normalize", *v);
        if (auto v = take("theta")) p.integrate_theta = detail::parse_yn("theta", *v);
        if (auto v = take("hermitian")) {
            if (*v == "h") p.hermitian = Hermiticity::Hermitian;
            else if (*v == "n") p.hermitian = Hermiticity::NonHermitian;
            else throw TypeMismatch("hermitian expects h/n, got '" + *v + "'");
        }
        if (auto v = take("theory")) {
            if (*v == "s") p.theory = TheoryVariant::Simplified;
            else if (*v == "f") p.theory = TheoryVariant::Fulling;
            else if (*v == "w") p.theory = TheoryVariant::Wronskian;
            else throw TypeMismatch("theory expects s/f/w, got '" + *v + "'");
        }
        if (p.hermitian == Hermiticity::NonHermitian) p.theory = TheoryVariant::Simplified;
        if (auto v = take("trig_expand")) p.trig_expand_flag = detail::parse_yn("trig_expand", *v);
        if (auto v = take("y1_zero")) p.y1_zero = detail::parse_yn("y1_zero", *v);
        if (auto v = take("simplify")) p.simplify_results = detail::parse_yn("simplify", *v);
        if (auto v = take("simplify_max_order"))
            p.simplify_max_order = detail::parse_int("simplify_max_order", *v);
        if (auto v = take("anchor")) p.anchor = expand(detail::parse_value_expr("anchor", *v));
    } else {
        AbstractProblem& p = job.abstract;
        p.render = render;
        if (auto v = take("mmax")) p.mmax = detail::parse_int("mmax", *v);
        if (p.mmax < 1) throw TypeMismatch("mmax must be positive");
        if (auto v = take("variable")) {
            if (*v == "x") p.variable = VariableChoice::X;
            else if (*v == "z") p.variable = VariableChoice::Zeta;
            else throw TypeMismatch("variable expects x/z, got '" + *v + "'");
        }
        if (auto v = take("y1_zero")) p.y1_zero = detail::parse_yn("y1_zero", *v);
        p.render.var = p.var_name();
    }

    if (!kv.empty()) throw UnknownKey(kv.begin()->first + " (for this job kind)");
    return job;
}

// registers a job's positivity declarations engine-wide
inline void apply_assumptions(const std::vector<std::string>& positive) {
    Assumptions::instance().clear();
    for (const auto& s : positive) Assumptions::instance().set_positive(s, true);
}

}  // namespace pia
