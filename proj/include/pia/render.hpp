// Output forms: Plain (round-trips through parse_expr), TeX math fragments,
// and Fortran expressions. Fraction styles apply Apart/Together first.
#pragma once

#include <sstream>
#include <string>

#include "pia/calculus.hpp"
#include "pia/expr.hpp"

namespace pia {

enum class OutputForm { Plain, TeX, Fortran };
enum class FractionStyle { SimpleFractions, CommonDenominator, None };

struct RenderSpec {
    OutputForm form = OutputForm::Plain;
    FractionStyle fractions = FractionStyle::None;
    std::string var = "x";  // Apart variable for SimpleFractions
};

namespace detail {

// splits a product into numerator/denominator factor lists (sign separate)
struct FracParts {
    bool negative = false;
    Rational coeff_num = 1, coeff_den = 1;
    ExprList num, den;
};

inline FracParts split_fraction(const Expr& e) {
    FracParts out;
    ExprList factors = e.kind() == Kind::Product ? e.args() : ExprList{e};
    for (const auto& f : factors) {
        if (f.is_rational()) {
            Rational r = f.rational();
            if (r < 0) {
                out.negative = !out.negative;
                r = -r;
            }
            out.coeff_num *= Rational(num(r));
            out.coeff_den *= Rational(den(r));
        } else if (f.kind() == Kind::Power && f.exponent().is_rational() &&
                   f.exponent().rational() < 0) {
            Expr flipped = Expr::pow(f.base(), Expr::number(-f.exponent().rational()));
            out.den.push_back(flipped);
        } else {
            out.num.push_back(f);
        }
    }
    return out;
}

class Renderer {
  public:
    explicit Renderer(OutputForm form) : form_(form) {}

    std::string render(const Expr& e) { return sum_level(e); }

  private:
    OutputForm form_;

    std::string sum_level(const Expr& e) {
        if (e.kind() != Kind::Sum) return term_level(e);
        std::string out;
        bool first = true;
        for (const auto& t : e.args()) {
            FracParts p = split_fraction(t);
            if (first) {
                out += term_level(t);
                first = false;
                continue;
            }
            if (p.negative) {
                Expr pos = -t;
                out += " - " + term_level(pos);
            } else {
                out += " + " + term_level(t);
            }
        }
        return out;
    }

    std::string term_level(const Expr& e) {
        if (e.kind() == Kind::Sum) return paren(sum_level(e));
        FracParts p = split_fraction(e);
        std::string sign = p.negative ? "-" : "";
        // numerator
        std::vector<std::string> nums;
        if (p.coeff_num != 1 || (p.num.empty() && p.den.empty() && p.coeff_den == 1))
            nums.push_back(p.coeff_num.str());
        for (const auto& f : p.num) nums.push_back(factor_level(f));
        if (nums.empty()) nums.push_back("1");
        std::vector<std::string> dens;
        if (p.coeff_den != 1) dens.push_back(p.coeff_den.str());
        for (const auto& f : p.den) dens.push_back(factor_level(f));

        if (form_ == OutputForm::TeX && !dens.empty()) {
            std::string n = join(nums, mul_op());
            std::string d = join(dens, mul_op());
            return sign + "\\frac{" + n + "}{" + d + "}";
        }
        std::string out = sign + join(nums, mul_op());
        if (!dens.empty()) {
            if (dens.size() == 1 && is_atomic_or_power(dens.front()))
                out += "/" + dens.front();
            else if (dens.size() == 1 && fully_parenthesized(dens.front()))
                out += "/" + dens.front();
            else
                out += "/(" + join(dens, mul_op()) + ")";
        }
        return out;
    }

    // whole string already wrapped in one balanced pair of parentheses
    static bool fully_parenthesized(const std::string& s) {
        if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
        int depth = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')') {
                --depth;
                if (depth == 0 && i + 1 != s.size()) return false;
            }
        }
        return depth == 0;
    }

    static bool is_atomic_or_power(const std::string& s) {
        // safe to print after '/' without parentheses
        for (char c : s)
            if (c == '+' || c == '-' || c == '*' || c == '/' || c == ' ') return false;
        return !s.empty();
    }

    std::string factor_level(const Expr& e) {
        switch (e.kind()) {
            case Kind::Sum: return paren(sum_level(e));
            case Kind::Product: return paren(sum_level(e));
            case Kind::Rational: {
                const Rational& r = e.rational();
                if (pia::is_integer(r) && r >= 0) return num(r).str();
                return paren(rational_str(r));
            }
            default: return power_level(e);
        }
    }

    std::string rational_str(const Rational& r) {
        if (form_ == OutputForm::TeX && !pia::is_integer(r)) {
            std::string s = r < 0 ? "-" : "";
            return s + "\\frac{" + BigInt(abs(num(r))).str() + "}{" + den(r).str() + "}";
        }
        if (form_ == OutputForm::Fortran && !pia::is_integer(r)) {
            std::string s = r < 0 ? "-" : "";
            return s + BigInt(abs(num(r))).str() + ".0d0/" + den(r).str() + ".0d0";
        }
        return pia::is_integer(r) ? num(r).str() : num(r).str() + "/" + den(r).str();
    }

    std::string power_level(const Expr& e) {
        if (e.kind() != Kind::Power) return atom(e);
        const Expr& b = e.base();
        const Expr& x = e.exponent();
        if (x.is_rational() && x.rational() == Rational(1, 2)) {
            std::string arg = sum_level(b);
            switch (form_) {
                case OutputForm::TeX: return "\\sqrt{" + arg + "}";
                default: return "sqrt(" + arg + ")";
            }
        }
        // sqrt(b)^p for odd half-integer exponents keeps the Plain form parseable
        if (x.is_rational() && den(x.rational()) == 2 && form_ != OutputForm::TeX) {
            BigInt p = num(x.rational());
            std::string root = "sqrt(" + sum_level(b) + ")";
            if (p == 1) return root;
            return root + pow_op() + exponent_str(Expr::number(Rational(p)));
        }
        std::string base = base_str(b);
        return base + pow_op() + exponent_str(x);
    }

    std::string base_str(const Expr& b) {
        bool atomic = b.kind() == Kind::Symbol || b.kind() == Kind::ImagUnit ||
                      (b.kind() == Kind::Call) ||
                      (b.is_rational() && pia::is_integer(b.rational()) && b.rational() >= 0);
        std::string s = atomic ? atom(b) : paren(sum_level(b));
        return s;
    }

    std::string exponent_str(const Expr& x) {
        if (form_ == OutputForm::TeX) return "{" + sum_level(x) + "}";
        if (x.is_rational()) {
            const Rational& r = x.rational();
            if (pia::is_integer(r) && r >= 0) return num(r).str();
            return paren(rational_str(r));
        }
        return paren(sum_level(x));
    }

    std::string atom(const Expr& e) {
        switch (e.kind()) {
            case Kind::Rational: {
                const Rational& r = e.rational();
                if (r < 0) return paren(rational_str(r));
                return rational_str(r);
            }
            case Kind::ImagUnit:
                return form_ == OutputForm::Fortran ? std::string("(0,1)") : std::string("i");
            case Kind::Symbol: return sym_str(e.name());
            case Kind::Call: return call_str(e);
            default: return paren(sum_level(e));
        }
    }

    std::string sym_str(const std::string& name) { return name; }

    std::string call_str(const Expr& e) {
        std::string arg = sum_level(e.call_arg());
        const std::string& fn = e.name();
        switch (form_) {
            case OutputForm::TeX: {
                std::string head;
                if (fn == "sin" || fn == "cos" || fn == "tan" || fn == "log" || fn == "exp")
                    head = "\\" + fn;
                else
                    head = "\\operatorname{" + fn + "}";
                std::string primes(static_cast<std::size_t>(e.call_deriv()), '\'');
                return head + primes + "(" + arg + ")";
            }
            case OutputForm::Fortran: {
                if (e.call_deriv() > 0)
                    return fn + "_d" + std::to_string(e.call_deriv()) + "(" + arg + ")";
                return fn + "(" + arg + ")";
            }
            default: {
                std::string primes(static_cast<std::size_t>(e.call_deriv()), '\'');
                return fn + primes + "(" + arg + ")";
            }
        }
    }

    std::string mul_op() const {
        switch (form_) {
            case OutputForm::TeX: return " ";
            default: return "*";
        }
    }
    std::string pow_op() const {
        switch (form_) {
            case OutputForm::TeX: return "^";
            case OutputForm::Fortran: return "**";
            default: return "^";
        }
    }

    static std::string paren(const std::string& s) { return "(" + s + ")"; }
    static std::string join(const std::vector<std::string>& xs, const std::string& sep) {
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out += sep;
            out += xs[i];
        }
        return out;
    }
};

}  // namespace detail

inline std::string render(const Expr& e, const RenderSpec& spec = {}) {
    Expr shown = e;
    try {
        switch (spec.fractions) {
            case FractionStyle::SimpleFractions: shown = apart(e, spec.var); break;
            case FractionStyle::CommonDenominator: shown = together(e); break;
            case FractionStyle::None: break;
        }
    } catch (const FactorizationOutOfScope& oos) {
        shown = oos.together_form;
    } catch (const Error&) {
        shown = e;  // renderer stays total
    }
    return detail::Renderer(spec.form).render(shown);
}

inline std::string result_extension(OutputForm f) {
    switch (f) {
        case OutputForm::TeX: return ".resTeX";
        case OutputForm::Fortran: return ".resFor";
        default: return ".res";
    }
}

}  // namespace pia
