// Truncated complex Taylor series ("jets") at a point: the numeric value
// type of the cross-validation oracle. Coefficients store f^(k)(x0)/k!.
#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <map>
#include <vector>

#include "pia/errors.hpp"
#include "pia/expr.hpp"

namespace pia {

using Complex = std::complex<double>;
using BigComplex = boost::multiprecision::cpp_complex_50;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline double mag(const Complex& z) { return std::abs(z); }
inline double mag(const BigComplex& z) { return abs(z).convert_to<double>(); }

template <class C>
C scalar_from_rational(const Rational& r);

template <>
inline Complex scalar_from_rational<Complex>(const Rational& r) {
    return {num(r).convert_to<double>() / den(r).convert_to<double>(), 0.0};
}
template <>
inline BigComplex scalar_from_rational<BigComplex>(const Rational& r) {
    return BigComplex(BigFloat(num(r)) / BigFloat(den(r)));
}

template <class C>
struct Jet {
    std::vector<C> a;  // truncation order K = a.size() - 1

    Jet() = default;
    explicit Jet(std::size_t n) : a(n, C(0)) {}

    static Jet constant(const C& v, int order) {
        Jet j(static_cast<std::size_t>(order) + 1);
        j.a[0] = v;
        return j;
    }
    static Jet variable(const C& x0, int order) {
        Jet j(static_cast<std::size_t>(order) + 1);
        j.a[0] = x0;
        if (order >= 1) j.a[1] = C(1);
        return j;
    }
    int order() const { return static_cast<int>(a.size()) - 1; }
    const C& value() const { return a[0]; }

    // d/dx: one order is consumed
    Jet derivative() const {
        if (a.size() <= 1) return Jet::constant(C(0), 0);
        Jet d(a.size() - 1);
        for (std::size_t k = 1; k < a.size(); ++k) d.a[k - 1] = a[k] * C(static_cast<double>(k));
        return d;
    }
    Jet conjugated() const {
        using std::conj;
        Jet j = *this;
        for (auto& x : j.a) x = conj(x);
        return j;
    }
};

namespace detail {
template <class C>
std::size_t common_len(const Jet<C>& x, const Jet<C>& y) {
    return std::min(x.a.size(), y.a.size());
}
}  // namespace detail

template <class C>
Jet<C> operator+(const Jet<C>& x, const Jet<C>& y) {
    std::size_t n = detail::common_len(x, y);
    Jet<C> z(n);
    for (std::size_t k = 0; k < n; ++k) z.a[k] = x.a[k] + y.a[k];
    return z;
}
template <class C>
Jet<C> operator-(const Jet<C>& x, const Jet<C>& y) {
    std::size_t n = detail::common_len(x, y);
    Jet<C> z(n);
    for (std::size_t k = 0; k < n; ++k) z.a[k] = x.a[k] - y.a[k];
    return z;
}
template <class C>
Jet<C> operator-(const Jet<C>& x) {
    Jet<C> z = x;
    for (auto& v : z.a) v = -v;
    return z;
}
template <class C>
Jet<C> operator*(const Jet<C>& x, const Jet<C>& y) {
    std::size_t n = detail::common_len(x, y);
    Jet<C> z(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) z.a[i + j] += x.a[i] * y.a[j];
    return z;
}

template <class C>
Jet<C> jet_div(const Jet<C>& x, const Jet<C>& y, double floor = 1e-12) {
    std::size_t n = detail::common_len(x, y);
    if (mag(y.a[0]) <= floor) throw SingularPoint("division by a vanishing jet");
    Jet<C> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        C s = k < x.a.size() ? x.a[k] : C(0);
        for (std::size_t j = 0; j < k; ++j) s -= z.a[j] * y.a[k - j];
        z.a[k] = s / y.a[0];
    }
    return z;
}
template <class C>
Jet<C> operator/(const Jet<C>& x, const Jet<C>& y) {
    return jet_div(x, y);
}

template <class C>
Jet<C> jet_sqrt(const Jet<C>& u, double floor = 1e-12) {
    using std::sqrt;
    if (mag(u.a[0]) <= floor) throw SingularPoint("sqrt of a vanishing jet");
    Jet<C> w(u.a.size());
    w.a[0] = sqrt(u.a[0]);
    for (std::size_t k = 1; k < u.a.size(); ++k) {
        C s = u.a[k];
        for (std::size_t j = 1; j < k; ++j) s -= w.a[j] * w.a[k - j];
        w.a[k] = s / (C(2) * w.a[0]);
    }
    return w;
}

template <class C>
Jet<C> jet_exp(const Jet<C>& u) {
    using std::exp;
    Jet<C> w(u.a.size());
    w.a[0] = exp(u.a[0]);
    for (std::size_t k = 1; k < u.a.size(); ++k) {
        C s(0);
        for (std::size_t j = 1; j <= k; ++j) s += C(static_cast<double>(j)) * u.a[j] * w.a[k - j];
        w.a[k] = s / C(static_cast<double>(k));
    }
    return w;
}

template <class C>
Jet<C> jet_log(const Jet<C>& u, double floor = 1e-12) {
    using std::log;
    if (mag(u.a[0]) <= floor) throw SingularPoint("log of a vanishing jet");
    Jet<C> w(u.a.size());
    w.a[0] = log(u.a[0]);
    for (std::size_t k = 1; k < u.a.size(); ++k) {
        C s = C(static_cast<double>(k)) * u.a[k];
        for (std::size_t j = 1; j < k; ++j) s -= C(static_cast<double>(j)) * w.a[j] * u.a[k - j];
        w.a[k] = s / (C(static_cast<double>(k)) * u.a[0]);
    }
    return w;
}

template <class C>
std::pair<Jet<C>, Jet<C>> jet_sincos(const Jet<C>& u) {
    using std::cos;
    using std::sin;
    Jet<C> s(u.a.size()), c(u.a.size());
    s.a[0] = sin(u.a[0]);
    c.a[0] = cos(u.a[0]);
    for (std::size_t k = 1; k < u.a.size(); ++k) {
        C ss(0), cs(0);
        for (std::size_t j = 1; j <= k; ++j) {
            ss += C(static_cast<double>(j)) * u.a[j] * c.a[k - j];
            cs += C(static_cast<double>(j)) * u.a[j] * s.a[k - j];
        }
        s.a[k] = ss / C(static_cast<double>(k));
        c.a[k] = -cs / C(static_cast<double>(k));
    }
    return {s, c};
}

template <class C>
Jet<C> jet_ipow(const Jet<C>& u, long long n, double floor = 1e-12) {
    if (n == 0) return Jet<C>::constant(C(1), u.order());
    bool inv = n < 0;
    unsigned long long m = inv ? static_cast<unsigned long long>(-n)
                               : static_cast<unsigned long long>(n);
    Jet<C> out = Jet<C>::constant(C(1), u.order()), base = u;
    while (m) {
        if (m & 1) out = out * base;
        if (m > 1) base = base * base;
        m >>= 1;
    }
    if (inv) return jet_div(Jet<C>::constant(C(1), u.order()), out, floor);
    return out;
}

// u^alpha for fractional alpha (principal branch)
template <class C>
Jet<C> jet_pow(const Jet<C>& u, const C& alpha, double floor = 1e-12) {
    using std::pow;
    if (mag(u.a[0]) <= floor) throw SingularPoint("fractional power of a vanishing jet");
    Jet<C> w(u.a.size());
    w.a[0] = pow(u.a[0], alpha);
    for (std::size_t k = 1; k < u.a.size(); ++k) {
        C s(0);
        for (std::size_t j = 1; j <= k; ++j) {
            C f = (alpha + C(1)) * C(static_cast<double>(j)) - C(static_cast<double>(k));
            s += f * u.a[j] * w.a[k - j];
        }
        w.a[k] = s / (C(static_cast<double>(k)) * u.a[0]);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Expression evaluation into jets.

template <class C>
struct EvalContext {
    std::string var = "x";
    C x0{};
    int order = 0;
    std::map<std::string, C> params;
    double floor = 1e-12;
};

template <class C>
Jet<C> jet_eval(const Expr& e, const EvalContext<C>& ctx) {
    switch (e.kind()) {
        case Kind::Rational:
            return Jet<C>::constant(scalar_from_rational<C>(e.rational()), ctx.order);
        case Kind::ImagUnit: return Jet<C>::constant(C(0, 1), ctx.order);
        case Kind::Symbol: {
            if (e.name() == ctx.var) return Jet<C>::variable(ctx.x0, ctx.order);
            auto it = ctx.params.find(e.name());
            if (it == ctx.params.end()) throw UnboundSymbol(e.name());
            return Jet<C>::constant(it->second, ctx.order);
        }
        case Kind::Sum: {
            Jet<C> s = Jet<C>::constant(C(0), ctx.order);
            for (const auto& t : e.args()) s = s + jet_eval(t, ctx);
            return s;
        }
        case Kind::Product: {
            Jet<C> p = Jet<C>::constant(C(1), ctx.order);
            for (const auto& f : e.args()) p = p * jet_eval(f, ctx);
            return p;
        }
        case Kind::Power: {
            Jet<C> b = jet_eval(e.base(), ctx);
            if (e.exponent().is_integer())
                return jet_ipow(b, num(e.exponent().rational()).convert_to<long long>(),
                                ctx.floor);
            if (e.exponent().is_rational()) {
                const Rational& r = e.exponent().rational();
                if (r == Rational(1, 2)) return jet_sqrt(b, ctx.floor);
                C alpha = scalar_from_rational<C>(r);
                return jet_pow(b, alpha, ctx.floor);
            }
            Jet<C> w = jet_eval(e.exponent(), ctx);
            return jet_exp(w * jet_log(b, ctx.floor));
        }
        case Kind::Call: {
            if (e.call_deriv() > 0) throw UnknownFunction(e.name());
            Jet<C> u = jet_eval(e.call_arg(), ctx);
            const std::string& fn = e.name();
            if (fn == "sin") return jet_sincos(u).first;
            if (fn == "cos") return jet_sincos(u).second;
            if (fn == "tan") {
                auto [s, c] = jet_sincos(u);
                return jet_div(s, c, ctx.floor);
            }
            if (fn == "exp") return jet_exp(u);
            if (fn == "log") return jet_log(u, ctx.floor);
            throw UnknownFunction(fn);
        }
    }
    throw DomainError("internal: unreachable node kind");
}

// convenience: plain complex value (order-0 jet)
template <class C>
C eval_value(const Expr& e, const EvalContext<C>& ctx) {
    EvalContext<C> c0 = ctx;
    c0.order = 0;
    return jet_eval(e, c0).value();
}

}  // namespace pia
