// Recursive-descent parser for the expression language.
//
// Grammar (explicit '*' required, no juxtaposition):
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?          -- right associative
//   primary := INTEGER | IDENT '\''* '(' expr ')' | IDENT | 'i' | '(' expr ')'
// Rationals are written p/q (ordinary division). Function calls cover the
// builtins sin cos tan sqrt exp log and opaque user functions; primes on a
// user function denote derivative order, e.g. h0''(x).
#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "pia/errors.hpp"
#include "pia/expr.hpp"

namespace pia {

namespace detail {

class ExprParser {
  public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("end of input");
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'"
                                                : std::string("end of input");
        throw SyntaxError(pos_, expected, found);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("'") + c + "'");
    }

    Expr expr() {
        Expr e = term();
        for (;;) {
            if (accept('+'))
                e = e + term();
            else if (accept('-'))
                e = e - term();
            else
                return e;
        }
    }

    Expr term() {
        Expr e = factor();
        for (;;) {
            if (accept('*'))
                e = e * factor();
            else if (accept('/'))
                e = e / factor();
            else
                return e;
        }
    }

    Expr factor() {
        if (accept('-')) return -factor();
        return power();
    }

    Expr power() {
        Expr b = primary();
        if (accept('^')) return Expr::pow(b, factor());
        return b;
    }

    Expr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return integer();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("a number, a name or '('");
    }

    Expr integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.')
            throw SyntaxError(pos_, "an integer (decimal literals are not part of the grammar)",
                              "'.'");
        return Expr::number(Rational(BigInt(std::string(text_.substr(start, pos_ - start)))));
    }

    Expr identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        int primes = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (peek() == '(') {
            ++pos_;
            if (name == "i") fail("a function name (i is the imaginary unit)");
            Expr arg = expr();
            expect(')');
            if (name == "sqrt" || is_builtin_function(name)) {
                if (primes != 0)
                    throw SyntaxError(start, "no derivative primes on builtin functions",
                                      "'" + name + "'");
                return Expr::call(name, arg);
            }
            return Expr::call(name, arg, primes);
        }
        if (primes != 0) fail("'(' after derivative primes");
        if (name == "i") return Expr::i();
        return Expr::sym(name);
    }
};

}  // namespace detail

inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

}  // namespace pia
