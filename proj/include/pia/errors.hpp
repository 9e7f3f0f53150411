// Error hierarchy shared by the whole library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pia {

// Base for everything thrown by the engine.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression-text parse failure, with byte position and what was expected.
struct SyntaxError : Error {
    std::size_t position;
    std::string expected;
    SyntaxError(std::size_t pos, const std::string& expected_, const std::string& found)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected_ +
                ", found " + found),
          position(pos),
          expected(expected_) {}
};

// Job-file level failures.
struct JobError : Error {
    using Error::Error;
};
struct UnknownKey : JobError {
    explicit UnknownKey(const std::string& key) : JobError("unknown job-file key: " + key) {}
};
struct MissingRequiredField : JobError {
    explicit MissingRequiredField(const std::string& key)
        : JobError("missing required job-file field: " + key) {}
};
struct TypeMismatch : JobError {
    explicit TypeMismatch(const std::string& what) : JobError("bad job-file value: " + what) {}
};

// Engine-level failures.
struct DomainError : Error {
    using Error::Error;
};
struct NotLinearInI : Error {
    explicit NotLinearInI(const std::string& what)
        : Error("expression is not linear in i: " + what) {}
};
struct NotIntegrable : Error {
    explicit NotIntegrable(const std::string& what) : Error("not integrable: " + what) {}
};
struct ZeroDenominator : DomainError {
    explicit ZeroDenominator(const std::string& what) : DomainError("zero denominator: " + what) {}
};
struct SignUndeterminable : Error {
    explicit SignUndeterminable(const std::string& what)
        : Error("cannot determine sign: " + what) {}
};
struct UnboundSymbol : Error {
    explicit UnboundSymbol(const std::string& name) : Error("unbound symbol: " + name) {}
};
struct UnknownFunction : Error {
    explicit UnknownFunction(const std::string& name)
        : Error("no definition for function: " + name) {}
};
struct SingularPoint : Error {
    explicit SingularPoint(const std::string& what) : Error("singular point: " + what) {}
};

}  // namespace pia

// FactorizationOutOfScope carries the fallback (together) form; it is declared
// in calculus.hpp where Expr is complete.
