#pragma once

#include <stdexcept>
#include <string>

#include "psteady/types.hpp"

namespace psteady {

enum class ErrorCode {
    invalid_argument = 1,
    singular_matrix = 2,
    convergence = 3,
    division_by_zero = 4,
    config = 5,
    io = 6,
};

/// Base of every failure raised by the library. The code is what crosses the C boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(const std::string& what) : Error(ErrorCode::singular_matrix, what) {}
};

/// Newton ran out of iterations. Keeps the last iterate for diagnostics.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Vector last_iterate, double residual_norm)
        : Error(ErrorCode::convergence, what),
          last_iterate_(std::move(last_iterate)),
          residual_norm_(residual_norm) {}

    [[nodiscard]] const Vector& last_iterate() const noexcept { return last_iterate_; }
    [[nodiscard]] double residual_norm() const noexcept { return residual_norm_; }

private:
    Vector last_iterate_;
    double residual_norm_;
};

class DivisionByZeroError : public Error {
public:
    explicit DivisionByZeroError(const std::string& what) : Error(ErrorCode::division_by_zero, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

/// Rethrows the in-flight library error with `context` appended, keeping its dynamic type.
[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context);

}  // namespace psteady
