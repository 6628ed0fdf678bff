#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace curvspec {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression or curve file. `position` is a 0-based offset into the
/// offending text (or line number for curve files).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Numerical evaluation failed (division by zero). Carries the printed subtree.
class EvalError : public Error {
public:
    EvalError(const std::string& what, std::string subtree)
        : Error(what + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

    const std::string& subtree() const noexcept { return subtree_; }

private:
    std::string subtree_;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Curve fails closure, regularity or simplicity requirements.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + format_residual(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    static std::string format_residual(double r) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", r);
        return buf;
    }

    double residual_;
};

/// Error raised inside analyze_curve, tagged with the stage that failed.
class AnalysisError : public Error {
public:
    AnalysisError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

} // namespace curvspec
