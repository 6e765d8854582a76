#pragma once

#include <stdexcept>
#include <string>

namespace specfam {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented domain (A not >= 0, x outside F(A,n), ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Malformed input file or unsupported format variant.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace specfam
