#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prodnet {

// Root of every error the library throws on bad input or failed computation.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Table body is not square or rows disagree with the header.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A cell that is negative or not a number. Coordinates are 1-based as seen in
// the source file (row 1 is the header row, column 1 the code column).
class ValueError : public Error {
public:
    ValueError(const std::string& what, std::size_t row, std::size_t column)
        : Error(what), row_(row), column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class DuplicateCodeError : public Error {
public:
    DuplicateCodeError(const std::string& what, std::string code)
        : Error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Requested edge count exceeds n*(n-1).
class CapacityError : public Error {
public:
    using Error::Error;
};

// Power-law/exponent fit that has no admissible parameters.
class FitError : public Error {
public:
    FitError(const std::string& what, double c_in, double c_out)
        : Error(what), c_in_(c_in), c_out_(c_out) {}

    double c_in() const noexcept { return c_in_; }
    double c_out() const noexcept { return c_out_; }

private:
    double c_in_;
    double c_out_;
};

class EmptySampleError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
        : Error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
};

class MetricMismatchError : public Error {
public:
    using Error::Error;
};

// Out-of-range numeric arguments (grid bounds, damping, parameter simplex).
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace prodnet
