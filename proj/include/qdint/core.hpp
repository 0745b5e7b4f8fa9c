#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qdint {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed configs, inconsistent schemes, out-of-range values.
struct ValidationError : Error {
    using Error::Error;
};

// Numerical failure: singular solves, non-convergence, overflow.
struct NumericsError : Error {
    using Error::Error;
};

struct SingularMatrixError : NumericsError {
    double condition_estimate;
    SingularMatrixError(const std::string& msg, double cond)
        : NumericsError(msg + " (estimated condition number " + std::to_string(cond) + ")"),
          condition_estimate(cond)
    {
    }
};

struct ConvergenceError : NumericsError {
    int iterations;
    ConvergenceError(const std::string& msg, int iters)
        : NumericsError(msg + " (iteration cap " + std::to_string(iters) + ")"), iterations(iters)
    {
    }
};

} // namespace qdint
