#pragma once

#include <stdexcept>
#include <string>

namespace ydvl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Torus Poisson problem with a right-hand side that is not mean-free.
struct MeanNotZero : Error {
    using Error::Error;
};

// Iterative elliptic solve ran out of its iteration budget.
struct NoConvergence : Error {
    int iterations;
    double residual;
    NoConvergence(const std::string& what, int iters, double resid)
        : Error(what), iterations(iters), residual(resid) {}
};

// Density reached zero or below somewhere on the grid.
struct VacuumViolated : Error {
    using Error::Error;
};

// Velocity magnitude exceeded the instability guard.
struct BlowupDetected : Error {
    using Error::Error;
};

struct OutOfRange : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(const std::string& what, int line_no) : Error(what), line(line_no) {}
};

struct ValidationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

}  // namespace ydvl
