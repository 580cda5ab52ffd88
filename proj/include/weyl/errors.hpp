#pragma once

#include <stdexcept>
#include <string>

namespace weyl {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

// |det U| fell below the singularity threshold; the projected gate lost
// (at least) a full column of norm and invariants are meaningless.
struct NearSingularGate : Error {
    explicit NearSingularGate(double absdet)
        : Error("near-singular projected gate, |det U| = " + std::to_string(absdet)) {}
};

struct ClassMismatch : Error {
    explicit ClassMismatch(double distance, double tol)
        : Error("gates are not in the same local equivalence class: d = " +
                std::to_string(distance) + " > tol = " + std::to_string(tol)) {}
};

struct SpectralBoundViolation : Error {
    explicit SpectralBoundViolation(const std::string& msg)
        : Error("Chebychev series did not converge (spectral bounds too tight?): " + msg) {}
};

struct DivisionByZeroShape : Error {
    explicit DivisionByZeroShape(double t)
        : Error("shape function vanishes at t = " + std::to_string(t) +
                " where the field differs from the reference") {}
};

struct NotDiagonal : Error {
    explicit NotDiagonal(double offdiag_mass)
        : Error("gate is not diagonal enough for a non-local phase, off-diagonal mass = " +
                std::to_string(offdiag_mass)) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

}  // namespace weyl
