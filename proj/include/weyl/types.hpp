#pragma once

#include <complex>
#include <Eigen/Dense>

namespace weyl {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// A time-evolved or initial quantum state over the full Hilbert space.
using StateVector = Vector;

// N x N complex matrix over a logical basis (N = 4 for two qubits).
using GateMatrix = Matrix;

inline constexpr Complex IMAG_UNIT{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;

// Default tolerances used across the library.
inline constexpr double UNITARITY_TOL = 1e-9;
inline constexpr double NORM_TOL = 1e-9;
inline constexpr double SINGULAR_DET_TOL = 1e-12;

}  // namespace weyl
