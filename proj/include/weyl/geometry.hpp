#pragma once

#include <array>
#include <string>
#include <vector>

#include "weyl/types.hpp"

namespace weyl {

// Makhlin invariants (g1, g2, g3) of a two-qubit gate class.
struct LocalInvariants {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;

    std::array<double, 3> as_array() const { return {g1, g2, g3}; }
};

// Canonical Weyl-chamber coordinates (c_x >= c_y >= c_z) in radians.
struct WeylPoint {
    double cx = 0.0;
    double cy = 0.0;
    double cz = 0.0;
};

// k1 * canonical * k2 factorization of a two-qubit gate.
struct LocalFactorization {
    GateMatrix k1;
    GateMatrix k2;
    GateMatrix canonical;
    bool degenerate_spectrum = false;  // m-eigenphases coincided within 1e-8
};

// Fixed transformation from the logical basis into the Bell ("magic")
// basis: columns (|00>+|11>, i|00>-i|11>, i|01>+i|10>, |01>-|10>)/sqrt(2).
GateMatrix bell_transform();

// m = U_B^T U_B with U_B = Q^+ U Q; complex symmetric.
GateMatrix m_matrix(const GateMatrix& u);

// g1 = Re Tr{m}^2 / (16 det U), g2 = Im Tr{m}^2 / (16 det U),
// g3 = (Tr{m}^2 - Tr{m^2}) / (4 det U).  Invariant under local operations
// and global phases. Throws NearSingularGate for |det U| <= 1e-12.
LocalInvariants local_invariants(const GateMatrix& u);

// The canonical gate of a class: diagonal in the Bell basis with phases
// (cx-cy+cz, -cx+cy+cz, cx+cy-cz, -(cx+cy+cz))/2, equal to
// exp[+(i/2) sum_j c_j sigma_j x sigma_j].
GateMatrix canonical_gate(const WeylPoint& c);

// Weyl-chamber representative of an arbitrary coordinate triple:
// reduce mod pi, sort descending, reflect (cx,cy) -> (pi-cy, pi-cx) if
// cx+cy > pi, and map cx -> pi-cx on the chamber base (cz = 0, cx > pi/2).
WeylPoint canonicalize(const WeylPoint& c);

// Canonical-chamber point of the class of U, via the eigenphases of m_U.
WeylPoint weyl_coordinates(const GateMatrix& u);

// d = sum_i (g_i(a) - g_i(b))^2
double class_distance(const LocalInvariants& a, const LocalInvariants& b);

// Local operations k1, k2 with k1 U k2 ~ O (up to global phase), for U
// and O in the same equivalence class within class_tol.
LocalFactorization extract_local_factors(const GateMatrix& u, const GateMatrix& o,
                                         double class_tol = 1e-3);

// E = 1 - (1/N) Re Tr{O^+ k1 U k2}; when align_phase is set the global
// phase of k1 U k2 is rotated onto O first.
double gate_error(const GateMatrix& u, const GateMatrix& o, const GateMatrix& k1,
                  const GateMatrix& k2, bool align_phase = true);

// Nearest a (x) b decomposition of a 4x4 matrix (rank-one Kronecker fit);
// returns the residual ||k - a (x) b||_F. Factors are unitarized when k is.
double kron_factor(const GateMatrix& k, Matrix& a, Matrix& b);

// Named classes of Table I style: Weyl point, invariants, representative.
struct NamedClass {
    std::string name;
    WeylPoint c;
    LocalInvariants g;
    GateMatrix representative;
};

// Identity, CNOT, CPHASE, B-gate, sqrt(SWAP), SWAP.
const std::vector<NamedClass>& equivalence_class_table();

// Entry of the table nearest to g (by class_distance), with the distance.
std::pair<const NamedClass*, double> nearest_named_class(const LocalInvariants& g);

// Common constant gates.
GateMatrix gate_identity();
GateMatrix gate_cnot();
GateMatrix gate_cphase();
GateMatrix gate_swap();
GateMatrix gate_b();
GateMatrix gate_sqrt_swap();
// U_d = -(1/sqrt 2) diag(1-i, 1+i, 1+i, 1-i)
GateMatrix gate_ud();

}  // namespace weyl
