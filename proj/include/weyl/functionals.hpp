#pragma once

#include <vector>

#include "weyl/core.hpp"
#include "weyl/geometry.hpp"
#include "weyl/grid.hpp"
#include "weyl/trajectory.hpp"
#include "weyl/types.hpp"

namespace weyl {

// Optimization target: a fixed gate (phase-sensitive) or its local
// equivalence class. Class targets carry the constants
// a0 = Tr^2{m_O}/(16 det O) and b0 = (Tr^2{m_O} - Tr{m_O^2})/(4 det O).
struct TargetSpec {
    enum class Kind { DirectGate, EquivalenceClass };

    Kind kind = Kind::DirectGate;
    GateMatrix gate;
    Complex a0{0, 0};
    Complex b0{0, 0};

    static TargetSpec direct(GateMatrix o);
    static TargetSpec equivalence_class(GateMatrix representative);
};

// Value of the total functional J = J_T + g_a + g_b, with its parts.
struct FunctionalValue {
    double j_t = 0.0;
    double g_a = 0.0;
    double g_b = 0.0;
    double total() const { return j_t + g_a + g_b; }
};

// J_T^D = 1 - (1/N) Re Tr{O^+ U_{T,N}}; phase sensitive, zero only for a
// perfectly phase-aligned implementation.
double j_direct(const std::vector<StateVector>& states_at_T, const GateMatrix& o,
                const SubspaceProjector& logical);
double j_direct_gate(const GateMatrix& u_tn, const GateMatrix& o);

// g_a = lambda_a int (eps - eps_ref)^2 / S dt by midpoint quadrature.
double j_fluence(const ControlField& field, const ControlField& ref, const ShapeFunction& shape,
                 double lambda_a);

// g_b = (lambda_b / N T) int sum_m <phi_m|P_avoid|phi_m> dt (trapezoid).
double j_avoid(const TrajectorySet& trajectories, const SubspaceProjector& p_avoid,
               double lambda_b);

// The lambda-independent avoidance integral (1/NT) int sum_m <..> dt.
double avoid_integral(const TrajectorySet& trajectories, const SubspaceProjector& p_avoid);

// J_T^LI = f1^2 + f2^2 + f3^2 + f4^2 + 1 - Tr{U U^+}/N, evaluated as a
// polynomial in the propagated states (no determinant division).
double j_local_invariants(const std::vector<StateVector>& states_at_T, const TargetSpec& target,
                          const SubspaceProjector& logical);
double j_local_invariants_gate(const GateMatrix& u_tn, const TargetSpec& target);

// Reporting route for the same functional: sum_i (g_i(U) - g_i(O))^2 plus
// the unitarity defect, computed through the invariants (det division).
double j_local_invariants_dg(const GateMatrix& u_tn, const GateMatrix& o);

// dJ/d(conj U) of the polynomial J_T^LI, a 4x4 coefficient matrix; the
// determinant derivative enters through the adjugate.
GateMatrix jli_gate_gradient(const GateMatrix& u_tn, const TargetSpec& target);

// Co-states at final time, chi_k(T) = -dJ_T/d<phi_k(T)|, embedded in the
// full Hilbert space (supported on the logical subspace).
std::vector<StateVector> chi_boundary(const std::vector<StateVector>& states_at_T,
                                      const TargetSpec& target, const SubspaceProjector& logical);

// eta_m = (lambda_b / N T) P_avoid |phi_m(t)>, the gradient of the
// avoidance density with respect to <phi_m(t)|.
StateVector avoid_inhomogeneity(const StateVector& state, const SubspaceProjector& p_avoid,
                                double lambda_b, int n_logical, double t_final);

// Adjugate (transposed cofactor matrix) of a 4x4 complex matrix; valid
// also for singular input.
GateMatrix adjugate4(const GateMatrix& m);

}  // namespace weyl
