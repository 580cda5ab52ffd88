#pragma once

#include <memory>

#include "weyl/problem.hpp"

namespace weyl {

// Physical constants (SI) and the unit conversions used by the models.
// Spin-spin model units: time in us, energies in rad/us.
// Rydberg model units: time in ns, energies in rad/ns, lengths in um.
namespace constants {
inline constexpr double HBAR_SI = 1.054571817e-34;        // J s
inline constexpr double HARTREE_SI = 4.3597447222071e-18; // J
inline constexpr double BOHR_SI = 5.29177210903e-11;      // m
inline constexpr double KB_SI = 1.380649e-23;             // J/K
inline constexpr double AMU_SI = 1.66053906660e-27;       // kg
inline constexpr double RB87_MASS_AMU = 86.909180531;

// E_h a0^3 -> rad/ns * um^3 (for the u0 / r^3 interaction)
double hartree_bohr3_to_radns_um3();
// J -> rad/ns
double joule_to_radns();
// kg -> ns / um^2 (mass parameter with hbar = 1)
double kg_to_ns_per_um2();
}  // namespace constants

// Effective spin-spin model, Hamiltonian H(t) = H0 + S(t) H1 with the
// matrices in rad/us over the logical two-qubit basis.
struct SpinSpinParams {
    enum class Variant { CnotParams, BgateParams };

    Matrix h0;
    Matrix h1;
    Variant variant = Variant::CnotParams;
    bool paper_exact = true;

    // Drift and control matrices for the CNOT field parameters.
    static SpinSpinParams cnot_params();
    // Same matrix structure; the source reference does not print the B-gate
    // numbers, so this set reuses them and is flagged not paper-exact.
    static SpinSpinParams bgate_params();
};

enum class EnvelopeMode {
    Tanh,    // S(t) = (tanh eps + 1)/2, bound [0,1] built in
    Linear,  // eps is the envelope itself (no bound enforcement)
};

ControlProblem build_spinspin(const SpinSpinParams& params, double t_final, int n_steps,
                              TargetSpec target, EnvelopeMode mode = EnvelopeMode::Tanh);

// Two trapped atoms with levels |0>, |1>, |i>, |r> per atom.
struct RydbergParams {
    double omega_r0 = TWO_PI * 0.26;  // peak red Rabi frequency, rad/ns
    double omega_b0 = TWO_PI * 0.26;  // peak blue Rabi frequency, rad/ns
    double delta_r = TWO_PI * 0.6;    // red detuning, rad/ns
    double u0_au = 3.284e6;           // interaction coefficient, E_h a0^3
    double r0_um = 4.0;               // atom separation, um
    double grid_halfwidth_um = 0.3;
    double trap_sigma_um = 0.75;
    double trap_depth_mK = 4.5;       // |V_min| in k_B mK
    double gamma_i = 1.0 / 27.7;      // |i> decay rate, 1/ns (5p_1/2)
    bool decay_on = false;
    bool trap_on = true;

    // Two-photon detuning from the Stark-shift relation; zero for equal
    // peak Rabi frequencies regardless of the red detuning.
    double delta_b() const {
        const double num = omega_b0 * omega_b0 - omega_r0 * omega_r0;
        return num == 0.0 ? 0.0 : num / (4 * delta_r);
    }
    // u0 in rad/ns um^3.
    double u0_radns_um3() const;
    // Fixed interaction energy u0 / r0^3 in rad/ns.
    double interaction_energy() const { return u0_radns_um3() / std::pow(r0_um, 3); }
    // Relative-motion trap frequency (rad/ns) and reduced-mass parameter
    // (ns/um^2, hbar = 1).
    double trap_omega() const;
    double reduced_mass() const;
};

// Basis ordering of the two-atom internal space: index 4 a + b with
// a, b in {0:|0>, 1:|1>, 2:|i>, 3:|r>}; logical subspace {0, 1, 4, 5}.
std::vector<int> rydberg_logical_indices();
std::vector<int> rydberg_avoid_indices();  // states with either atom in |i>

// Internal-level model: motion replaced by the fixed interaction u0/r0^3.
ControlProblem build_rydberg_internal(const RydbergParams& params, double t_final, int n_steps,
                                      TargetSpec target);

// Grid-resolved model: internal (x) relative motion on a Fourier grid.
ControlProblem build_rydberg_grid(const RydbergParams& params, double t_final, int n_steps,
                                  std::shared_ptr<FourierGrid> grid, TargetSpec target);

// Relative-motion trap ground state, l2-normalized on the grid.
Vector trap_ground_state(const RydbergParams& params, const FourierGrid& grid);

// chi = phi00 - phi01 - phi10 + phi11 mod 2 pi, in (-pi, pi]. Throws
// NotDiagonal when the off-diagonal Frobenius mass exceeds the threshold.
double nonlocal_phase(const GateMatrix& u_diag, double offdiag_threshold = 0.05);

}  // namespace weyl
