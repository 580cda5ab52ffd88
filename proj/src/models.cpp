#include "weyl/models.hpp"

#include <cmath>

#include "weyl/errors.hpp"

namespace weyl {

namespace constants {

double hartree_bohr3_to_radns_um3() {
    // E_h a0^3 / hbar [m^3/s] -> um^3 / ns: x 1e18 / 1e9
    return HARTREE_SI * BOHR_SI * BOHR_SI * BOHR_SI / HBAR_SI * 1e9;
}

double joule_to_radns() { return 1.0 / HBAR_SI * 1e-9; }

double kg_to_ns_per_um2() {
    // m/hbar [s/m^2] -> ns/um^2: x 1e9 / 1e12
    return 1.0 / HBAR_SI * 1e-3;
}

}  // namespace constants

SpinSpinParams SpinSpinParams::cnot_params() {
    SpinSpinParams p;
    p.h0.resize(4, 4);
    p.h0 << 5.711, 0.324, 0.324, 0.0,
            0.324, -1.840, 1.054, 0.0,
            0.324, 1.054, 1.840, 0.0,
            0.0, 0.0, 0.0, -2.030;
    p.h1.resize(4, 4);
    p.h1 << -153.65, 0.0, 0.0, 3.906,
            0.0, 153.65, 16.085, 0.0,
            0.0, 16.085, 153.65, 0.0,
            3.906, 0.0, 0.0, -153.65;
    p.variant = Variant::CnotParams;
    p.paper_exact = true;
    return p;
}

SpinSpinParams SpinSpinParams::bgate_params() {
    // The source prints no matrices for the B-gate field parameters (cw Rabi
    // 4.74 MHz, pulse detuning 84 kHz); the structure is unchanged, so this
    // placeholder reuses the CNOT-parameter matrices.
    SpinSpinParams p = cnot_params();
    p.variant = Variant::BgateParams;
    p.paper_exact = false;
    return p;
}

ControlProblem build_spinspin(const SpinSpinParams& params, double t_final, int n_steps,
                              TargetSpec target, EnvelopeMode mode) {
    if (params.h0.rows() != 4 || params.h1.rows() != 4)
        throw DimensionMismatch("spin-spin matrices must be 4x4");
    DenseHamiltonian::Coupling coupling;
    coupling.hc = params.h1;
    coupling.field_index = 0;
    coupling.map = (mode == EnvelopeMode::Tanh)
                       ? AmplitudeMap{AmplitudeMap::Kind::Tanh01, 1.0}
                       : AmplitudeMap{AmplitudeMap::Kind::Linear, 1.0};

    ControlProblem p;
    p.model = std::make_shared<DenseHamiltonian>(params.h0, std::vector{coupling}, 1);
    p.logical = SubspaceProjector({0, 1, 2, 3}, 4);
    p.grid = TimeGrid(t_final, n_steps);
    p.target = std::move(target);
    for (int k = 0; k < 4; ++k) {
        Vector e = Vector::Zero(4);
        e[k] = 1.0;
        p.initial_states.push_back(e);
    }
    return p;
}

double RydbergParams::u0_radns_um3() const {
    return u0_au * constants::hartree_bohr3_to_radns_um3();
}

double RydbergParams::trap_omega() const {
    // Harmonic approximation of a Gaussian tweezer of depth |V_min| and
    // width sigma: omega = sqrt(|V_min| / (m sigma^2)).
    const double depth_radns = trap_depth_mK * 1e-3 * constants::KB_SI * constants::joule_to_radns();
    const double mass = constants::RB87_MASS_AMU * constants::AMU_SI * constants::kg_to_ns_per_um2();
    return std::sqrt(depth_radns / mass) / trap_sigma_um;
}

double RydbergParams::reduced_mass() const {
    return 0.5 * constants::RB87_MASS_AMU * constants::AMU_SI * constants::kg_to_ns_per_um2();
}

std::vector<int> rydberg_logical_indices() { return {0, 1, 4, 5}; }

std::vector<int> rydberg_avoid_indices() {
    std::vector<int> idx;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a == 2 || b == 2) idx.push_back(4 * a + b);
    return idx;
}

namespace {

// Single-atom internal Hamiltonian pieces over |0>, |1>, |i>, |r>.
Matrix single_atom_drift(const RydbergParams& p) {
    Matrix h = Matrix::Zero(4, 4);
    h(2, 2) = p.delta_r / 2.0;
    h(3, 3) = p.delta_b() / 2.0;
    return h;
}

Matrix single_atom_red_coupling() {
    Matrix h = Matrix::Zero(4, 4);
    h(0, 2) = h(2, 0) = 0.5;
    return h;
}

Matrix single_atom_blue_coupling() {
    Matrix h = Matrix::Zero(4, 4);
    h(2, 3) = h(3, 2) = 0.5;
    return h;
}

Matrix kron4(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(16, 16);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (a(i, j) != Complex(0, 0)) out.block(4 * i, 4 * j, 4, 4) = a(i, j) * b;
    return out;
}

RealVector rydberg_decay_rates(const RydbergParams& p) {
    RealVector g = RealVector::Zero(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) g[4 * a + b] = p.gamma_i * ((a == 2) + (b == 2));
    return g;
}

std::vector<StateVector> logical_basis_states(int dim) {
    std::vector<StateVector> states;
    for (int idx : rydberg_logical_indices()) {
        Vector e = Vector::Zero(dim);
        e[idx] = 1.0;
        states.push_back(e);
    }
    return states;
}

}  // namespace

ControlProblem build_rydberg_internal(const RydbergParams& params, double t_final, int n_steps,
                                      TargetSpec target) {
    const Matrix id4 = Matrix::Identity(4, 4);
    Matrix h0 = kron4(single_atom_drift(params), id4) + kron4(id4, single_atom_drift(params));
    h0(15, 15) += params.interaction_energy();  // |rr>

    std::vector<DenseHamiltonian::Coupling> couplings;
    couplings.push_back({kron4(single_atom_red_coupling(), id4) +
                             kron4(id4, single_atom_red_coupling()),
                         0, AmplitudeMap{AmplitudeMap::Kind::Tanh01, params.omega_r0}});
    couplings.push_back({kron4(single_atom_blue_coupling(), id4) +
                             kron4(id4, single_atom_blue_coupling()),
                         1, AmplitudeMap{AmplitudeMap::Kind::Tanh01, params.omega_b0}});

    RealVector decay;
    if (params.decay_on) decay = rydberg_decay_rates(params);

    ControlProblem p;
    p.model = std::make_shared<DenseHamiltonian>(std::move(h0), std::move(couplings), 2,
                                                 std::move(decay));
    p.logical = SubspaceProjector(rydberg_logical_indices(), 16);
    p.avoid = SubspaceProjector(rydberg_avoid_indices(), 16);
    p.grid = TimeGrid(t_final, n_steps);
    p.target = std::move(target);
    p.initial_states = logical_basis_states(16);
    return p;
}

namespace {

// Internal (x) relative-motion Hamiltonian on a Fourier grid. State layout:
// index = internal * n_points + grid point. Kinetic energy acts on every
// internal channel; the trap (when on) acts with weight (number of atoms in
// a qubit state)/2, following the per-atom trap terms with the
// center-of-mass motion integrated out.
class RydbergGridHamiltonian final : public HamiltonianModel {
public:
    RydbergGridHamiltonian(const RydbergParams& p, std::shared_ptr<FourierGrid> grid)
        : params_(p), grid_(std::move(grid)) {
        const int n = grid_->n_points();
        diag_.resize(16 * n);
        const double mu = p.reduced_mass();
        const double omega = p.trap_omega();
        const double u0 = p.u0_radns_um3();
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const int c = 4 * a + b;
                const double detuning = (a == 2 ? p.delta_r / 2 : a == 3 ? p.delta_b() / 2 : 0.0) +
                                        (b == 2 ? p.delta_r / 2 : b == 3 ? p.delta_b() / 2 : 0.0);
                const double trap_weight = 0.5 * ((a <= 1 ? 1 : 0) + (b <= 1 ? 1 : 0));
                for (int j = 0; j < n; ++j) {
                    const double r = grid_->position(j);
                    double v = detuning;
                    if (p.trap_on && trap_weight > 0) {
                        const double x = r - p.r0_um;
                        v += trap_weight * 0.5 * mu * omega * omega * x * x;
                    }
                    if (a == 3 && b == 3) v += u0 / (r * r * r);
                    diag_[c * n + j] = v;
                }
            }
        }
        if (p.decay_on) {
            const RealVector rates = rydberg_decay_rates(p);
            decay_.resize(16 * n);
            for (int c = 0; c < 16; ++c)
                for (int j = 0; j < n; ++j) decay_[c * n + j] = rates[c];
        }
        // Rabi couplings between internal channels, r-independent.
        for (int atom = 0; atom < 2; ++atom) {
            for (int other = 0; other < 4; ++other) {
                auto idx = [&](int lvl) { return atom == 0 ? 4 * lvl + other : 4 * other + lvl; };
                red_pairs_.push_back({idx(0), idx(2)});
                blue_pairs_.push_back({idx(2), idx(3)});
            }
        }
    }

    int dim() const override { return 16 * grid_->n_points(); }
    int n_fields() const override { return 2; }
    bool dense_available() const override { return false; }
    const RealVector& decay_diagonal() const override {
        static const RealVector empty;
        return decay_.size() > 0 ? decay_ : empty;
    }

    void apply_hermitian(const RealVector& eps, const Vector& in, Vector& out) const override {
        const int n = grid_->n_points();
        out = diag_.cast<Complex>().cwiseProduct(in);
        Vector channel(n), kin(n);
        for (int c = 0; c < 16; ++c) {
            channel = in.segment(c * n, n);
            if (channel.isZero(0.0)) continue;
            grid_->kinetic_apply(channel, kin);
            out.segment(c * n, n) += kin;
        }
        const double omr = 0.5 * AmplitudeMap{AmplitudeMap::Kind::Tanh01, params_.omega_r0}.value(eps[0]);
        const double omb = 0.5 * AmplitudeMap{AmplitudeMap::Kind::Tanh01, params_.omega_b0}.value(eps[1]);
        add_rabi(red_pairs_, omr, in, out);
        add_rabi(blue_pairs_, omb, in, out);
    }

    void apply_deriv(int field, const RealVector& eps, const Vector& in,
                     Vector& out) const override {
        out.setZero(in.size());
        if (field == 0) {
            const double g = 0.5 * AmplitudeMap{AmplitudeMap::Kind::Tanh01, params_.omega_r0}.deriv(eps[0]);
            add_rabi(red_pairs_, g, in, out);
        } else {
            const double g = 0.5 * AmplitudeMap{AmplitudeMap::Kind::Tanh01, params_.omega_b0}.deriv(eps[1]);
            add_rabi(blue_pairs_, g, in, out);
        }
    }

    Matrix assemble_hermitian(const RealVector&) const override {
        throw Error("grid Hamiltonian has no dense assembly");
    }

    std::pair<double, double> spectral_bounds() const override {
        const double dmin = diag_.minCoeff();
        const double dmax = diag_.maxCoeff() + grid_->kinetic_max();
        const double rabi = params_.omega_r0 + params_.omega_b0;  // worst-case row sum
        const double margin = 0.05 * std::max(1.0, dmax - dmin + rabi);
        return {dmin - rabi - margin, dmax + rabi + margin};
    }

private:
    void add_rabi(const std::vector<std::pair<int, int>>& pairs, double amp, const Vector& in,
                  Vector& out) const {
        if (amp == 0.0) return;
        const int n = grid_->n_points();
        for (const auto& [c1, c2] : pairs) {
            out.segment(c1 * n, n) += amp * in.segment(c2 * n, n);
            out.segment(c2 * n, n) += amp * in.segment(c1 * n, n);
        }
    }

    RydbergParams params_;
    std::shared_ptr<FourierGrid> grid_;
    RealVector diag_;
    RealVector decay_;
    std::vector<std::pair<int, int>> red_pairs_;
    std::vector<std::pair<int, int>> blue_pairs_;
};

}  // namespace

Vector trap_ground_state(const RydbergParams& params, const FourierGrid& grid) {
    const double a2 = 1.0 / (params.reduced_mass() * params.trap_omega());  // a_ho^2
    Vector phi(grid.n_points());
    for (int j = 0; j < grid.n_points(); ++j) {
        const double x = grid.position(j) - params.r0_um;
        phi[j] = std::exp(-x * x / (2.0 * a2));
    }
    const double norm = phi.norm();
    // Tail mass off the grid: compare the discrete norm against the
    // analytic normalization integral.
    const double analytic = std::pow(PI * a2, 0.25) / std::sqrt(grid.dr());
    if (norm / analytic < 1.0 - 1e-6)
        throw ConfigError("Fourier grid too small to contain the trap ground state");
    return phi / norm;
}

ControlProblem build_rydberg_grid(const RydbergParams& params, double t_final, int n_steps,
                                  std::shared_ptr<FourierGrid> grid, TargetSpec target) {
    if (grid->n_points() < 32) throw ConfigError("rydberg grid needs at least 32 points");
    auto model = std::make_shared<RydbergGridHamiltonian>(params, grid);
    const int n = grid->n_points();
    const Vector phi0 = trap_ground_state(params, *grid);

    ControlProblem p;
    p.model = model;
    // The logical subspace |ij> (x) phi0 is not coordinate-aligned; the gate
    // readout goes through the initial-state frame instead of an index
    // projector.
    p.grid = TimeGrid(t_final, n_steps);
    p.target = std::move(target);
    for (int idx : rydberg_logical_indices()) {
        Vector state = Vector::Zero(16 * n);
        state.segment(idx * n, n) = phi0;
        p.initial_states.push_back(state);
    }
    std::vector<int> avoid_full;
    for (int idx : rydberg_avoid_indices())
        for (int j = 0; j < n; ++j) avoid_full.push_back(idx * n + j);
    p.avoid = SubspaceProjector(avoid_full, 16 * n);
    return p;
}

double nonlocal_phase(const GateMatrix& u_diag, double offdiag_threshold) {
    if (u_diag.rows() != 4 || u_diag.cols() != 4)
        throw DimensionMismatch("nonlocal_phase needs a 4x4 gate");
    double offdiag = 0.0, total = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double m = std::norm(u_diag(i, j));
            total += m;
            if (i != j) offdiag += m;
        }
    if (total <= 0.0 || offdiag / total > offdiag_threshold)
        throw NotDiagonal(total > 0 ? offdiag / total : 1.0);
    const double chi = std::arg(u_diag(0, 0)) - std::arg(u_diag(1, 1)) - std::arg(u_diag(2, 2)) +
                       std::arg(u_diag(3, 3));
    double wrapped = std::fmod(chi, TWO_PI);
    if (wrapped <= -PI) wrapped += TWO_PI;
    if (wrapped > PI) wrapped -= TWO_PI;
    return wrapped;
}

}  // namespace weyl
