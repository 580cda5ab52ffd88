#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "weyl/grid.hpp"
#include "weyl/trajectory.hpp"
#include "weyl/types.hpp"

namespace weyl {

// Map from the optimization variable eps to a physical coupling amplitude.
struct AmplitudeMap {
    enum class Kind { Linear, Tanh01 };

    Kind kind = Kind::Linear;
    double scale = 1.0;  // Tanh01: amplitude = scale (tanh eps + 1)/2 in [0, scale]

    double value(double eps) const {
        if (kind == Kind::Linear) return eps;
        return scale * 0.5 * (std::tanh(eps) + 1.0);
    }
    double deriv(double eps) const {
        if (kind == Kind::Linear) return 1.0;
        const double c = std::cosh(std::min(std::abs(eps), 300.0));
        return scale * 0.5 / (c * c);
    }
};

// Drift + control Hamiltonian H(eps) = H_herm(eps) - (i/2) diag(Gamma).
// Implementations are immutable after construction; all methods const and
// thread-safe.
class HamiltonianModel {
public:
    virtual ~HamiltonianModel() = default;

    virtual int dim() const = 0;
    virtual int n_fields() const = 0;

    // Hermitian part applied matrix-free.
    virtual void apply_hermitian(const RealVector& eps, const Vector& in, Vector& out) const = 0;

    // out = dH/d eps_f |in>
    virtual void apply_deriv(int field, const RealVector& eps, const Vector& in,
                             Vector& out) const = 0;

    // Nonnegative decay rates Gamma (empty when the model has none).
    virtual const RealVector& decay_diagonal() const {
        static const RealVector empty;
        return empty;
    }

    // Dense assembly of the Hermitian part, when feasible.
    virtual bool dense_available() const = 0;
    virtual Matrix assemble_hermitian(const RealVector& eps) const = 0;

    // Conservative [E_min, E_max] enclosing the Hermitian spectrum over all
    // admissible field values.
    virtual std::pair<double, double> spectral_bounds() const = 0;

    bool has_decay() const { return decay_diagonal().size() > 0; }

    // Full (possibly non-Hermitian) Hamiltonian.
    Matrix assemble(const RealVector& eps) const {
        Matrix h = assemble_hermitian(eps);
        if (has_decay())
            h -= Complex(0, 0.5) * Matrix(decay_diagonal().cast<Complex>().asDiagonal());
        return h;
    }

    void apply(const RealVector& eps, const Vector& in, Vector& out) const {
        apply_hermitian(eps, in, out);
        if (has_decay())
            out -= Complex(0, 0.5) * decay_diagonal().cast<Complex>().cwiseProduct(in);
    }
};

// Dense model: H_herm(eps) = H0 + sum_c map_c(eps_{f_c}) Hc.
class DenseHamiltonian final : public HamiltonianModel {
public:
    struct Coupling {
        Matrix hc;
        int field_index = 0;
        AmplitudeMap map;
    };

    DenseHamiltonian(Matrix h0, std::vector<Coupling> couplings, int n_fields,
                     RealVector decay_rates = RealVector());

    int dim() const override { return static_cast<int>(h0_.rows()); }
    int n_fields() const override { return n_fields_; }
    bool dense_available() const override { return true; }
    const RealVector& decay_diagonal() const override { return decay_; }
    Matrix assemble_hermitian(const RealVector& eps) const override;
    void apply_hermitian(const RealVector& eps, const Vector& in, Vector& out) const override;
    void apply_deriv(int field, const RealVector& eps, const Vector& in,
                     Vector& out) const override;
    std::pair<double, double> spectral_bounds() const override;

    const Matrix& h0() const { return h0_; }
    const std::vector<Coupling>& couplings() const { return couplings_; }

private:
    Matrix h0_;
    std::vector<Coupling> couplings_;
    int n_fields_;
    RealVector decay_;
};

// Equidistant position grid with Fourier-transform momenta for the
// relative-motion coordinate.
class FourierGrid {
public:
    FourierGrid(int n_points, double r_min, double r_max, double mass);
    ~FourierGrid();
    FourierGrid(const FourierGrid&) = delete;
    FourierGrid& operator=(const FourierGrid&) = delete;

    int n_points() const { return n_; }
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    double dr() const { return (r_max_ - r_min_) / n_; }
    double mass() const { return mass_; }
    double position(int j) const { return r_min_ + j * dr(); }
    double kinetic_max() const;  // hbar^2 k_max^2 / (2 mu) in grid units

    // out = -hbar^2/(2 mu) d^2/dr^2 |in>  (periodic boundary)
    void kinetic_apply(const Vector& in, Vector& out) const;

private:
    int n_;
    double r_min_, r_max_, mass_;
    RealVector k2_;  // k^2 per momentum index
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
};

// exp(-i H dt) |state> for a dense Hamiltonian (Hermitian or with decay).
StateVector step_expm(const Matrix& h_total, const StateVector& state, double dt);

// Dense one-step propagator exp(-i H dt); eigendecomposition for Hermitian
// H, scaling-and-squaring otherwise.
Matrix step_propagator(const Matrix& h_total, double dt, bool hermitian);

// Chebychev series of exp(-i H dt) applied through a matrix-free callback;
// H must be Hermitian with spectrum inside [e_min, e_max]. Negative dt
// gives exp(+i H |dt|). Throws SpectralBoundViolation on divergence.
using ApplyFn = std::function<void(const Vector&, Vector&)>;
StateVector step_chebychev(const ApplyFn& h_apply, const StateVector& state, double dt,
                           double e_min, double e_max, double tol = 1e-14, int max_order = 0);

struct PropagationOptions {
    int dense_threshold = 64;
    int threads = 1;
    double cheby_tol = 1e-14;
};

// Forward propagation of the initial states over the whole grid; fields are
// sampled on midpoints and treated piecewise constant per step.
TrajectorySet propagate_forward(const HamiltonianModel& model,
                                const std::vector<ControlField>& fields,
                                const std::vector<StateVector>& initial_states,
                                const TimeGrid& grid, const PropagationOptions& opts = {});

// Source term for the inhomogeneous backward equation, evaluated per state
// and per step midpoint; may be null.
using SourceFn = std::function<StateVector(int k, int step)>;

// Backward propagation of co-states from chi(T), solving
//   d chi / dt = -(i/hbar) H^+ chi  plus the accumulated source:
//   chi(t_i) = e^{+i H^+ dt} chi(t_{i+1}) + dt e^{+i H^+ dt/2} source(mid_i).
TrajectorySet propagate_backward(const HamiltonianModel& model,
                                 const std::vector<ControlField>& fields,
                                 const std::vector<StateVector>& chi_at_T, const TimeGrid& grid,
                                 const SourceFn& source = nullptr,
                                 const PropagationOptions& opts = {});

}  // namespace weyl
