#include "weyl/propagation.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>
#include <fftw3.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "weyl/errors.hpp"

namespace weyl {

namespace {

bool is_hermitian(const Matrix& h, double tol = 1e-12) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, h.cwiseAbs().maxCoeff());
}

void run_per_state(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    const int used = std::min(threads, n);
    std::atomic<int> next{0};
    for (int t = 0; t < used; ++t)
        pool.emplace_back([&] {
            for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) fn(k);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

DenseHamiltonian::DenseHamiltonian(Matrix h0, std::vector<Coupling> couplings, int n_fields,
                                   RealVector decay_rates)
    : h0_(std::move(h0)), couplings_(std::move(couplings)), n_fields_(n_fields),
      decay_(std::move(decay_rates)) {
    const auto n = h0_.rows();
    if (h0_.cols() != n) throw DimensionMismatch("drift Hamiltonian must be square");
    if (!is_hermitian(h0_)) throw ConfigError("drift Hamiltonian is not Hermitian");
    for (const auto& c : couplings_) {
        if (c.hc.rows() != n || c.hc.cols() != n)
            throw DimensionMismatch("control coupling dimension");
        if (!is_hermitian(c.hc)) throw ConfigError("control coupling is not Hermitian");
        if (c.field_index < 0 || c.field_index >= n_fields_)
            throw ConfigError("coupling field index out of range");
    }
    if (decay_.size() > 0) {
        if (decay_.size() != n) throw DimensionMismatch("decay rates vs dimension");
        if ((decay_.array() < 0).any()) throw ConfigError("decay rates must be nonnegative");
        if (decay_.maxCoeff() == 0.0) decay_.resize(0);
    }
}

Matrix DenseHamiltonian::assemble_hermitian(const RealVector& eps) const {
    Matrix h = h0_;
    for (const auto& c : couplings_) h += c.map.value(eps[c.field_index]) * c.hc;
    return h;
}

void DenseHamiltonian::apply_hermitian(const RealVector& eps, const Vector& in,
                                       Vector& out) const {
    out.noalias() = h0_ * in;
    for (const auto& c : couplings_) out.noalias() += c.map.value(eps[c.field_index]) * (c.hc * in);
}

void DenseHamiltonian::apply_deriv(int field, const RealVector& eps, const Vector& in,
                                   Vector& out) const {
    out.setZero(in.size());
    for (const auto& c : couplings_) {
        if (c.field_index != field) continue;
        out.noalias() += c.map.deriv(eps[c.field_index]) * (c.hc * in);
    }
}

std::pair<double, double> DenseHamiltonian::spectral_bounds() const {
    // Gershgorin rows of the drift, widened by worst-case coupling strength.
    const auto n = h0_.rows();
    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double center = h0_(i, i).real();
        double spread = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) spread += std::abs(h0_(i, j));
        for (const auto& c : couplings_) {
            const double amax =
                (c.map.kind == AmplitudeMap::Kind::Tanh01) ? std::abs(c.map.scale) : 1.0;
            for (Eigen::Index j = 0; j < n; ++j) spread += amax * std::abs(c.hc(i, j));
        }
        lo = std::min(lo, center - spread);
        hi = std::max(hi, center + spread);
    }
    const double margin = 0.05 * std::max(1.0, hi - lo);
    return {lo - margin, hi + margin};
}

FourierGrid::FourierGrid(int n_points, double r_min, double r_max, double mass)
    : n_(n_points), r_min_(r_min), r_max_(r_max), mass_(mass) {
    if (n_points < 2 || (n_points & (n_points - 1)) != 0)
        throw ConfigError("FourierGrid n_points must be a power of two");
    if (r_max <= r_min) throw ConfigError("FourierGrid needs r_max > r_min");
    if (mass <= 0) throw ConfigError("FourierGrid mass must be positive");
    const double length = r_max_ - r_min_;
    k2_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        const int m = (j < n_ / 2) ? j : j - n_;
        const double k = TWO_PI * m / length;
        k2_[j] = k * k;
    }
    plan_fwd_ = fftw_plan_dft_1d(n_, nullptr, nullptr, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_1d(n_, nullptr, nullptr, FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FourierGrid::~FourierGrid() {
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

double FourierGrid::kinetic_max() const { return k2_.maxCoeff() / (2.0 * mass_); }

void FourierGrid::kinetic_apply(const Vector& in, Vector& out) const {
    if (in.size() != n_) throw DimensionMismatch("kinetic_apply state vs grid");
    Vector work = in;
    out.resize(n_);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(work.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    for (int j = 0; j < n_; ++j) out[j] *= k2_[j] / (2.0 * mass_);
    work = out;
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(work.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    out /= static_cast<double>(n_);
}

Matrix step_propagator(const Matrix& h_total, double dt, bool hermitian) {
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h_total);
        Vector phases(h_total.rows());
        for (Eigen::Index i = 0; i < h_total.rows(); ++i)
            phases[i] = std::exp(-IMAG_UNIT * es.eigenvalues()[i] * dt);
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    Matrix a = -IMAG_UNIT * dt * h_total;
    return a.exp();
}

StateVector step_expm(const Matrix& h_total, const StateVector& state, double dt) {
    return step_propagator(h_total, dt, is_hermitian(h_total)) * state;
}

StateVector step_chebychev(const ApplyFn& h_apply, const StateVector& state, double dt,
                           double e_min, double e_max, double tol, int max_order) {
    if (e_max <= e_min) throw ConfigError("Chebychev bounds need e_max > e_min");
    const double half_span = 0.5 * (e_max - e_min);
    const double center = 0.5 * (e_max + e_min);
    const double x = half_span * std::abs(dt);
    if (x < 1e-14) return std::exp(-IMAG_UNIT * center * dt) * state;
    if (max_order <= 0) max_order = static_cast<int>(2.0 * x) + 200;

    const double norm0 = state.norm();
    auto apply_norm = [&](const Vector& in, Vector& out) {
        h_apply(in, out);
        out -= center * in;
        out /= half_span;
    };

    Vector p_prev = state;
    Vector p_curr(state.size()), tmp(state.size());
    const Complex step_unit = (dt >= 0) ? -IMAG_UNIT : IMAG_UNIT;

    Vector acc = std::cyl_bessel_j(0, x) * p_prev;
    Complex i_pow(1.0, 0.0);
    int below = 0;
    bool converged = false;
    for (int k = 1; k <= max_order; ++k) {
        if (k == 1) {
            apply_norm(p_prev, p_curr);
        } else {
            apply_norm(p_curr, tmp);
            tmp *= 2.0;
            tmp -= p_prev;
            p_prev.swap(p_curr);
            p_curr.swap(tmp);
        }
        if (p_curr.norm() > 50.0 * std::max(norm0, 1e-300))
            throw SpectralBoundViolation("recurrence grew beyond bound at order " +
                                         std::to_string(k));
        i_pow *= step_unit;
        const double jk = std::cyl_bessel_j(k, x);
        acc += (2.0 * jk) * (i_pow * p_curr);
        if (std::abs(jk) < tol) {
            if (++below >= 3 && k > static_cast<int>(x)) {
                converged = true;
                break;
            }
        } else {
            below = 0;
        }
    }
    if (!converged)
        throw SpectralBoundViolation("series not converged after " + std::to_string(max_order) +
                                     " terms");
    return std::exp(-IMAG_UNIT * center * dt) * acc;
}

namespace {

RealVector field_sample(const std::vector<ControlField>& fields, int step) {
    RealVector eps(static_cast<Eigen::Index>(fields.size()));
    for (size_t f = 0; f < fields.size(); ++f) eps[static_cast<Eigen::Index>(f)] = fields[f][step];
    return eps;
}

void check_fields(const HamiltonianModel& model, const std::vector<ControlField>& fields,
                  const TimeGrid& grid) {
    if (static_cast<int>(fields.size()) != model.n_fields())
        throw DimensionMismatch("number of control fields vs model");
    for (const auto& f : fields)
        if (!(f.grid() == grid)) throw DimensionMismatch("field grid vs propagation grid");
}

// Half-step decay factors exp(-Gamma dt / 4) for Strang splitting.
Vector decay_half_factors(const RealVector& gamma, double dt) {
    Vector f(gamma.size());
    for (Eigen::Index i = 0; i < gamma.size(); ++i) f[i] = std::exp(-0.25 * gamma[i] * dt);
    return f;
}

}  // namespace

TrajectorySet propagate_forward(const HamiltonianModel& model,
                                const std::vector<ControlField>& fields,
                                const std::vector<StateVector>& initial_states,
                                const TimeGrid& grid, const PropagationOptions& opts) {
    check_fields(model, fields, grid);
    const int n_states = static_cast<int>(initial_states.size());
    const int dim = model.dim();
    TrajectorySet traj(grid, n_states, dim);
    for (int k = 0; k < n_states; ++k) {
        if (initial_states[k].size() != dim) throw DimensionMismatch("initial state dimension");
        traj.at(k, 0) = initial_states[k];
    }
    const double dt = grid.dt();
    const bool dense = model.dense_available() && dim <= opts.dense_threshold;
    std::pair<double, double> bounds{0, 1};
    Vector decay_half;
    if (!dense) {
        bounds = model.spectral_bounds();
        if (model.has_decay()) decay_half = decay_half_factors(model.decay_diagonal(), dt);
    }

    for (int i = 0; i < grid.n_steps(); ++i) {
        const RealVector eps = field_sample(fields, i);
        if (dense) {
            const Matrix u = step_propagator(model.assemble(eps), dt, !model.has_decay());
            for (int k = 0; k < n_states; ++k) traj.at(k, i + 1).noalias() = u * traj.at(k, i);
        } else {
            auto apply = [&](const Vector& in, Vector& out) { model.apply_hermitian(eps, in, out); };
            run_per_state(n_states, opts.threads, [&](int k) {
                Vector psi = traj.at(k, i);
                if (decay_half.size() > 0) psi = decay_half.cwiseProduct(psi);
                psi = step_chebychev(apply, psi, dt, bounds.first, bounds.second, opts.cheby_tol);
                if (decay_half.size() > 0) psi = decay_half.cwiseProduct(psi);
                traj.at(k, i + 1) = psi;
            });
        }
    }
    return traj;
}

TrajectorySet propagate_backward(const HamiltonianModel& model,
                                 const std::vector<ControlField>& fields,
                                 const std::vector<StateVector>& chi_at_T, const TimeGrid& grid,
                                 const SourceFn& source, const PropagationOptions& opts) {
    check_fields(model, fields, grid);
    const int n_states = static_cast<int>(chi_at_T.size());
    const int dim = model.dim();
    TrajectorySet traj(grid, n_states, dim);
    const int last = grid.n_steps();
    for (int k = 0; k < n_states; ++k) traj.at(k, last) = chi_at_T[k];
    const double dt = grid.dt();
    const bool dense = model.dense_available() && dim <= opts.dense_threshold;
    std::pair<double, double> bounds{0, 1};
    Vector decay_half;
    if (!dense) {
        bounds = model.spectral_bounds();
        if (model.has_decay()) decay_half = decay_half_factors(model.decay_diagonal(), dt);
    }

    for (int i = last - 1; i >= 0; --i) {
        const RealVector eps = field_sample(fields, i);
        if (dense) {
            // exp(+i H^+ dt) = [exp(-i H dt)]^+ for any generator
            const Matrix h = model.assemble(eps);
            const Matrix u_full = step_propagator(h, dt, !model.has_decay()).adjoint();
            Matrix u_half;
            if (source) u_half = step_propagator(h, 0.5 * dt, !model.has_decay()).adjoint();
            for (int k = 0; k < n_states; ++k) {
                traj.at(k, i).noalias() = u_full * traj.at(k, i + 1);
                if (source) traj.at(k, i).noalias() += dt * (u_half * source(k, i));
            }
        } else {
            // Hermitian part stepped with negative dt; the adjoint of the
            // decay term also damps the co-states backward in time.
            auto apply = [&](const Vector& in, Vector& out) { model.apply_hermitian(eps, in, out); };
            run_per_state(n_states, opts.threads, [&](int k) {
                Vector chi = traj.at(k, i + 1);
                if (decay_half.size() > 0) chi = decay_half.cwiseProduct(chi);
                chi = step_chebychev(apply, chi, -dt, bounds.first, bounds.second, opts.cheby_tol);
                if (decay_half.size() > 0) chi = decay_half.cwiseProduct(chi);
                if (source) {
                    Vector eta = source(k, i);
                    if (decay_half.size() > 0) eta = decay_half.cwiseProduct(eta);
                    chi += dt * step_chebychev(apply, eta, -0.5 * dt, bounds.first, bounds.second,
                                               opts.cheby_tol);
                }
                traj.at(k, i) = chi;
            });
        }
    }
    return traj;
}

}  // namespace weyl
