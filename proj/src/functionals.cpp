#include "weyl/functionals.hpp"

#include <cmath>

#include "weyl/errors.hpp"

namespace weyl {

namespace {

const GateMatrix& bell_q() {
    static const GateMatrix q = bell_transform();
    return q;
}

GateMatrix gate_from_states(const std::vector<StateVector>& states_at_T,
                            const SubspaceProjector& logical) {
    return projected_gate(states_at_T, logical);
}

struct LiTerms {
    Complex za;       // a0 det U - Tr{m}^2 / 16
    Complex zb;       // b0 det U - (Tr{m}^2 - Tr{m^2}) / 4
    GateMatrix ub;    // gate in the Bell basis
    GateMatrix m;     // ub^T ub
    Complex t1;       // Tr m
    Complex det;
};

LiTerms li_terms(const GateMatrix& u, const TargetSpec& target) {
    LiTerms t;
    const GateMatrix& q = bell_q();
    t.ub = q.adjoint() * u * q;
    t.m = t.ub.transpose() * t.ub;
    t.t1 = t.m.trace();
    const Complex t2 = (t.m * t.m).trace();
    t.det = t.ub.determinant();
    t.za = target.a0 * t.det - t.t1 * t.t1 / 16.0;
    t.zb = target.b0 * t.det - (t.t1 * t.t1 - t2) / 4.0;
    return t;
}

}  // namespace

TargetSpec TargetSpec::direct(GateMatrix o) {
    TargetSpec t;
    t.kind = Kind::DirectGate;
    t.gate = std::move(o);
    return t;
}

TargetSpec TargetSpec::equivalence_class(GateMatrix representative) {
    TargetSpec t;
    t.kind = Kind::EquivalenceClass;
    t.gate = std::move(representative);
    const GateMatrix m = m_matrix(t.gate);
    const Complex det = t.gate.determinant();
    if (std::abs(det) <= SINGULAR_DET_TOL) throw NearSingularGate(std::abs(det));
    const Complex tr2 = m.trace() * m.trace();
    t.a0 = tr2 / (16.0 * det);
    t.b0 = (tr2 - (m * m).trace()) / (4.0 * det);
    return t;
}

double j_direct_gate(const GateMatrix& u_tn, const GateMatrix& o) {
    if (u_tn.rows() != o.rows() || u_tn.cols() != o.cols())
        throw DimensionMismatch("j_direct gate vs target");
    const double n = static_cast<double>(o.rows());
    return 1.0 - (o.adjoint() * u_tn).trace().real() / n;
}

double j_direct(const std::vector<StateVector>& states_at_T, const GateMatrix& o,
                const SubspaceProjector& logical) {
    return j_direct_gate(gate_from_states(states_at_T, logical), o);
}

double j_fluence(const ControlField& field, const ControlField& ref, const ShapeFunction& shape,
                 double lambda_a) {
    if (!(field.grid() == ref.grid())) throw DimensionMismatch("field vs reference grid");
    if (lambda_a <= 0.0) throw ConfigError("lambda_a must be positive");
    const TimeGrid& grid = field.grid();
    const double dt = grid.dt();
    double acc = 0.0;
    for (int i = 0; i < grid.n_steps(); ++i) {
        const double diff = field[i] - ref[i];
        if (diff == 0.0) continue;
        const double s = shape.value(grid.midpoint(i), grid.t_final());
        if (s <= 0.0) throw DivisionByZeroShape(grid.midpoint(i));
        acc += diff * diff / s * dt;
    }
    return lambda_a * acc;
}

double avoid_integral(const TrajectorySet& trajectories, const SubspaceProjector& p_avoid) {
    const TimeGrid& grid = trajectories.grid();
    const int n_nodes = grid.n_nodes();
    const int n = trajectories.n_states();
    double acc = 0.0;
    for (int node = 0; node < n_nodes; ++node) {
        double pop = 0.0;
        for (int k = 0; k < n; ++k) pop += p_avoid.population(trajectories.at(k, node));
        const double w = (node == 0 || node == n_nodes - 1) ? 0.5 : 1.0;
        acc += w * pop;
    }
    return acc * grid.dt() / (n * grid.t_final());
}

double j_avoid(const TrajectorySet& trajectories, const SubspaceProjector& p_avoid,
               double lambda_b) {
    if (lambda_b < 0.0) throw ConfigError("lambda_b must be nonnegative");
    if (lambda_b == 0.0) return 0.0;
    return lambda_b * avoid_integral(trajectories, p_avoid);
}

double j_local_invariants_gate(const GateMatrix& u_tn, const TargetSpec& target) {
    if (target.kind != TargetSpec::Kind::EquivalenceClass)
        throw ConfigError("j_local_invariants requires an equivalence-class target");
    if (std::abs(u_tn.determinant()) <= SINGULAR_DET_TOL)
        throw NearSingularGate(std::abs(u_tn.determinant()));
    const LiTerms t = li_terms(u_tn, target);
    return std::norm(t.za) + std::norm(t.zb) + unitarity_defect(u_tn);
}

double j_local_invariants(const std::vector<StateVector>& states_at_T, const TargetSpec& target,
                          const SubspaceProjector& logical) {
    return j_local_invariants_gate(gate_from_states(states_at_T, logical), target);
}

double j_local_invariants_dg(const GateMatrix& u_tn, const GateMatrix& o) {
    const LocalInvariants gu = local_invariants(u_tn);
    const LocalInvariants go = local_invariants(o);
    return class_distance(gu, go) + unitarity_defect(u_tn);
}

GateMatrix adjugate4(const GateMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) throw DimensionMismatch("adjugate4 needs 4x4");
    GateMatrix adj(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            Eigen::Matrix3cd minor;
            int mr = 0;
            for (int r = 0; r < 4; ++r) {
                if (r == i) continue;
                int mc = 0;
                for (int c = 0; c < 4; ++c) {
                    if (c == j) continue;
                    minor(mr, mc) = m(r, c);
                    ++mc;
                }
                ++mr;
            }
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * minor.determinant();
        }
    }
    return adj;
}

GateMatrix jli_gate_gradient(const GateMatrix& u_tn, const TargetSpec& target) {
    if (std::abs(u_tn.determinant()) <= SINGULAR_DET_TOL)
        throw NearSingularGate(std::abs(u_tn.determinant()));
    const GateMatrix& q = bell_q();
    const LiTerms t = li_terms(u_tn, target);

    // Coefficient matrices of the analytic pieces with respect to U_B:
    //   d det  = adj(U_B)^T,  d Tr{m} = 2 U_B,  d Tr{m^2} = 4 U_B m.
    const GateMatrix g_det = adjugate4(t.ub).transpose();
    const GateMatrix g_t1 = 2.0 * t.ub;
    const GateMatrix g_t2 = 4.0 * t.ub * t.m;

    const GateMatrix g_za = target.a0 * g_det - (2.0 * t.t1 / 16.0) * g_t1;
    const GateMatrix g_zb = target.b0 * g_det - (2.0 * t.t1 * g_t1 - g_t2) / 4.0;

    // dJ/d(conj U_B) for J = |za|^2 + |zb|^2 + 1 - Tr{U U^+}/N.
    const GateMatrix d_ub =
        t.za * g_za.conjugate() + t.zb * g_zb.conjugate() - t.ub / 4.0;
    return q * d_ub * q.adjoint();
}

std::vector<StateVector> chi_boundary(const std::vector<StateVector>& states_at_T,
                                      const TargetSpec& target, const SubspaceProjector& logical) {
    const int n = logical.dim();
    std::vector<StateVector> chis(n);
    if (target.kind == TargetSpec::Kind::DirectGate) {
        // Linear functional: chi_k = (1/2N) O e_k, independent of the states.
        for (int k = 0; k < n; ++k) {
            Vector col = target.gate.col(k) / (2.0 * n);
            chis[k] = logical.embed(col);
        }
        return chis;
    }
    const GateMatrix u = gate_from_states(states_at_T, logical);
    const GateMatrix grad = jli_gate_gradient(u, target);
    for (int k = 0; k < n; ++k) chis[k] = logical.embed(-grad.col(k));
    return chis;
}

StateVector avoid_inhomogeneity(const StateVector& state, const SubspaceProjector& p_avoid,
                                double lambda_b, int n_logical, double t_final) {
    if (lambda_b < 0.0) throw ConfigError("lambda_b must be nonnegative");
    if (lambda_b == 0.0) return StateVector::Zero(state.size());
    return (lambda_b / (n_logical * t_final)) * p_avoid.apply(state);
}

}  // namespace weyl
