#include "weyl/core.hpp"

namespace weyl {

GateMatrix projected_gate(const std::vector<StateVector>& states_at_T,
                          const SubspaceProjector& logical) {
    const int n = logical.dim();
    if (static_cast<int>(states_at_T.size()) != n)
        throw DimensionMismatch("number of states vs logical dimension");
    GateMatrix u(n, n);
    for (int k = 0; k < n; ++k) {
        if (states_at_T[k].size() != logical.full_dim())
            throw DimensionMismatch("state dimension vs projector full dimension");
        for (int j = 0; j < n; ++j) u(j, k) = states_at_T[k][logical[j]];
    }
    return u;
}

double unitarity_defect(const GateMatrix& u) {
    if (u.rows() != u.cols()) throw DimensionMismatch("unitarity_defect needs a square matrix");
    const double n = static_cast<double>(u.rows());
    return 1.0 - (u * u.adjoint()).trace().real() / n;
}

double max_unitarity_residual(const GateMatrix& u) {
    Matrix r = u.adjoint() * u;
    r -= Matrix::Identity(u.cols(), u.cols());
    return r.cwiseAbs().maxCoeff();
}

bool is_unitary(const GateMatrix& u, double tol) {
    return u.rows() == u.cols() && max_unitarity_residual(u) <= tol;
}

}  // namespace weyl
