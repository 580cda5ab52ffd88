#pragma once

#include <vector>

#include "weyl/errors.hpp"
#include "weyl/types.hpp"

namespace weyl {

// Selection of basis indices identifying a subspace of the full Hilbert
// space; acts as the projector P = sum_j |b_j><b_j|.
class SubspaceProjector {
public:
    SubspaceProjector() = default;
    SubspaceProjector(std::vector<int> indices, int full_dim)
        : indices_(std::move(indices)), full_dim_(full_dim) {
        std::vector<bool> seen(full_dim, false);
        for (int j : indices_) {
            if (j < 0 || j >= full_dim) throw DimensionMismatch("subspace index out of range");
            if (seen[j]) throw ConfigError("duplicate subspace index");
            seen[j] = true;
        }
    }

    int dim() const { return static_cast<int>(indices_.size()); }
    int full_dim() const { return full_dim_; }
    bool empty() const { return indices_.empty(); }
    const std::vector<int>& indices() const { return indices_; }
    int operator[](int k) const { return indices_[k]; }

    // P |psi>
    Vector apply(const Vector& psi) const {
        if (psi.size() != full_dim_) throw DimensionMismatch("state vs projector dimension");
        Vector out = Vector::Zero(full_dim_);
        for (int j : indices_) out[j] = psi[j];
        return out;
    }

    // <P psi | P psi>
    double population(const Vector& psi) const {
        double p = 0.0;
        for (int j : indices_) p += std::norm(psi[j]);
        return p;
    }

    // Components on the subspace, as a dense dim()-vector.
    Vector extract(const Vector& psi) const {
        Vector out(dim());
        for (int k = 0; k < dim(); ++k) out[k] = psi[indices_[k]];
        return out;
    }

    // Embed a dim()-vector back into the full space (adjoint of extract).
    Vector embed(const Vector& sub) const {
        if (sub.size() != dim()) throw DimensionMismatch("subspace vector size");
        Vector out = Vector::Zero(full_dim_);
        for (int k = 0; k < dim(); ++k) out[indices_[k]] = sub[k];
        return out;
    }

private:
    std::vector<int> indices_;
    int full_dim_ = 0;
};

// (U_{T,N})_{jk} = <basis_j | phi_k(T)> over the logical indices.
GateMatrix projected_gate(const std::vector<StateVector>& states_at_T,
                          const SubspaceProjector& logical);

// 1 - Tr(U U^+)/N. Zero for unitary U, up to 1 per fully lost column.
double unitarity_defect(const GateMatrix& u);

// max |(U^+ U - 1)_{jk}|
double max_unitarity_residual(const GateMatrix& u);

bool is_unitary(const GateMatrix& u, double tol = UNITARITY_TOL);

}  // namespace weyl
