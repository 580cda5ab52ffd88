#pragma once

#include <memory>
#include <vector>

#include "weyl/core.hpp"
#include "weyl/functionals.hpp"
#include "weyl/propagation.hpp"

namespace weyl {

// A ready-to-optimize control problem: Hamiltonian, subspaces, time grid,
// initial basis states and the optimization target. The initial states are
// the orthonormal frame of the logical subspace; the projected gate is
// (U_{T,N})_{jk} = <phi_j(0) | phi_k(T)>.
struct ControlProblem {
    std::shared_ptr<const HamiltonianModel> model;
    SubspaceProjector logical;  // index form of the logical subspace; may be
                                // empty when the frame is not coordinate-aligned
    SubspaceProjector avoid;    // empty when no loss channel is penalized
    TimeGrid grid{1.0, 2};
    std::vector<StateVector> initial_states;
    TargetSpec target;

    int n_logical() const { return static_cast<int>(initial_states.size()); }

    GateMatrix gate_of(const std::vector<StateVector>& states_at_T) const {
        const int n = n_logical();
        GateMatrix u(n, n);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) u(j, k) = initial_states[j].dot(states_at_T[k]);
        return u;
    }

    // Embed column vectors of a gate-space gradient back into full-space
    // states: state_k = sum_j phi_j(0) cols(j, k).
    std::vector<StateVector> embed_columns(const GateMatrix& cols) const {
        const int n = n_logical();
        std::vector<StateVector> out(n, StateVector::Zero(model->dim()));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) out[k] += cols(j, k) * initial_states[j];
        return out;
    }

    void validate() const {
        if (!model) throw ConfigError("control problem has no Hamiltonian model");
        if (initial_states.empty()) throw ConfigError("control problem has no initial states");
        for (const auto& s : initial_states)
            if (s.size() != model->dim()) throw DimensionMismatch("initial state vs model dim");
        if (!logical.empty()) {
            if (logical.full_dim() != model->dim())
                throw DimensionMismatch("logical projector vs model dim");
            if (logical.dim() != n_logical())
                throw DimensionMismatch("logical projector vs number of initial states");
        }
        if (!avoid.empty() && avoid.full_dim() != model->dim())
            throw DimensionMismatch("avoid projector vs model dim");
    }
};

}  // namespace weyl
