#pragma once

#include <vector>

#include "weyl/grid.hpp"
#include "weyl/types.hpp"

namespace weyl {

// Time-indexed storage of N propagated states (or co-states): one
// StateVector per grid node per logical index.
class TrajectorySet {
public:
    TrajectorySet(TimeGrid grid, int n_states, int dim)
        : grid_(grid),
          states_(n_states, std::vector<StateVector>(grid.n_nodes(), StateVector::Zero(dim))) {}

    const TimeGrid& grid() const { return grid_; }
    int n_states() const { return static_cast<int>(states_.size()); }
    int dim() const { return states_.empty() ? 0 : static_cast<int>(states_[0][0].size()); }

    StateVector& at(int k, int node) { return states_[k][node]; }
    const StateVector& at(int k, int node) const { return states_[k][node]; }

    std::vector<StateVector> at_node(int node) const {
        std::vector<StateVector> out;
        out.reserve(states_.size());
        for (const auto& s : states_) out.push_back(s[node]);
        return out;
    }

    std::vector<StateVector> final_states() const { return at_node(grid_.n_steps()); }

private:
    TimeGrid grid_;
    std::vector<std::vector<StateVector>> states_;
};

}  // namespace weyl
