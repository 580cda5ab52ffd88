#pragma once

#include <string>
#include <vector>

#include "weyl/problem.hpp"

namespace weyl {

// Parameters of the monotonically convergent iteration.
struct KrotovConfig {
    double lambda_a = 1.0;  // step weight; larger = smaller field changes
    double lambda_b = 0.0;  // weight of the avoidance constraint g_b
    double a_param = 0.0;   // A of sigma(t) = C(T-t) - A
    double c_param = 0.0;   // C; must satisfy C <= -lambda_b/(N T) when lambda_b > 0
    int max_iters = 200;
    double stop_jt = 1e-4;       // stop once J_T drops below this
    double stop_delta_j = 1e-9;  // ... or |Delta J| stays below this
    int stop_delta_count = 5;    //     for this many consecutive iterations
    double monotonic_slack = 1e-10;
    int update_fixed_point = 3;  // iterations solving the implicit dH/deps
    ShapeFunction shape = ShapeFunction::sin_squared();
    PropagationOptions propagation;

    void validate(int n_logical, double t_final) const;
};

// Convergence log entry; one per accepted iteration.
struct IterationRecord {
    int iteration = 0;
    double j_t = 0.0;
    double g_a = 0.0;
    double g_b = 0.0;
    double total = 0.0;            // j_t + g_a + g_b
    double class_distance = 0.0;   // d(g(U), g(O)); NaN when not computable
    double gate_error = 0.0;       // E from extracted local factors; NaN when not
    WeylPoint weyl;                // chamber point of the current gate
    double fluence = 0.0;          // int eps^2 dt summed over fields
    double wall_time_s = 0.0;
};

enum class StopReason { ToleranceReached, DeltaJStalled, MaxIterations, MonotonicityViolation };

const char* to_string(StopReason r);

struct OptimizeResult {
    std::vector<ControlField> fields;
    std::vector<IterationRecord> history;
    StopReason reason = StopReason::MaxIterations;
    std::string diagnostic;
    GateMatrix final_gate;
    TrajectorySet trajectory{TimeGrid(1.0, 2), 0, 0};
};

// sigma(t) = C (T - t) - A
double sigma(double t, double t_final, const KrotovConfig& cfg);

// One sequential Krotov sweep: updates every field sample while
// re-propagating the states with the new field, per
//   eps_new(t) = eps(t) + S(t)/lambda_a Im{ sum_k <chi_k|dH/deps|phi_k^new>
//                + (sigma(t)/2) sum_k <Delta phi_k|dH/deps|phi_k^new> }.
struct UpdateSweep {
    std::vector<ControlField> fields;
    TrajectorySet trajectory;
};
UpdateSweep field_update(const ControlProblem& problem, const std::vector<ControlField>& fields,
                         const TrajectorySet& chi, const TrajectorySet& prev_forward,
                         const KrotovConfig& cfg);

// Full iteration loop: forward propagation, co-state backward propagation
// with the avoidance inhomogeneity, sequential field update, reference-field
// refresh, convergence log. Aborts on a monotonicity violation.
OptimizeResult optimize(const ControlProblem& problem, const std::vector<ControlField>& guess,
                        const KrotovConfig& cfg);

// Second-order parameter estimate for a class-target problem: smallest A
// from a geometric ladder whose first trial iterations stay monotone, plus
// a sampled worst-case curvature bound of J_T (order of magnitude only).
struct AEstimate {
    double numeric = 0.0;
    double analytic_bound = 0.0;
};
AEstimate estimate_A(const ControlProblem& problem, const KrotovConfig& cfg,
                     const std::vector<ControlField>& guess, int trial_iters = 10);

}  // namespace weyl
