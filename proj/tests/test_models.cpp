#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "weyl/errors.hpp"
#include "weyl/geometry.hpp"
#include "weyl/models.hpp"

using namespace weyl;
using namespace weyl::testing;

TEST_CASE("spin-spin matrices carry the printed entries") {
    const auto p = SpinSpinParams::cnot_params();
    const double h0_expect[4][4] = {{5.711, 0.324, 0.324, 0},
                                    {0.324, -1.840, 1.054, 0},
                                    {0.324, 1.054, 1.840, 0},
                                    {0, 0, 0, -2.030}};
    const double h1_expect[4][4] = {{-153.65, 0, 0, 3.906},
                                    {0, 153.65, 16.085, 0},
                                    {0, 16.085, 153.65, 0},
                                    {3.906, 0, 0, -153.65}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(p.h0(i, j).real() == h0_expect[i][j]);
            CHECK(p.h0(i, j).imag() == 0.0);
            CHECK(p.h1(i, j).real() == h1_expect[i][j]);
        }
    CHECK(p.paper_exact);
    CHECK_FALSE(SpinSpinParams::bgate_params().paper_exact);
}

TEST_CASE("drift-only spin-spin evolution matches the matrix exponential") {
    const auto problem = build_spinspin(SpinSpinParams::cnot_params(), 4.0, 200,
                                        TargetSpec::equivalence_class(gate_cnot()),
                                        EnvelopeMode::Linear);
    auto traj = propagate_forward(*problem.model, {ControlField::constant(problem.grid, 0.0)},
                                  problem.initial_states, problem.grid);
    const GateMatrix u = problem.gate_of(traj.final_states());
    const Matrix expect =
        step_propagator(SpinSpinParams::cnot_params().h0.cast<Complex>(), 4.0, true);
    CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-9);
    // its Weyl point is a valid chamber point
    const WeylPoint c = weyl_coordinates(u);
    CHECK(c.cx >= c.cy);
    CHECK(c.cy >= c.cz);
}

TEST_CASE("rydberg parameter relations") {
    RydbergParams p;
    CHECK(p.delta_b() == doctest::Approx(0.0));

    // u0 / r0^3 reproduces the 50 MHz interaction estimate
    CHECK(p.interaction_energy() == doctest::Approx(TWO_PI * 0.05).epsilon(1e-3));
    // ... and the 10 ns pi-phase identity
    CHECK(PI / p.interaction_energy() == doctest::Approx(10.0).epsilon(1e-3));

    CHECK(p.omega_r0 == doctest::Approx(TWO_PI * 0.26));
    CHECK(p.delta_r == doctest::Approx(TWO_PI * 0.6));
}

TEST_CASE("pulse parametrization respects the amplitude bounds for extreme inputs") {
    const AmplitudeMap map{AmplitudeMap::Kind::Tanh01, TWO_PI * 0.26};
    for (double eps : {-1e6, -30.0, -1.0, 0.0, 1.0, 30.0, 1e6}) {
        const double a = map.value(eps);
        CHECK(a >= 0.0);
        CHECK(a <= TWO_PI * 0.26);
        CHECK(std::isfinite(map.deriv(eps)));
        CHECK(map.deriv(eps) >= 0.0);
    }
}

TEST_CASE("rydberg internal model: assembled Hamiltonian is Hermitian") {
    std::mt19937_64 rng(51);
    RydbergParams params;
    const auto problem = build_rydberg_internal(params, 100.0, 100,
                                                TargetSpec::equivalence_class(gate_cphase()));
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        RealVector eps(2);
        eps << u(rng), u(rng);
        const Matrix h = problem.model->assemble_hermitian(eps);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("the pi-phase gate diag(-1,1,1,1) sits in the CNOT class") {
    GateMatrix pi_phase = GateMatrix::Identity(4, 4);
    pi_phase(0, 0) = -1.0;
    const LocalInvariants g = local_invariants(pi_phase);
    CHECK(std::abs(g.g1 - 0.0) < 1e-12);
    CHECK(std::abs(g.g2 - 0.0) < 1e-12);
    CHECK(std::abs(g.g3 - 1.0) < 1e-12);
}

TEST_CASE("with the blue laser off, |r> stays empty and the gate is diagonal") {
    RydbergParams params;
    const auto problem = build_rydberg_internal(params, 20.0, 400,
                                                TargetSpec::equivalence_class(gate_cphase()));
    const std::vector<ControlField> fields{
        ControlField::constant(problem.grid, 0.4),    // red on
        ControlField::constant(problem.grid, -12.0),  // blue off
    };
    auto traj = propagate_forward(*problem.model, fields, problem.initial_states, problem.grid);
    double r_pop = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int node = 0; node <= 400; node += 40)
            for (int a = 0; a < 4; ++a) {
                r_pop = std::max(r_pop, std::norm(traj.at(k, node)[4 * a + 3]));  // |x r>
                r_pop = std::max(r_pop, std::norm(traj.at(k, node)[4 * 3 + a]));  // |r x>
            }
    CHECK(r_pop < 1e-12);
    const GateMatrix u = problem.gate_of(traj.final_states());
    double offdiag = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(u(i, j)));
    CHECK(offdiag < 1e-12);
}

TEST_CASE("resonant pi pulse transfers |0> to |i> in pi / Omega") {
    RydbergParams params;
    params.delta_r = 0.0;  // resonant intermediate state
    const double t_pi = PI / params.omega_r0;  // about 1.9 ns per leg
    CHECK(t_pi == doctest::Approx(1.923).epsilon(1e-3));

    const auto problem = build_rydberg_internal(params, t_pi, 200,
                                                TargetSpec::equivalence_class(gate_cphase()));
    const std::vector<ControlField> fields{
        ControlField::constant(problem.grid, 40.0),   // red at full amplitude
        ControlField::constant(problem.grid, -40.0),  // blue off
    };
    auto traj = propagate_forward(*problem.model, fields, problem.initial_states, problem.grid);
    // |01> starts at index 1; after a pi pulse atom 1 is in |i>: index 4*2+1 = 9
    const double pop_i = std::norm(traj.at(1, 200)[9]);
    CHECK(pop_i == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("decay rates double up when both atoms sit in |i>") {
    RydbergParams params;
    params.decay_on = true;
    const auto problem = build_rydberg_internal(params, 10.0, 50,
                                                TargetSpec::equivalence_class(gate_cphase()));
    const RealVector& g = problem.model->decay_diagonal();
    REQUIRE(g.size() == 16);
    CHECK(g[4 * 2 + 2] == doctest::Approx(2.0 / 27.7));  // |ii>
    CHECK(g[4 * 2 + 0] == doctest::Approx(1.0 / 27.7));  // |i0>
    CHECK(g[4 * 0 + 2] == doctest::Approx(1.0 / 27.7));  // |0i>
    CHECK(g[0] == 0.0);
    CHECK(g[5] == 0.0);
}

TEST_CASE("trap ground state is a stationary state of the grid model") {
    RydbergParams params;
    params.u0_au = 0.0;  // interaction off
    auto grid = std::make_shared<FourierGrid>(
        64, params.r0_um - params.grid_halfwidth_um, params.r0_um + params.grid_halfwidth_um,
        params.reduced_mass());
    const auto problem = build_rydberg_grid(params, 50.0, 500, grid,
                                            TargetSpec::equivalence_class(gate_cphase()));
    const std::vector<ControlField> fields{
        ControlField::constant(problem.grid, -40.0),
        ControlField::constant(problem.grid, -40.0),
    };
    auto traj = propagate_forward(*problem.model, fields, problem.initial_states, problem.grid,
                                  {.dense_threshold = 0});
    // autocorrelation of the motional factor for the |00> channel
    const Vector phi0 = trap_ground_state(params, *grid);
    Vector final_motional = traj.at(0, 500).segment(0, 64);
    CHECK(std::abs(std::abs(phi0.dot(final_motional)) - 1.0) < 1e-8);
}

TEST_CASE("grid and internal models agree on the logical phases for gentle pulses") {
    RydbergParams params;
    auto grid = std::make_shared<FourierGrid>(
        64, params.r0_um - params.grid_halfwidth_um, params.r0_um + params.grid_halfwidth_um,
        params.reduced_mass());
    const auto grid_problem = build_rydberg_grid(params, 50.0, 500, grid,
                                                 TargetSpec::equivalence_class(gate_cphase()));
    const auto internal_problem = build_rydberg_internal(
        params, 50.0, 500, TargetSpec::equivalence_class(gate_cphase()));
    const std::vector<ControlField> fields{
        ControlField::constant(grid_problem.grid, -0.5),
        ControlField::constant(grid_problem.grid, -0.5),
    };
    auto gt = propagate_forward(*grid_problem.model, fields, grid_problem.initial_states,
                                grid_problem.grid, {.dense_threshold = 0});
    auto it = propagate_forward(*internal_problem.model, fields, internal_problem.initial_states,
                                internal_problem.grid);
    const GateMatrix ug = grid_problem.gate_of(gt.final_states());
    const GateMatrix ui = internal_problem.gate_of(it.final_states());
    for (int k = 0; k < 4; ++k) {
        const double phase_diff =
            std::abs(std::arg(ug(k, k) * std::conj(ui(k, k))));
        CHECK(phase_diff < 0.1);
    }
}

TEST_CASE("nonlocal phase extraction") {
    GateMatrix pi_phase = GateMatrix::Identity(4, 4);
    pi_phase(0, 0) = -1.0;
    CHECK(std::abs(nonlocal_phase(pi_phase)) == doctest::Approx(PI));

    CHECK(nonlocal_phase(gate_identity()) == doctest::Approx(0.0));

    GateMatrix d = GateMatrix::Zero(4, 4);
    d(0, 0) = std::exp(IMAG_UNIT * 0.3);
    d(1, 1) = std::exp(IMAG_UNIT * 0.1);
    d(2, 2) = std::exp(IMAG_UNIT * 0.2);
    d(3, 3) = std::exp(IMAG_UNIT * 0.25);
    CHECK(nonlocal_phase(d) == doctest::Approx(0.25));

    CHECK_THROWS_AS(nonlocal_phase(gate_cnot()), NotDiagonal);
}

TEST_CASE("unit conversions behind the rydberg parameters") {
    // 1 E_h a0^3 / hbar at 1 um^3 is a tiny rate; the full u0 lands at
    // 20.12 rad um^3 / ns
    RydbergParams p;
    CHECK(p.u0_radns_um3() == doctest::Approx(20.118).epsilon(1e-3));
    // trap frequency about 8.75e5 rad/s = 8.75e-4 rad/ns
    CHECK(p.trap_omega() == doctest::Approx(8.75e-4).epsilon(0.01));
    // ground-state width about 0.041 um fits well inside the 0.3 um grid
    const double a_ho = 1.0 / std::sqrt(p.reduced_mass() * p.trap_omega());
    CHECK(a_ho == doctest::Approx(0.0409).epsilon(0.02));
}
