#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"
#include "weyl/core.hpp"
#include "weyl/errors.hpp"
#include "weyl/geometry.hpp"
#include "weyl/grid.hpp"

using namespace weyl;
using namespace weyl::testing;

TEST_CASE("time grid basics") {
    TimeGrid g(10.0, 4);
    CHECK(g.dt() == doctest::Approx(2.5));
    CHECK(g.n_nodes() == 5);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(4) == doctest::Approx(10.0));
    CHECK(g.midpoint(0) == doctest::Approx(1.25));
    for (int i = 0; i < g.n_steps(); ++i)
        CHECK(g.node(i + 1) - g.node(i) == doctest::Approx(g.dt()).epsilon(1e-15));
    CHECK_THROWS_AS(TimeGrid(10.0, 1), ConfigError);
    CHECK_THROWS_AS(TimeGrid(-1.0, 10), ConfigError);
}

TEST_CASE("control field validation") {
    TimeGrid g(1.0, 8);
    CHECK_THROWS_AS(ControlField(g, RealVector::Zero(7)), DimensionMismatch);
    RealVector bad = RealVector::Zero(8);
    bad[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ControlField(g, bad), Error);
    ControlField f = ControlField::constant(g, 0.25);
    CHECK(f[5] == 0.25);
}

TEST_CASE("shape function stays within [0,1] on every grid") {
    auto s = ShapeFunction::sin_squared();
    for (int n : {2, 7, 64, 999}) {
        TimeGrid g(3.7, n);
        RealVector v = s.sample_midpoints(g);
        CHECK(v.minCoeff() >= 0.0);
        CHECK(v.maxCoeff() <= 1.0);
    }
    CHECK(s.value(0.0, 1.0) == doctest::Approx(0.0));
    CHECK(s.value(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(ShapeFunction::from_samples(RealVector::Constant(4, 1.5)), ConfigError);
}

TEST_CASE("projected gate of identity evolution is the identity") {
    SubspaceProjector logical({0, 1, 2, 3}, 4);
    std::vector<StateVector> states;
    for (int k = 0; k < 4; ++k) {
        Vector e = Vector::Zero(4);
        e[k] = 1;
        states.push_back(e);
    }
    GateMatrix u = projected_gate(states, logical);
    CHECK((u - GateMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("projected gate reproduces U_d from its columns") {
    SubspaceProjector logical({0, 1, 2, 3}, 4);
    const GateMatrix ud = gate_ud();
    GateMatrix u = projected_gate(columns_of(ud), logical);
    CHECK((u - ud).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("projected gate equals brute-force overlaps on an 8-dim space") {
    std::mt19937_64 rng(11);
    const Matrix big = random_unitary(8, rng);
    SubspaceProjector logical({0, 2, 5, 7}, 8);
    std::vector<StateVector> states;
    for (int k = 0; k < 4; ++k) states.push_back(big.col(logical[k]));
    GateMatrix u = projected_gate(states, logical);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
            Vector basis_j = Vector::Zero(8);
            basis_j[logical[j]] = 1;
            const Complex overlap = basis_j.dot(states[k]);
            CHECK(std::abs(u(j, k) - overlap) < 1e-15);
        }
    CHECK_THROWS_AS(projected_gate({states[0]}, logical), DimensionMismatch);
}

TEST_CASE("projected gate is linear in each input state") {
    std::mt19937_64 rng(12);
    SubspaceProjector logical({0, 1, 2, 3}, 6);
    std::normal_distribution<double> gauss;
    auto rand_state = [&] {
        Vector v(6);
        for (int i = 0; i < 6; ++i) v[i] = Complex(gauss(rng), gauss(rng));
        return v;
    };
    std::vector<StateVector> a, b, mix;
    const Complex alpha(0.3, -1.1), beta(-0.7, 0.2);
    for (int k = 0; k < 4; ++k) {
        a.push_back(rand_state());
        b.push_back(rand_state());
        mix.push_back(alpha * a.back() + beta * b.back());
    }
    GateMatrix u_mix = projected_gate(mix, logical);
    GateMatrix u_lin = alpha * projected_gate(a, logical) + beta * projected_gate(b, logical);
    CHECK((u_mix - u_lin).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("unitarity defect") {
    CHECK(unitarity_defect(GateMatrix::Identity(4, 4)) == doctest::Approx(0.0));

    GateMatrix u = GateMatrix::Identity(4, 4);
    u.col(2).setZero();
    CHECK(unitarity_defect(u) == doctest::Approx(0.25));

    // leaky projected gate: defect equals 1 - sum |U_jk|^2 / 4
    std::mt19937_64 rng(13);
    const Matrix big = random_unitary(9, rng);  // 3 levels per qubit
    SubspaceProjector logical({0, 1, 3, 4}, 9);
    std::vector<StateVector> states;
    for (int k = 0; k < 4; ++k) states.push_back(big.col(logical[k]));
    GateMatrix proj = projected_gate(states, logical);
    const double defect = unitarity_defect(proj);
    CHECK(defect > 0.0);
    CHECK(defect < 1.0);
    double sum = 0.0;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) sum += std::norm(proj(j, k));
    CHECK(defect == doctest::Approx(1.0 - sum / 4.0).epsilon(1e-12));
}

TEST_CASE("projection of unitary evolution on an invariant subspace is unitary") {
    std::mt19937_64 rng(14);
    // block-diagonal unitary: logical block x environment block
    const Matrix u4 = random_unitary(4, rng);
    const Matrix u3 = random_unitary(3, rng);
    Matrix big = Matrix::Zero(7, 7);
    big.topLeftCorner(4, 4) = u4;
    big.bottomRightCorner(3, 3) = u3;
    SubspaceProjector logical({0, 1, 2, 3}, 7);
    std::vector<StateVector> states;
    for (int k = 0; k < 4; ++k) states.push_back(big.col(k));
    CHECK(unitarity_defect(projected_gate(states, logical)) <= 1e-10);
}

TEST_CASE("subspace projector is idempotent and validates indices") {
    SubspaceProjector p({1, 3}, 5);
    Vector v(5);
    v << 1., 2., 3., 4., 5.;
    Vector pv = p.apply(v);
    CHECK((p.apply(pv) - pv).norm() == doctest::Approx(0.0));
    CHECK(p.population(v) == doctest::Approx(4. + 16.));
    CHECK_THROWS_AS(SubspaceProjector({0, 0}, 5), ConfigError);
    CHECK_THROWS_AS(SubspaceProjector({5}, 5), DimensionMismatch);
}
