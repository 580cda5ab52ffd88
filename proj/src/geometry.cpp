#include "weyl/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "weyl/core.hpp"
#include "weyl/errors.hpp"

namespace weyl {

namespace {

void require_4x4(const GateMatrix& u, const char* what) {
    if (u.rows() != 4 || u.cols() != 4) throw DimensionMismatch(std::string(what) + " needs a 4x4 matrix");
}

// F^2 phases of the canonical gate, in Bell-basis column order.
std::array<double, 4> m_phase_pattern(const WeylPoint& c) {
    return {c.cx - c.cy + c.cz, -c.cx + c.cy + c.cz, c.cx + c.cy - c.cz, -(c.cx + c.cy + c.cz)};
}

double mod_pi(double x) {
    double r = std::fmod(x, PI);
    if (r < 0) r += PI;
    return r;
}

Complex det4(const GateMatrix& u) { return u.determinant(); }

// Simultaneous real-orthogonal eigenbasis of a unitary complex symmetric m:
// diagonalize Re(m), then Im(m) restricted to each degenerate block.
void diagonalize_complex_symmetric(const GateMatrix& m, Eigen::Matrix4d& p, Eigen::Vector4cd& d,
                                   bool* degenerate = nullptr) {
    Eigen::Matrix4d x = m.real();
    Eigen::Matrix4d y = m.imag();
    x = 0.5 * (x + x.transpose());
    y = 0.5 * (y + y.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(x);
    p = es.eigenvectors();
    Eigen::Vector4d wx = es.eigenvalues();

    if (degenerate) *degenerate = false;
    int i = 0;
    while (i < 4) {
        int j = i;
        while (j + 1 < 4 && std::abs(wx[j + 1] - wx[i]) < 1e-8) ++j;
        if (j > i) {
            if (degenerate) *degenerate = true;
            const int b = j - i + 1;
            Eigen::MatrixXd yb = p.middleCols(i, b).transpose() * y * p.middleCols(i, b);
            yb = 0.5 * (yb + yb.transpose()).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esy(yb);
            p.middleCols(i, b) = p.middleCols(i, b) * esy.eigenvectors();
        }
        i = j + 1;
    }
    Eigen::Matrix4cd diag = p.transpose().cast<Complex>() * m * p.cast<Complex>();
    d = diag.diagonal();
}

}  // namespace

GateMatrix bell_transform() {
    const double s = 1.0 / std::sqrt(2.0);
    GateMatrix q(4, 4);
    q << Complex(s, 0), Complex(0, s), Complex(0, 0), Complex(0, 0),
         Complex(0, 0), Complex(0, 0), Complex(0, s), Complex(s, 0),
         Complex(0, 0), Complex(0, 0), Complex(0, s), Complex(-s, 0),
         Complex(s, 0), Complex(0, -s), Complex(0, 0), Complex(0, 0);
    return q;
}

GateMatrix m_matrix(const GateMatrix& u) {
    require_4x4(u, "m_matrix");
    static const GateMatrix q = bell_transform();
    GateMatrix ub = q.adjoint() * u * q;
    return ub.transpose() * ub;
}

LocalInvariants local_invariants(const GateMatrix& u) {
    require_4x4(u, "local_invariants");
    const Complex det = det4(u);
    if (std::abs(det) <= SINGULAR_DET_TOL) throw NearSingularGate(std::abs(det));
    const GateMatrix m = m_matrix(u);
    const Complex tr = m.trace();
    const Complex tr2 = tr * tr;
    const Complex trmm = (m * m).trace();
    const Complex g12 = tr2 / (16.0 * det);
    const Complex g3 = (tr2 - trmm) / (4.0 * det);
    return {g12.real(), g12.imag(), g3.real()};
}

GateMatrix canonical_gate(const WeylPoint& c) {
    static const GateMatrix q = bell_transform();
    const auto ph = m_phase_pattern(c);
    Eigen::Vector4cd f;
    for (int k = 0; k < 4; ++k) f[k] = std::exp(IMAG_UNIT * (0.5 * ph[k]));
    return q * f.asDiagonal() * q.adjoint();
}

WeylPoint canonicalize(const WeylPoint& c_in) {
    std::array<double, 3> c = {mod_pi(c_in.cx), mod_pi(c_in.cy), mod_pi(c_in.cz)};
    std::sort(c.begin(), c.end(), std::greater<double>());
    if (c[0] + c[1] > PI) {
        const double a = PI - c[1];
        const double b = PI - c[0];
        c = {a, b, c[2]};
        std::sort(c.begin(), c.end(), std::greater<double>());
    }
    if (c[2] < 1e-13 && c[0] > PI / 2 + 1e-13) {
        c = {PI - c[0], c[1], c[2]};
        std::sort(c.begin(), c.end(), std::greater<double>());
    }
    return {c[0], c[1], c[2]};
}

WeylPoint weyl_coordinates(const GateMatrix& u) {
    require_4x4(u, "weyl_coordinates");
    const Complex det = det4(u);
    if (std::abs(det) <= SINGULAR_DET_TOL) throw NearSingularGate(std::abs(det));

    // Phase-normalize so det = 1, then read the eigenphases of m.
    GateMatrix un = u / std::pow(det, 0.25);
    const GateMatrix m = m_matrix(un);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, /*computeEigenvectors=*/false);
    Eigen::Vector4cd ev = es.eigenvalues();
    std::array<double, 4> th;
    for (int k = 0; k < 4; ++k) th[k] = std::arg(ev[k]);

    // The three pairings of the four phases give (2 c_j) mod 2 pi, each up
    // to sign; resolve signs by matching invariants of the candidate class.
    const double s1 = 0.5 * (th[0] + th[1]);
    const double s2 = 0.5 * (th[0] + th[2]);
    const double s3 = 0.5 * (th[0] + th[3]);
    const LocalInvariants gu = local_invariants(un);

    WeylPoint best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (int sx = -1; sx <= 1; sx += 2)
        for (int sy = -1; sy <= 1; sy += 2)
            for (int sz = -1; sz <= 1; sz += 2) {
                const WeylPoint cand = canonicalize({sx * s1, sy * s2, sz * s3});
                const double d = class_distance(local_invariants(canonical_gate(cand)), gu);
                if (d < best_d) {
                    best_d = d;
                    best = cand;
                }
            }
    return best;
}

double class_distance(const LocalInvariants& a, const LocalInvariants& b) {
    const double d1 = a.g1 - b.g1;
    const double d2 = a.g2 - b.g2;
    const double d3 = a.g3 - b.g3;
    return d1 * d1 + d2 * d2 + d3 * d3;
}

namespace {

// One side of the Cartan decomposition: real-orthogonal o1, o2 with
// U_B = o1 F(c) o2 in the Bell basis. U must be (near-)unitary.
struct BellFactors {
    Eigen::Matrix4d o1;
    Eigen::Matrix4d o2;
    bool degenerate;
};

BellFactors bell_factors(const GateMatrix& u, const WeylPoint& c) {
    static const GateMatrix q = bell_transform();
    const Complex det = det4(u);
    if (std::abs(det) <= SINGULAR_DET_TOL) throw NearSingularGate(std::abs(det));
    GateMatrix ub = q.adjoint() * (u / std::pow(det, 0.25)) * q;

    const auto pattern = m_phase_pattern(c);
    Eigen::Vector4cd f;
    for (int k = 0; k < 4; ++k) f[k] = std::exp(IMAG_UNIT * (0.5 * pattern[k]));

    // m's spectrum equals the F^2 pattern up to the det-root branch (an
    // overall sign); try both branches and match eigenvalues by permutation.
    Eigen::Matrix4d p;
    Eigen::Vector4cd d;
    bool degenerate = false;
    int perm[4] = {0, 1, 2, 3};
    bool matched = false;
    for (int branch = 0; branch < 2 && !matched; ++branch) {
        if (branch == 1) ub *= IMAG_UNIT;  // flips the sign of m
        GateMatrix m = ub.transpose() * ub;
        m = 0.5 * (m + m.transpose().eval());
        diagonalize_complex_symmetric(m, p, d, &degenerate);

        // Greedy assignment of eigenvalues to the F^2 pattern.
        int idx[4] = {0, 1, 2, 3};
        std::sort(idx, idx + 4, [&](int a, int b) { return std::arg(d[a]) < std::arg(d[b]); });
        // try all 24 permutations; 4! is small and exact
        std::array<int, 4> pp = {0, 1, 2, 3};
        double best = std::numeric_limits<double>::infinity();
        do {
            double err = 0.0;
            for (int k = 0; k < 4; ++k) err = std::max(err, std::abs(d[pp[k]] - f[k] * f[k]));
            if (err < best) {
                best = err;
                for (int k = 0; k < 4; ++k) perm[k] = pp[k];
            }
        } while (std::next_permutation(pp.begin(), pp.end()));
        matched = best < 1e-4;
    }
    if (!matched) throw Error("Cartan factorization: eigenphase pattern match failed");

    Eigen::Matrix4d p_ord;
    for (int k = 0; k < 4; ++k) p_ord.col(k) = p.col(perm[k]);
    if (p_ord.determinant() < 0) p_ord.col(0) *= -1.0;

    // m = o2^T F^2 o2 with o2 = P^T; then o1 = U_B o2^T conj(F).
    Eigen::Matrix4d o2 = p_ord.transpose();
    GateMatrix o1c = ub * p_ord.cast<Complex>() * f.conjugate().asDiagonal();

    // For near-unitary input o1 acquires a small non-orthogonal part;
    // project back with a polar decomposition of the real part.
    Eigen::Matrix4d o1r = o1c.real();
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(o1r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix4d o1 = svd.matrixU() * svd.matrixV().transpose();
    if (o1.determinant() < 0) {
        // flip the weakest singular direction to stay in SO(4)
        Eigen::Matrix4d uu = svd.matrixU();
        uu.col(3) *= -1.0;
        o1 = uu * svd.matrixV().transpose();
    }
    return {o1, o2, degenerate};
}

}  // namespace

LocalFactorization extract_local_factors(const GateMatrix& u, const GateMatrix& o,
                                         double class_tol) {
    require_4x4(u, "extract_local_factors");
    require_4x4(o, "extract_local_factors");
    const LocalInvariants gu = local_invariants(u);
    const LocalInvariants go = local_invariants(o);
    const double d = class_distance(gu, go);
    if (d > class_tol) throw ClassMismatch(d, class_tol);

    static const GateMatrix q = bell_transform();
    const WeylPoint c = weyl_coordinates(u);
    const BellFactors fu = bell_factors(u, c);
    const BellFactors fo = bell_factors(o, c);

    // u ~ k1u A k2u and o ~ k1o A k2o  =>  (k1o k1u^+) u (k2u^+ k2o) ~ o.
    const GateMatrix k1u = q * fu.o1.cast<Complex>() * q.adjoint();
    const GateMatrix k2u = q * fu.o2.cast<Complex>() * q.adjoint();
    const GateMatrix k1o = q * fo.o1.cast<Complex>() * q.adjoint();
    const GateMatrix k2o = q * fo.o2.cast<Complex>() * q.adjoint();

    LocalFactorization out;
    out.k1 = k1o * k1u.adjoint();
    out.k2 = k2u.adjoint() * k2o;
    out.canonical = canonical_gate(c);
    out.degenerate_spectrum = fu.degenerate || fo.degenerate;
    return out;
}

double gate_error(const GateMatrix& u, const GateMatrix& o, const GateMatrix& k1,
                  const GateMatrix& k2, bool align_phase) {
    require_4x4(u, "gate_error");
    const double n = 4.0;
    GateMatrix x = k1 * u * k2;
    Complex tr = (o.adjoint() * x).trace();
    if (align_phase && std::abs(tr) > 0) {
        x *= std::exp(-IMAG_UNIT * std::arg(tr));
        tr = (o.adjoint() * x).trace();
    }
    return 1.0 - tr.real() / n;
}

double kron_factor(const GateMatrix& k, Matrix& a, Matrix& b) {
    require_4x4(k, "kron_factor");
    // Rearrange so that a (x) b becomes the rank-one outer product
    // vec(a) vec(b)^T, then take the dominant singular pair.
    Eigen::Matrix4cd r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 2; ++p)
                for (int s = 0; s < 2; ++s) r(2 * i + j, 2 * p + s) = k(2 * i + p, 2 * j + s);
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma = svd.singularValues()[0];
    Eigen::Vector4cd va = svd.matrixU().col(0) * std::sqrt(sigma);
    Eigen::Vector4cd vb = svd.matrixV().col(0).conjugate() * std::sqrt(sigma);
    a = Matrix(2, 2);
    b = Matrix(2, 2);
    a << va[0], va[1], va[2], va[3];
    b << vb[0], vb[1], vb[2], vb[3];
    Matrix fit(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int p = 0; p < 2; ++p)
                for (int s = 0; s < 2; ++s) fit(2 * i + p, 2 * j + s) = a(i, j) * b(p, s);
    return (k - fit).norm();
}

namespace {

GateMatrix diag_gate(Complex a, Complex b, Complex c, Complex d) {
    GateMatrix g = GateMatrix::Zero(4, 4);
    g(0, 0) = a;
    g(1, 1) = b;
    g(2, 2) = c;
    g(3, 3) = d;
    return g;
}

}  // namespace

GateMatrix gate_identity() { return GateMatrix::Identity(4, 4); }

GateMatrix gate_cnot() {
    GateMatrix g = GateMatrix::Zero(4, 4);
    g(0, 0) = g(1, 1) = g(2, 3) = g(3, 2) = 1.0;
    return g;
}

GateMatrix gate_cphase() { return diag_gate(1, 1, 1, -1); }

GateMatrix gate_swap() {
    GateMatrix g = GateMatrix::Zero(4, 4);
    g(0, 0) = g(1, 2) = g(2, 1) = g(3, 3) = 1.0;
    return g;
}

GateMatrix gate_b() { return canonical_gate({PI / 2, PI / 4, 0.0}); }

GateMatrix gate_sqrt_swap() { return canonical_gate({PI / 4, PI / 4, PI / 4}); }

GateMatrix gate_ud() {
    const double s = 1.0 / std::sqrt(2.0);
    return diag_gate(-s * Complex(1, -1), -s * Complex(1, 1), -s * Complex(1, 1),
                     -s * Complex(1, -1));
}

const std::vector<NamedClass>& equivalence_class_table() {
    static const std::vector<NamedClass> table = [] {
        std::vector<NamedClass> t;
        auto add = [&t](const std::string& name, WeylPoint c, LocalInvariants g, GateMatrix rep) {
            t.push_back({name, c, g, std::move(rep)});
        };
        add("Identity", {0, 0, 0}, {1, 0, 3}, gate_identity());
        add("CNOT", {PI / 2, 0, 0}, {0, 0, 1}, gate_cnot());
        add("CPHASE", {PI / 2, 0, 0}, {0, 0, 1}, gate_cphase());
        add("B-gate", {PI / 2, PI / 4, 0}, {0, 0, 0}, gate_b());
        add("sqrtSWAP", {PI / 4, PI / 4, PI / 4}, {0, 0.25, 0}, gate_sqrt_swap());
        add("SWAP", {PI / 2, PI / 2, PI / 2}, {-1, 0, -3}, gate_swap());
        return t;
    }();
    return table;
}

std::pair<const NamedClass*, double> nearest_named_class(const LocalInvariants& g) {
    const NamedClass* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& entry : equivalence_class_table()) {
        const double d = class_distance(g, entry.g);
        if (d < best_d) {
            best_d = d;
            best = &entry;
        }
    }
    return {best, best_d};
}

}  // namespace weyl
