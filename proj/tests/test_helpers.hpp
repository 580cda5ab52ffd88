#pragma once

#include <random>

#include "weyl/types.hpp"

namespace weyl::testing {

inline Matrix random_complex_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

// Haar-distributed unitary via QR of a Ginibre matrix.
inline Matrix random_unitary(int n, std::mt19937_64& rng) {
    Matrix z = random_complex_matrix(n, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
    return q;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Random element of SU(2) x SU(2) as a 4x4 local operation.
inline Matrix random_local(std::mt19937_64& rng) {
    return kron(random_unitary(2, rng), random_unitary(2, rng));
}

inline std::vector<StateVector> columns_of(const Matrix& u) {
    std::vector<StateVector> cols;
    for (Eigen::Index k = 0; k < u.cols(); ++k) cols.push_back(u.col(k));
    return cols;
}

}  // namespace weyl::testing
