#include "memkern/superop.hpp"

#include <array>
#include <cmath>

namespace memkern {

Matrix2c sigma_x() {
    Matrix2c m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix2c sigma_y() {
    Matrix2c m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}

Matrix2c sigma_z() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

namespace {

// Column-major vec(X) index of each component of our ordering:
// rho00 -> 0, rho11 -> 3, rho01 -> 2, rho10 -> 1.
constexpr std::array<int, 4> kColumnMajorIndex{0, 3, 2, 1};

Eigen::Matrix4cd kron(const Matrix2c& a, const Matrix2c& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

}  // namespace

Matrix4c double_commutator_superop(const Matrix2c& P, const Matrix2c& Q) {
    // vec(A X B) = (B^T kron A) vec(X), so vec([M, X]) = (I kron M - M^T kron I) vec(X).
    const Matrix2c I = Matrix2c::Identity();
    const Eigen::Matrix4cd commP = kron(I, P) - kron(P.transpose(), I);
    const Eigen::Matrix4cd commQ = kron(I, Q) - kron(Q.transpose(), I);
    const Eigen::Matrix4cd colmajor = commP * commQ;

    Matrix4c out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = colmajor(kColumnMajorIndex[i], kColumnMajorIndex[j]);
    return out;
}

Matrix2c sigma_x_rotating(double t, double Delta) {
    return std::cos(Delta * t) * sigma_x() + std::sin(Delta * t) * sigma_y();
}

}  // namespace memkern
