#pragma once

#include <complex>

#include <Eigen/Dense>

namespace memkern {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// 2x2 reduced density matrix of the qubit.
using DensityMatrix = Matrix2c;
// Vectorised density matrix, ordered (rho00, rho11, rho01, rho10). This order is
// global: every kernel assembly depends on it.
using StateVector = Vector4c;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace memkern
