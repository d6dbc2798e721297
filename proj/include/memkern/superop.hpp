#pragma once

#include "memkern/types.hpp"

namespace memkern {

Matrix2c sigma_x();
Matrix2c sigma_y();
Matrix2c sigma_z();

// S with vectorize([P, [Q, rho]]) = S * vectorize(rho) in the
// (rho00, rho11, rho01, rho10) ordering.
Matrix4c double_commutator_superop(const Matrix2c& P, const Matrix2c& Q);

// Interaction-picture image cos(Delta t) sigma_x + sin(Delta t) sigma_y.
Matrix2c sigma_x_rotating(double t, double Delta);

}  // namespace memkern
