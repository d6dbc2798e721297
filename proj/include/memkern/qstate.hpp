#pragma once

#include <random>

#include "memkern/types.hpp"

namespace memkern {

StateVector vectorize(const Matrix2c& rho);
Matrix2c devectorize(const StateVector& x);

// Clips the eigenvalues of a Hermitian 2x2 matrix at zero and rescales to unit
// trace. Throws AllEigenvaluesNonpositive when nothing survives the clip.
DensityMatrix project_psd(const Matrix2c& rho);

// R = [[s1, i s2], [-i s2, 1 - s1]] pushed onto the physical set.
DensityMatrix initial_state_from_uniforms(double s1, double s2);
DensityMatrix sample_initial_state(std::mt19937_64& rng);

struct DensityDefects {
    double hermiticity = 0.0;     // |rho10 - conj(rho01)|
    double trace = 0.0;           // |tr rho - 1|
    double min_eigenvalue = 0.0;
};

DensityDefects density_defects(const Matrix2c& rho);
bool is_density_matrix(const Matrix2c& rho, double herm_tol = 1e-14, double trace_tol = 1e-14,
                       double psd_tol = 1e-12);

}  // namespace memkern
