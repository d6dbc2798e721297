#include "memkern/qstate.hpp"

#include <algorithm>
#include <cmath>

#include "memkern/errors.hpp"

namespace memkern {

StateVector vectorize(const Matrix2c& rho) {
    return StateVector{rho(0, 0), rho(1, 1), rho(0, 1), rho(1, 0)};
}

Matrix2c devectorize(const StateVector& x) {
    Matrix2c rho;
    rho << x[0], x[2], x[3], x[1];
    return rho;
}

namespace {

// Hermitian part with an exactly real diagonal.
Matrix2c hermitize(const Matrix2c& m) {
    Matrix2c h;
    const cplx off = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    h << m(0, 0).real(), off, std::conj(off), m(1, 1).real();
    return h;
}

}  // namespace

DensityMatrix project_psd(const Matrix2c& rho) {
    const Matrix2c h = hermitize(rho);
    Eigen::SelfAdjointEigenSolver<Matrix2c> eig(h);
    const Eigen::Vector2d lambda = eig.eigenvalues();

    if (lambda.minCoeff() >= 0.0) {
        const double tr = h(0, 0).real() + h(1, 1).real();
        if (!(tr > 0.0)) throw AllEigenvaluesNonpositive();
        return hermitize(h / tr);
    }
    const Eigen::Vector2d clipped = lambda.cwiseMax(0.0);
    const double tr = clipped.sum();
    if (!(tr > 0.0)) throw AllEigenvaluesNonpositive();
    const Matrix2c v = eig.eigenvectors();
    const Matrix2c out = v * (clipped / tr).cast<cplx>().asDiagonal() * v.adjoint();
    return hermitize(out);
}

DensityMatrix initial_state_from_uniforms(double s1, double s2) {
    Matrix2c r;
    r << s1, kI * s2, -kI * s2, 1.0 - s1;
    return project_psd(r);
}

DensityMatrix sample_initial_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double s1 = unit(rng);
    const double s2 = unit(rng);
    return initial_state_from_uniforms(s1, s2);
}

DensityDefects density_defects(const Matrix2c& rho) {
    DensityDefects d;
    d.hermiticity = std::abs(rho(1, 0) - std::conj(rho(0, 1)));
    d.hermiticity = std::max({d.hermiticity, std::abs(rho(0, 0).imag()), std::abs(rho(1, 1).imag())});
    d.trace = std::abs(rho(0, 0) + rho(1, 1) - 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix2c> eig(hermitize(rho), Eigen::EigenvaluesOnly);
    d.min_eigenvalue = eig.eigenvalues().minCoeff();
    return d;
}

bool is_density_matrix(const Matrix2c& rho, double herm_tol, double trace_tol, double psd_tol) {
    const DensityDefects d = density_defects(rho);
    return d.hermiticity <= herm_tol && d.trace <= trace_tol && d.min_eigenvalue >= -psd_tol;
}

}  // namespace memkern
