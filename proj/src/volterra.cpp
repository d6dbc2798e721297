#include "memkern/volterra.hpp"

#include <cmath>

#include "memkern/errors.hpp"
#include "memkern/parallel.hpp"

namespace memkern {

namespace {

bool all_finite(const StateVector& x) {
    for (int i = 0; i < 4; ++i)
        if (!std::isfinite(x[i].real()) || !std::isfinite(x[i].imag())) return false;
    return true;
}

bool all_finite(const Matrix4c& m) {
    for (int i = 0; i < 16; ++i)
        if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
    return true;
}

constexpr double kMinRcond = 1e-12;

}  // namespace

double lag_value(const TimeGrid& grid, std::size_t row, std::size_t k) {
    if (k == 0) return grid.node(row);
    if (k == row) return grid.t0();
    return static_cast<double>(row - k) * grid.step();
}

KernelLattice::KernelLattice(const Matrix4c& A, const KernelFunction& kernel, const TimeGrid& grid)
    : A_(A), grid_(grid) {
    const std::size_t M = grid.size();
    values_.resize(M * (M + 1) / 2);
    for (std::size_t row = 0; row < M; ++row) {
        const double t = grid.node(row);
        for (std::size_t k = 0; k <= row; ++k) {
            Matrix4c& v = values_[row * (row + 1) / 2 + k];
            v = kernel(t, lag_value(grid, row, k));
            if (!all_finite(v)) throw NonFiniteState(row);
        }
    }

    const double h = grid.step();
    const Matrix4c I = Matrix4c::Identity();
    steps_.reserve(M - 1);
    for (std::size_t n = 0; n + 1 < M; ++n) {
        const Matrix4c step = I - 0.5 * h * A_ - 0.25 * h * h * at(n + 1, n + 1);
        steps_.emplace_back(step);
        const double rc = steps_.back().rcond();
        if (!(rc >= kMinRcond)) throw SingularStepMatrix(n);
    }
}

double KernelLattice::max_kernel_norm() const {
    double k = 0.0;
    for (const auto& v : values_) k = std::max(k, spectral_norm(v));
    return k;
}

Trajectory KernelLattice::solve(const StateVector& x0) const {
    const std::size_t M = grid_.size();
    const double h = grid_.step();
    Trajectory out{grid_, {}};
    out.values.resize(M);
    auto& x = out.values;
    x[0] = x0;

    // partial = B(t_n, .) x_0 + 2 sum_{k=1}^{n-1} B(t_n, t_n - t_k) x_k, i.e. the
    // trapezoid sum for the integral up to t_n without its diagonal term.
    StateVector partial = StateVector::Zero();
    for (std::size_t n = 0; n + 1 < M; ++n) {
        const StateVector hist_n =
            n == 0 ? StateVector::Zero() : StateVector(partial + at(n, n) * x[n]);

        StateVector next = at(n + 1, 0) * x[0];
        for (std::size_t k = 1; k <= n; ++k) next += 2.0 * (at(n + 1, k) * x[k]);

        const StateVector g = A_ * x[n] + 0.5 * h * (hist_n + next);
        x[n + 1] = steps_[n].solve(StateVector(x[n] + 0.5 * h * g));
        if (!all_finite(x[n + 1])) throw NonFiniteState(n + 1);
        partial = next;
    }
    return out;
}

Trajectory solve(const VolterraProblem& problem) {
    return KernelLattice(problem.A, problem.kernel, problem.grid).solve(problem.x0);
}

std::vector<Trajectory> solve_batch(const Matrix4c& A, const KernelFunction& kernel,
                                    const TimeGrid& grid, std::span<const StateVector> x0s) {
    std::vector<Trajectory> out(x0s.size());
    if (x0s.empty()) return out;
    const KernelLattice lattice(A, kernel, grid);
    parallel_for(x0s.size(), [&](std::size_t i) { out[i] = lattice.solve(x0s[i]); });
    return out;
}

double spectral_norm(const Matrix4c& m) {
    Eigen::JacobiSVD<Matrix4c> svd(m);
    return svd.singularValues()(0);
}

GronwallCheck gronwall_check(const Trajectory& traj, const Matrix4c& A, double kernel_max_norm) {
    GronwallCheck c;
    for (const auto& x : traj.values) c.sup_norm = std::max(c.sup_norm, x.norm());
    const double T = traj.grid.length();
    c.bound = traj.values.front().norm() * std::exp(T * (spectral_norm(A) + T * kernel_max_norm));
    c.holds = c.sup_norm <= c.bound * (1.0 + 1e-12);
    return c;
}

}  // namespace memkern
