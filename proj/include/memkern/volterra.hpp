#pragma once

#include <functional>
#include <span>
#include <vector>

#include "memkern/grid.hpp"
#include "memkern/types.hpp"

namespace memkern {

// Kernel value B(t, lag). Convolution kernels ignore t.
using KernelFunction = std::function<Matrix4c(double t, double lag)>;

struct VolterraProblem {
    Matrix4c A = Matrix4c::Zero();
    KernelFunction kernel;
    StateVector x0 = StateVector::Zero();
    TimeGrid grid;
};

struct Trajectory {
    TimeGrid grid;
    std::vector<StateVector> values;
};

// Lag argument paired with history node k in the integral at row time t_row.
// The k = 0 endpoint uses t_row itself and the diagonal uses t0, as in the
// nonlocal Crank-Nicolson update; interior lags are (row - k) h.
double lag_value(const TimeGrid& grid, std::size_t row, std::size_t k);

// Kernel values on the lower-triangular (row, k) lattice together with the
// factorised step matrices. Reused across trajectories sharing A and kernel.
class KernelLattice {
public:
    KernelLattice(const Matrix4c& A, const KernelFunction& kernel, const TimeGrid& grid);

    const TimeGrid& grid() const noexcept { return grid_; }
    const Matrix4c& A() const noexcept { return A_; }
    const Matrix4c& at(std::size_t row, std::size_t k) const {
        return values_[row * (row + 1) / 2 + k];
    }
    // Largest spectral norm over the lattice.
    double max_kernel_norm() const;

    Trajectory solve(const StateVector& x0) const;

private:
    Matrix4c A_;
    TimeGrid grid_;
    std::vector<Matrix4c> values_;
    std::vector<Eigen::PartialPivLU<Matrix4c>> steps_;  // steps_[n] advances n -> n+1
};

Trajectory solve(const VolterraProblem& problem);
std::vector<Trajectory> solve_batch(const Matrix4c& A, const KernelFunction& kernel,
                                    const TimeGrid& grid, std::span<const StateVector> x0s);

// a priori estimate sup_n |x_n| <= |x0| exp(T (|A| + T K_max))
struct GronwallCheck {
    double sup_norm = 0.0;
    double bound = 0.0;
    bool holds = false;
};

GronwallCheck gronwall_check(const Trajectory& traj, const Matrix4c& A, double kernel_max_norm);
double spectral_norm(const Matrix4c& m);

}  // namespace memkern
