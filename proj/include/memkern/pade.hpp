#pragma once

#include <span>
#include <vector>

#include "memkern/grid.hpp"
#include "memkern/types.hpp"

namespace memkern {

inline constexpr double kDefaultPoleTol = 1e-6;

// [q/r] rational function
//   (sum_{k=0..q} xi_k t^k) / (sum_{k=q+1..q+r+1} xi_k t^{k-q-1}).
class PadeModel {
public:
    PadeModel() = default;
    PadeModel(int q, int r, std::vector<cplx> xi);

    // Constant 0 numerator over a unit denominator.
    static PadeModel zero(int q, int r);

    int q() const noexcept { return q_; }
    int r() const noexcept { return r_; }
    std::span<const cplx> coefficients() const noexcept { return xi_; }
    std::span<cplx> coefficients() noexcept { return xi_; }

    cplx numerator(double t) const noexcept;
    cplx denominator(double t) const noexcept;
    cplx numerator_derivative(double t) const noexcept;
    cplx denominator_derivative(double t) const noexcept;

private:
    int q_ = 0;
    int r_ = 0;
    std::vector<cplx> xi_{0.0, 1.0};
};

// Throws PoleError when |denominator(t)| <= pole_tol.
cplx pade_eval(const PadeModel& model, double t, double pole_tol = kDefaultPoleTol);
cplx pade_derivative(const PadeModel& model, double t, double pole_tol = kDefaultPoleTol);

double pade_pole_margin(const PadeModel& model, std::span<const double> nodes);
double pade_pole_margin(const PadeModel& model, const TimeGrid& grid);

}  // namespace memkern
