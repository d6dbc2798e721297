#pragma once

#include <cstddef>
#include <vector>

namespace memkern {

// Uniform time grid t_i = t0 + i*h, i = 0..M-1, h = (T - t0)/(M - 1).
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double t0, double T, std::size_t M);

    double t0() const noexcept { return t0_; }
    double T() const noexcept { return T_; }
    std::size_t size() const noexcept { return M_; }
    double step() const noexcept { return (T_ - t0_) / static_cast<double>(M_ - 1); }
    double node(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * step(); }
    double length() const noexcept { return T_ - t0_; }
    std::vector<double> nodes() const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_ = 1e-6;
    double T_ = 3.0;
    std::size_t M_ = 64;
};

}  // namespace memkern
