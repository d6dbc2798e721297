#include "memkern/grid.hpp"

#include <cmath>

#include "memkern/errors.hpp"

namespace memkern {

TimeGrid::TimeGrid(double t0, double T, std::size_t M) : t0_(t0), T_(T), M_(M) {
    if (M < 2) throw DomainError("time grid needs at least two nodes");
    if (!(T > t0) || !std::isfinite(t0) || !std::isfinite(T))
        throw DomainError("time grid needs finite t0 < T");
}

std::vector<double> TimeGrid::nodes() const {
    std::vector<double> out(M_);
    for (std::size_t i = 0; i < M_; ++i) out[i] = node(i);
    return out;
}

}  // namespace memkern
