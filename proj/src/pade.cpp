#include "memkern/pade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "memkern/errors.hpp"

namespace memkern {

PadeModel::PadeModel(int q, int r, std::vector<cplx> xi) : q_(q), r_(r), xi_(std::move(xi)) {
    if (q < 0 || r < 0) throw DomainError("Pade orders must be non-negative");
    if (xi_.size() != static_cast<std::size_t>(q + r + 2))
        throw LengthMismatch(static_cast<std::size_t>(q + r + 2), xi_.size());
}

PadeModel PadeModel::zero(int q, int r) {
    std::vector<cplx> xi(static_cast<std::size_t>(q + r + 2), cplx{});
    xi[static_cast<std::size_t>(q + 1)] = 1.0;
    return PadeModel(q, r, std::move(xi));
}

namespace {

cplx horner(std::span<const cplx> c, double t) {
    cplx acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

cplx horner_derivative(std::span<const cplx> c, double t) {
    cplx acc{};
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * c[k];
    return acc;
}

}  // namespace

cplx PadeModel::numerator(double t) const noexcept {
    return horner(std::span(xi_).first(static_cast<std::size_t>(q_ + 1)), t);
}

cplx PadeModel::denominator(double t) const noexcept {
    return horner(std::span(xi_).subspan(static_cast<std::size_t>(q_ + 1)), t);
}

cplx PadeModel::numerator_derivative(double t) const noexcept {
    return horner_derivative(std::span(xi_).first(static_cast<std::size_t>(q_ + 1)), t);
}

cplx PadeModel::denominator_derivative(double t) const noexcept {
    return horner_derivative(std::span(xi_).subspan(static_cast<std::size_t>(q_ + 1)), t);
}

cplx pade_eval(const PadeModel& model, double t, double pole_tol) {
    const cplx den = model.denominator(t);
    const double mag = std::abs(den);
    if (!(mag > pole_tol)) throw PoleError(t, mag);
    return model.numerator(t) / den;
}

cplx pade_derivative(const PadeModel& model, double t, double pole_tol) {
    const cplx den = model.denominator(t);
    const double mag = std::abs(den);
    if (!(mag > pole_tol)) throw PoleError(t, mag);
    const cplx num = model.numerator(t);
    return (model.numerator_derivative(t) * den - num * model.denominator_derivative(t)) /
           (den * den);
}

double pade_pole_margin(const PadeModel& model, std::span<const double> nodes) {
    double margin = std::numeric_limits<double>::infinity();
    for (double t : nodes) {
        const double m = std::abs(model.denominator(t));
        if (std::isnan(m)) return 0.0;
        margin = std::min(margin, m);
    }
    return margin;
}

double pade_pole_margin(const PadeModel& model, const TimeGrid& grid) {
    const auto nodes = grid.nodes();
    return pade_pole_margin(model, std::span<const double>(nodes));
}

}  // namespace memkern
