#include "memkern/objective.hpp"

#include <algorithm>
#include <cmath>

#include "memkern/errors.hpp"

namespace memkern {

void RegConfig::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in [0, 1)");
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta must lie in [0, 1]");
}

double trapezoid_integral(std::span<const double> samples, double h) {
    if (samples.size() < 2) throw TooFewSamples();
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) interior += samples[i];
    return h * (0.5 * (samples.front() + samples.back()) + interior);
}

double trajectory_loss(const Trajectory& learned, const Trajectory& data, const ObservedMask& mask) {
    if (!(learned.grid == data.grid) || learned.values.size() != data.values.size())
        throw GridMismatch("learned and observed trajectories live on different grids");
    std::vector<double> sq(data.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j)
            if (mask[static_cast<std::size_t>(j)]) s += std::norm(data.values[i][j] - learned.values[i][j]);
        sq[i] = s;
    }
    return trapezoid_integral(sq, data.grid.step());
}

double loss(std::span<const Trajectory> learned, const Dataset& data, const ObservedMask& mask) {
    if (learned.size() != data.trajectories.size())
        throw GridMismatch("trajectory count differs from the dataset");
    if (learned.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < learned.size(); ++i)
        sum += trajectory_loss(learned[i], data.trajectories[i], mask);
    return sum / static_cast<double>(learned.size());
}

SobolevParts sobolev_parts(const KernelHypothesis& h, const TimeGrid& grid) {
    SobolevParts parts;
    const auto nodes = grid.nodes();
    std::vector<double> val(nodes.size()), der(nodes.size());
    for (const auto& atom : h.atoms()) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            val[i] = std::norm(pade_eval(atom, nodes[i], h.spec().pole_tol));
            der[i] = std::norm(pade_derivative(atom, nodes[i], h.spec().pole_tol));
        }
        parts.l2 += trapezoid_integral(val, grid.step());
        parts.seminorm += trapezoid_integral(der, grid.step());
    }
    return parts;
}

double tikhonov(const KernelHypothesis& h, const TimeGrid& grid, double beta) {
    const SobolevParts parts = sobolev_parts(h, grid);
    return (1.0 - beta) * parts.l2 + beta * parts.seminorm;
}

std::vector<double> evaluation_nodes(const TimeGrid& grid) {
    std::vector<double> nodes = grid.nodes();
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) nodes.push_back(static_cast<double>(j) * grid.step());
    return nodes;
}

KernelFunction kernel_function(const KernelHypothesis& h) {
    return [&h](double t, double lag) { return h.assemble(t, lag); };
}

Objective::Objective(ProblemStructure structure, const Dataset& data, RegConfig reg)
    : structure_(std::move(structure)), data_(&data), reg_(reg) {
    reg_.validate();
    if (data.initial_states.size() != data.trajectories.size())
        throw GridMismatch("dataset needs one initial state per trajectory");
}

namespace {

bool poles_clear(const KernelHypothesis& h, std::span<const double> nodes) {
    for (const auto& atom : h.atoms())
        if (!(pade_pole_margin(atom, nodes) > h.spec().pole_tol)) return false;
    return true;
}

std::vector<Trajectory> forward_solves(const LearnedModel& model, const Dataset& data) {
    const KernelLattice lattice(model.A, kernel_function(model.kernel), data.grid);
    std::vector<Trajectory> out;
    out.reserve(data.initial_states.size());
    for (const auto& x0 : data.initial_states) out.push_back(lattice.solve(x0));
    return out;
}

}  // namespace

std::vector<Trajectory> Objective::forward(std::span<const double> params) const {
    const LearnedModel model = unpack(structure_.spec, params, structure_.fixed_A);
    return forward_solves(model, *data_);
}

ObjectiveParts Objective::evaluate(std::span<const double> params) const {
    if (params.size() != structure_.spec.parameter_count())
        throw LengthMismatch(structure_.spec.parameter_count(), params.size());
    ObjectiveParts out;
    try {
        const LearnedModel model = unpack(structure_.spec, params, structure_.fixed_A);
        const auto nodes = evaluation_nodes(data_->grid);
        if (!poles_clear(model.kernel, nodes)) return out;
        const auto learned = forward_solves(model, *data_);
        out.loss = loss(learned, *data_, structure_.mask);
        out.reg = tikhonov(model.kernel, data_->grid, reg_.beta);
        out.value = (1.0 - reg_.alpha) * out.loss + reg_.alpha * out.reg;
    } catch (const Error&) {
        return ObjectiveParts{};
    }
    if (!std::isfinite(out.value) || out.value >= kGuardValue) return ObjectiveParts{};
    out.feasible = true;
    return out;
}

std::vector<double> per_trajectory_losses(std::span<const double> params,
                                          const ProblemStructure& structure, const Dataset& data) {
    const LearnedModel model = unpack(structure.spec, params, structure.fixed_A);
    const auto learned = forward_solves(model, data);
    std::vector<double> out(learned.size());
    for (std::size_t i = 0; i < learned.size(); ++i)
        out[i] = trajectory_loss(learned[i], data.trajectories[i], structure.mask);
    return out;
}

double empirical_risk(std::span<const double> params, const ProblemStructure& structure,
                      const Dataset& test) {
    try {
        const LearnedModel model = unpack(structure.spec, params, structure.fixed_A);
        const auto learned = forward_solves(model, test);
        const double r = loss(learned, test, structure.mask);
        return std::isfinite(r) ? r : kGuardValue;
    } catch (const PoleError&) {
        return kGuardValue;
    } catch (const SingularStepMatrix&) {
        return kGuardValue;
    } catch (const NonFiniteState&) {
        return kGuardValue;
    }
}

}  // namespace memkern
