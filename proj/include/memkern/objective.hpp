#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memkern/grid.hpp"
#include "memkern/hypothesis.hpp"
#include "memkern/volterra.hpp"

namespace memkern {

// Value returned by the totalised objective when a probe is infeasible
// (pole on the grid, singular step, non-finite state).
inline constexpr double kGuardValue = 1e10;

struct RegConfig {
    double alpha = 0.0;  // regulariser weight, [0, 1)
    double beta = 0.0;   // seminorm balance, [0, 1]

    void validate() const;
};

// Which state components enter the loss.
using ObservedMask = std::array<bool, 4>;
inline constexpr ObservedMask kObserveAll{true, true, true, true};
inline constexpr ObservedMask kObserveCoherence{false, false, true, false};

struct DatasetMeta {
    int problem = 0;
    std::uint64_t seed = 0;
    double noise_level = 0.0;
};

struct Dataset {
    TimeGrid grid;
    std::vector<StateVector> initial_states;  // x0 used for forward solves
    std::vector<Trajectory> trajectories;     // observed series
    DatasetMeta meta;
};

double trapezoid_integral(std::span<const double> samples, double h);

// sum_j int |x_j^data - x_j^learned|^2 over the observed components.
double trajectory_loss(const Trajectory& learned, const Trajectory& data, const ObservedMask& mask);

// Mean of trajectory_loss over the ensemble.
double loss(std::span<const Trajectory> learned, const Dataset& data, const ObservedMask& mask);

// sum over atoms of (1 - beta) int |B|^2 + beta int |B'|^2 on the grid.
double tikhonov(const KernelHypothesis& h, const TimeGrid& grid, double beta);

struct SobolevParts {
    double l2 = 0.0;        // sum over atoms of int |B|^2
    double seminorm = 0.0;  // sum over atoms of int |B'|^2
};
SobolevParts sobolev_parts(const KernelHypothesis& h, const TimeGrid& grid);

// Everything the objective needs besides the data and the parameters.
struct ProblemStructure {
    HypothesisSpec spec;
    ObservedMask mask = kObserveAll;
    Matrix4c fixed_A = Matrix4c::Zero();
};

struct ObjectiveParts {
    double value = kGuardValue;
    double loss = 0.0;
    double reg = 0.0;
    bool feasible = false;
};

class Objective {
public:
    Objective(ProblemStructure structure, const Dataset& data, RegConfig reg);

    const ProblemStructure& structure() const noexcept { return structure_; }
    const RegConfig& reg() const noexcept { return reg_; }
    const Dataset& data() const noexcept { return *data_; }

    ObjectiveParts evaluate(std::span<const double> params) const;
    // Totalised: the guard value on any infeasibility.
    double operator()(std::span<const double> params) const { return evaluate(params).value; }

    // Learned trajectories for the dataset's initial states. Throws on infeasibility.
    std::vector<Trajectory> forward(std::span<const double> params) const;

private:
    ProblemStructure structure_;
    const Dataset* data_;
    RegConfig reg_;
};

// Nodes where the atoms are evaluated by the solver and the regulariser.
std::vector<double> evaluation_nodes(const TimeGrid& grid);

// Kernel callable for a learned model.
KernelFunction kernel_function(const KernelHypothesis& h);

// Mean per-trajectory loss over a held-out ensemble; kGuardValue if infeasible.
double empirical_risk(std::span<const double> params, const ProblemStructure& structure,
                      const Dataset& test);
std::vector<double> per_trajectory_losses(std::span<const double> params,
                                          const ProblemStructure& structure, const Dataset& data);

}  // namespace memkern
