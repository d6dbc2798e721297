#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "memkern/objective.hpp"
#include "memkern/optimize.hpp"
#include "memkern/special.hpp"

namespace memkern {

// Pure dephasing of a single coherence series.
struct Problem1Config {
    SpectralDensityParams bath{1.0, 1.0, 1.0};
    TimeGrid grid{1e-6, 3.0, 64};
    int q = 4;
    int r = 4;
    double noise_level = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Decay and decoherence with frequency-resolved bath integrals.
struct Problem2Config {
    SpectralDensityParams bath{0.25, 1.0, 1.0};
    double eps0 = 1.0;
    TimeGrid grid{1e-6, 3.0, 32};
    QuadratureConfig quad{};
    int q = 3;
    int r = 3;
    std::size_t n_train = 30;
    std::size_t n_test = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

// Noncommuting sigma_x / sigma_z couplings with cross-correlations.
struct Problem3Config {
    TimeGrid grid{1e-6, 3.0, 32};
    double alpha_x = 1.0;
    double gamma_x = 1.0;
    double Omega_x = 5.0;
    double alpha_z = 0.5;
    double gamma_z = 2.0;
    double kappa = 0.3;
    double gamma_c = 1.5;
    double phi = std::numbers::pi / 4.0;
    double Delta = 1.0;
    double eps0 = 1.0;
    double t_ramp = 0.05;
    int q = 3;
    int r = 3;
    std::size_t n_train = 30;
    std::size_t n_test = 100;
    std::uint64_t seed = 0;

    void validate() const;
    ScalarCorrelations correlations(double lag) const;
};

StateVector equal_superposition();

Dataset gen_problem1(const Problem1Config& cfg);
std::pair<Dataset, Dataset> gen_problem2(const Problem2Config& cfg);
std::pair<Dataset, Dataset> gen_problem3(const Problem3Config& cfg);

// rho^w(t_k) = (1 + w_k) rho(t_k), w_k ~ U[-level, level], fresh per node and
// observed component, initial node included.
Dataset corrupt_noise(const Dataset& data, double level, std::mt19937_64& rng, const ObservedMask& mask);

// Generator kernels as callables.
KernelFunction problem1_kernel(const SpectralDensityParams& bath);
KernelFunction problem3_kernel(const Problem3Config& cfg);

// Frequency-quadrature kernel of problem 2, tabulated on every lag the solver
// requests for `grid`.
class DecayKernelTable {
public:
    DecayKernelTable(const Problem2Config& cfg, const TimeGrid& grid);
    Matrix4c operator()(double t, double lag) const;
    DecayKernelValues values(double t, double lag) const;

private:
    double eps0_;
    FrequencyQuadrature quad_;
    std::vector<double> lags_;
    std::vector<FrequencyQuadrature::Moments> moments_;
};

ProblemStructure structure_for_problem1(const Problem1Config& cfg);
ProblemStructure structure_for_problem2(const Problem2Config& cfg);
ProblemStructure structure_for_problem3(const Problem3Config& cfg);

// Default regularisation used by each testbed.
RegConfig default_reg(int problem, double noise_level = 0.0);

// Uniform coefficients in [-scale, scale] with every denominator constant set to 1.
Initializer default_initializer(const HypothesisSpec& spec, double scale);

struct FitReport {
    double objective = 0.0;
    double loss = 0.0;
    double reg = 0.0;
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    double wall_time = 0.0;  // seconds; not reproducible
    std::size_t start_index = 0;
    std::uint64_t seed = 0;
    std::string status;
    RegConfig reg_config;
    std::vector<double> start_objectives;
    std::vector<double> final_objectives;
};

struct FitOutcome {
    std::vector<double> params;
    LearnedModel model;
    FitReport report;
};

FitOutcome fit_problem(const ProblemStructure& structure, const Dataset& data, const RegConfig& reg,
                       const OptimOptions& opts, std::span<const double> warm_start = {});

struct KernelTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Generator correlation functions on the grid nodes, with learned atoms (or
// the learned scalar correlations for the rank-1 variant) alongside when a
// model is given.
KernelTable dump_true_kernels(int problem, const Problem1Config& p1, const Problem2Config& p2,
                              const Problem3Config& p3, const TimeGrid& grid,
                              const std::optional<KernelHypothesis>& learned = std::nullopt);

}  // namespace memkern
