#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace memkern {

using ScalarFunction = std::function<double(std::span<const double>)>;

struct OptimOptions {
    std::size_t max_iters = 500;
    double grad_tol = 1e-9;
    double step_tol = 1e-12;
    double fd_step = 1e-6;
    std::size_t n_starts = 5;
    double init_scale = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class Termination { GradientTolerance, StepTolerance, MaxIterations, LineSearchFailure, GuardedGradient };
std::string to_string(Termination t);

// Central differences with step fd_step * max(1, |v_k|). Throws
// NonFiniteGradient when a probe returns the guard value. Probes run on the
// library's worker threads.
std::vector<double> fd_gradient(const ScalarFunction& f, std::span<const double> v, double fd_step);

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    double f0 = 0.0;
    std::size_t iterations = 0;
    double grad_norm = 0.0;
    Termination status = Termination::MaxIterations;
    std::vector<double> history;  // accepted objective values, non-increasing
};

// BFGS on a dense inverse Hessian with a backtracking Armijo line search.
MinimizeResult minimize(const ScalarFunction& f, std::span<const double> v0, const OptimOptions& opts);

using Initializer = std::function<std::vector<double>(std::mt19937_64&)>;

struct MultiStartResult {
    MinimizeResult best;
    std::size_t start_index = 0;
    std::vector<double> start_objectives;  // f(v0) of every start
    std::vector<double> final_objectives;
};

// Start k draws its initial point from an RNG seeded with derive_seed(seed, k).
// When `warm_start` is non-empty it replaces start 0.
MultiStartResult multi_start(const ScalarFunction& f, const Initializer& init, const OptimOptions& opts,
                             std::span<const double> warm_start = {});

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace memkern
