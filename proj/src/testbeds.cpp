#include "memkern/testbeds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "memkern/errors.hpp"
#include "memkern/parallel.hpp"
#include "memkern/qstate.hpp"

namespace memkern {

void Problem1Config::validate() const {
    bath.validate();
    if (bath.Lambda != 1.0) throw DomainError("problem 1 uses the closed-form correlation, which needs Lambda = 1");
    if (!(noise_level >= 0.0)) throw DomainError("noise level must be non-negative");
    if (q < 0 || r < 0) throw DomainError("Pade orders must be non-negative");
}

void Problem2Config::validate() const {
    bath.validate();
    quad.validate();
    if (n_train < 1 || n_test < 1) throw DomainError("problem 2 needs n_train, n_test >= 1");
}

void Problem3Config::validate() const {
    if (!(gamma_x > 0.0 && gamma_z > 0.0 && gamma_c > 0.0))
        throw DomainError("problem 3 decay rates must be positive");
    if (kappa * kappa > alpha_x * alpha_z)
        throw DomainError("problem 3 cross-correlation violates |kappa|^2 <= alpha_x alpha_z");
    if (n_train < 1 || n_test < 1) throw DomainError("problem 3 needs n_train, n_test >= 1");
}

ScalarCorrelations Problem3Config::correlations(double lag) const {
    const cplx xz = kappa * std::exp(-gamma_c * lag) * std::exp(cplx{0.0, -phi});
    return {cplx{alpha_x * std::exp(-gamma_x * lag) * std::cos(Omega_x * lag), 0.0},
            cplx{alpha_z * std::exp(-gamma_z * lag), 0.0}, xz, std::conj(xz)};
}

StateVector equal_superposition() { return StateVector::Constant(cplx{0.5, 0.0}); }

KernelFunction problem1_kernel(const SpectralDensityParams& bath) {
    return [bath](double, double lag) {
        const double c = bath.g == 0.0 ? 0.0 : dephasing_correlation(lag, bath);
        Matrix4c k = Matrix4c::Zero();
        k(2, 2) = -c;
        k(3, 3) = -c;
        return k;
    };
}

KernelFunction problem3_kernel(const Problem3Config& cfg) {
    return [cfg](double t, double lag) {
        return cross_channel_kernel(cfg.correlations(lag), t, lag, cfg.Delta, cfg.t_ramp);
    };
}

Dataset gen_problem1(const Problem1Config& cfg) {
    cfg.validate();
    Dataset d;
    d.grid = cfg.grid;
    d.meta = {1, cfg.seed, cfg.noise_level};
    d.initial_states = {equal_superposition()};
    d.trajectories = {solve({Matrix4c::Zero(), problem1_kernel(cfg.bath), equal_superposition(), cfg.grid})};
    if (cfg.noise_level > 0.0) {
        std::mt19937_64 rng(cfg.seed);
        d = corrupt_noise(d, cfg.noise_level, rng, kObserveCoherence);
    }
    return d;
}

Dataset corrupt_noise(const Dataset& data, double level, std::mt19937_64& rng, const ObservedMask& mask) {
    if (!(level >= 0.0)) throw DomainError("noise level must be non-negative");
    Dataset out = data;
    out.meta.noise_level = level;
    if (level == 0.0) return out;
    std::uniform_real_distribution<double> w(-level, level);
    for (auto& traj : out.trajectories)
        for (auto& x : traj.values)
            for (int j = 0; j < 4; ++j)
                if (mask[static_cast<std::size_t>(j)]) x[j] *= 1.0 + w(rng);
    return out;
}

namespace {

std::vector<double> solver_lags(const TimeGrid& grid) {
    std::vector<double> lags;
    for (std::size_t row = 0; row < grid.size(); ++row)
        for (std::size_t k = 0; k <= row; ++k) lags.push_back(lag_value(grid, row, k));
    std::sort(lags.begin(), lags.end());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    return lags;
}

std::vector<StateVector> sample_states(std::size_t n, std::mt19937_64& rng) {
    std::vector<StateVector> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(vectorize(sample_initial_state(rng)));
    return out;
}

std::pair<Dataset, Dataset> split(const TimeGrid& grid, DatasetMeta meta, std::vector<StateVector> x0s,
                                  std::vector<Trajectory> trajs, std::size_t n_train) {
    Dataset train{grid, {}, {}, meta};
    Dataset test{grid, {}, {}, meta};
    for (std::size_t i = 0; i < x0s.size(); ++i) {
        Dataset& dst = i < n_train ? train : test;
        dst.initial_states.push_back(x0s[i]);
        dst.trajectories.push_back(std::move(trajs[i]));
    }
    return {std::move(train), std::move(test)};
}

}  // namespace

DecayKernelTable::DecayKernelTable(const Problem2Config& cfg, const TimeGrid& grid)
    : eps0_(cfg.eps0), quad_(cfg.bath, cfg.quad), lags_(solver_lags(grid)) {
    moments_.resize(lags_.size());
    parallel_for(lags_.size(), [&](std::size_t i) { moments_[i] = quad_.decay_moments(lags_[i], eps0_); });
}

DecayKernelValues DecayKernelTable::values(double t, double lag) const {
    const auto it = std::lower_bound(lags_.begin(), lags_.end(), lag);
    if (it != lags_.end() && *it == lag)
        return decay_kernels(moments_[static_cast<std::size_t>(it - lags_.begin())], t, eps0_);
    return decay_kernels(quad_.decay_moments(lag, eps0_), t, eps0_);
}

Matrix4c DecayKernelTable::operator()(double t, double lag) const {
    const DecayKernelValues v = values(t, lag);
    return block_kernel(v.b00, v.b11, v.b01, v.b10);
}

std::pair<Dataset, Dataset> gen_problem2(const Problem2Config& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    auto x0s = sample_states(cfg.n_train + cfg.n_test, rng);
    const DecayKernelTable table(cfg, cfg.grid);
    auto trajs = solve_batch(Matrix4c::Zero(), std::cref(table), cfg.grid, x0s);
    return split(cfg.grid, {2, cfg.seed, 0.0}, std::move(x0s), std::move(trajs), cfg.n_train);
}

std::pair<Dataset, Dataset> gen_problem3(const Problem3Config& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    auto x0s = sample_states(cfg.n_train + cfg.n_test, rng);
    auto trajs = solve_batch(Matrix4c::Zero(), problem3_kernel(cfg), cfg.grid, x0s);
    return split(cfg.grid, {3, cfg.seed, 0.0}, std::move(x0s), std::move(trajs), cfg.n_train);
}

ProblemStructure structure_for_problem1(const Problem1Config& cfg) {
    HypothesisSpec spec;
    spec.variant = KernelVariant::Scalar;
    spec.q = cfg.q;
    spec.r = cfg.r;
    spec.real_mode = true;
    return {spec, kObserveCoherence, Matrix4c::Zero()};
}

ProblemStructure structure_for_problem2(const Problem2Config& cfg) {
    HypothesisSpec spec;
    spec.variant = KernelVariant::Block;
    spec.q = cfg.q;
    spec.r = cfg.r;
    spec.eps0 = cfg.eps0;
    return {spec, kObserveAll, Matrix4c::Zero()};
}

ProblemStructure structure_for_problem3(const Problem3Config& cfg) {
    HypothesisSpec spec;
    spec.variant = KernelVariant::Rank1Cross;
    spec.q = cfg.q;
    spec.r = cfg.r;
    spec.eps0 = cfg.eps0;
    spec.Delta = cfg.Delta;
    spec.t_ramp = cfg.t_ramp;
    return {spec, kObserveAll, Matrix4c::Zero()};
}

RegConfig default_reg(int problem, double noise_level) {
    switch (problem) {
        case 1: return noise_level > 0.0 ? RegConfig{1e-4, 1.0} : RegConfig{0.0, 0.0};
        case 2: return {1e-4, 0.95};
        case 3: return {1e-6, 0.95};
        default: throw DomainError("problem id must be 1, 2 or 3");
    }
}

Initializer default_initializer(const HypothesisSpec& spec, double scale) {
    return [spec, scale](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-scale, scale);
        std::vector<double> v(spec.parameter_count());
        for (auto& x : v) x = u(rng);
        const std::size_t per_coeff = spec.real_mode ? 1 : 2;
        const std::size_t offset = spec.learn_A ? 32 : 0;
        const std::size_t stride = spec.coefficients_per_atom() * per_coeff;
        for (std::size_t a = 0; a < spec.atom_count(); ++a) {
            const std::size_t den0 = offset + a * stride + static_cast<std::size_t>(spec.q + 1) * per_coeff;
            v[den0] = 1.0;
            if (!spec.real_mode) v[den0 + 1] = 0.0;
        }
        return v;
    };
}

FitOutcome fit_problem(const ProblemStructure& structure, const Dataset& data, const RegConfig& reg,
                       const OptimOptions& opts, std::span<const double> warm_start) {
    const auto start = std::chrono::steady_clock::now();
    const Objective objective(structure, data, reg);
    const ScalarFunction f = [&objective](std::span<const double> v) { return objective(v); };
    const MultiStartResult ms =
        multi_start(f, default_initializer(structure.spec, opts.init_scale), opts, warm_start);

    const ObjectiveParts parts = objective.evaluate(ms.best.x);
    FitReport rep;
    rep.objective = parts.value;
    rep.loss = parts.loss;
    rep.reg = parts.reg;
    rep.iterations = ms.best.iterations;
    rep.grad_norm = ms.best.grad_norm;
    rep.start_index = ms.start_index;
    rep.seed = opts.seed;
    rep.status = to_string(ms.best.status);
    rep.reg_config = reg;
    rep.start_objectives = ms.start_objectives;
    rep.final_objectives = ms.final_objectives;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {ms.best.x, unpack(structure.spec, ms.best.x, structure.fixed_A), rep};
}

namespace {

void push_complex(std::vector<double>& row, cplx c) {
    row.push_back(c.real());
    row.push_back(c.imag());
}

void add_columns(std::vector<std::string>& cols, const std::vector<std::string>& names, const std::string& suffix) {
    for (const auto& n : names) {
        cols.push_back(n + suffix + "_re");
        cols.push_back(n + suffix + "_im");
    }
}

}  // namespace

KernelTable dump_true_kernels(int problem, const Problem1Config& p1, const Problem2Config& p2,
                              const Problem3Config& p3, const TimeGrid& grid,
                              const std::optional<KernelHypothesis>& learned) {
    KernelTable table;
    table.columns = {"t"};
    std::vector<std::string> names;
    switch (problem) {
        case 1: names = {"C"}; break;
        case 2: names = {"B00", "B11", "B01", "B10"}; break;
        case 3: names = {"C_xx", "C_zz", "C_xz", "C_zx"}; break;
        default: throw DomainError("problem id must be 1, 2 or 3");
    }
    add_columns(table.columns, names, "_true");
    if (learned) {
        const bool fits = problem == 3 ? learned->spec().variant == KernelVariant::Rank1Cross
                                       : learned->atoms().size() == names.size();
        if (!fits) throw DomainError("learned model does not match the problem's kernel structure");
    }
    if (learned) add_columns(table.columns, names, "_learned");

    std::optional<FrequencyQuadrature> quad;
    if (problem == 2) quad.emplace(p2.bath, p2.quad);

    for (double t : grid.nodes()) {
        std::vector<double> row{t};
        switch (problem) {
            case 1: push_complex(row, dephasing_correlation(t, p1.bath)); break;
            case 2: {
                const auto v = decay_kernels(quad->decay_moments(t, p2.eps0), 0.0, p2.eps0);
                for (cplx c : {v.b00, v.b11, v.b01, v.b10}) push_complex(row, c);
                break;
            }
            case 3: {
                const auto c = p3.correlations(t);
                for (cplx z : {c.xx, c.zz, c.xz, c.zx}) push_complex(row, z);
                break;
            }
        }
        if (learned) {
            if (problem == 3) {
                const auto c = learned->correlations(t);
                for (cplx z : {c.xx, c.zz, c.xz, c.zx}) push_complex(row, z);
            } else {
                for (const auto& atom : learned->atoms()) push_complex(row, pade_eval(atom, t, learned->spec().pole_tol));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace memkern
