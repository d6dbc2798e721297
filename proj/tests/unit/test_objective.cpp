#include <doctest.h>

#include <cmath>
#include <random>

#include "memkern/errors.hpp"
#include "memkern/objective.hpp"
#include "memkern/qstate.hpp"

using namespace memkern;

namespace {

// Dataset produced by a Block hypothesis with known parameters.
struct Synthetic {
    ProblemStructure structure;
    std::vector<double> params;
    Dataset data;
};

Synthetic block_synthetic(std::size_t n_traj, std::uint64_t seed) {
    Synthetic s;
    s.structure.spec.variant = KernelVariant::Block;
    s.structure.spec.q = 1;
    s.structure.spec.r = 1;
    // atoms: numerator (a0, a1), denominator (1, d1)
    const double atoms[4][4] = {{-0.5, 0.1, 1.0, 0.3}, {0.2, 0.0, 1.0, 0.5}, {-0.3, 0.05, 1.0, 0.2}, {0.25, -0.05, 1.0, 0.4}};
    for (const auto& a : atoms)
        for (double c : a) {
            s.params.push_back(c);
            s.params.push_back(0.0);
        }
    s.data.grid = TimeGrid(1e-6, 3.0, 24);
    s.data.meta.problem = 2;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n_traj; ++i) s.data.initial_states.push_back(vectorize(sample_initial_state(rng)));
    const LearnedModel truth = unpack(s.structure.spec, s.params);
    s.data.trajectories = solve_batch(truth.A, kernel_function(truth.kernel), s.data.grid, s.data.initial_states);
    return s;
}

}  // namespace

TEST_SUITE("objective") {
TEST_CASE("trapezoid rule") {
    std::vector<double> ones(31, 1.0);
    CHECK(trapezoid_integral(ones, 0.1) == doctest::Approx(3.0).epsilon(1e-15));

    const TimeGrid unit(0.0, 1.0, 11);
    std::vector<double> lin;
    for (double t : unit.nodes()) lin.push_back(t);
    CHECK(std::abs(trapezoid_integral(lin, unit.step()) - 0.5) <= 1e-15);

    const TimeGrid g64(0.0, 1.0, 64);
    std::vector<double> sq;
    for (double t : g64.nodes()) sq.push_back(t * t);
    const double h = g64.step();
    // error of the rule for t^2 on [0,1] is exactly h^2/6
    CHECK(std::abs(trapezoid_integral(sq, h) - (1.0 / 3.0 + h * h / 6.0)) <= 1e-15);

    CHECK_THROWS_AS(trapezoid_integral(std::vector<double>{1.0}, 0.1), TooFewSamples);
}

TEST_CASE("trajectory loss") {
    const TimeGrid grid(0.0, 3.0, 31);
    Trajectory a{grid, std::vector<StateVector>(31, StateVector(0.5, 0.5, 0.2, 0.2))};
    CHECK(trajectory_loss(a, a, kObserveAll) == 0.0);

    Trajectory b = a;
    const double delta = 0.01;
    for (auto& x : b.values) x[2] += delta;
    CHECK(trajectory_loss(a, b, kObserveCoherence) == doctest::Approx(3.0 * delta * delta).epsilon(1e-12));
    CHECK(trajectory_loss(a, b, ObservedMask{true, true, false, true}) == 0.0);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    Trajectory c{grid, {}}, d{grid, {}};
    for (int i = 0; i < 31; ++i) {
        StateVector x, y;
        for (int j = 0; j < 4; ++j) {
            x[j] = cplx{n(rng), n(rng)};
            y[j] = cplx{n(rng), n(rng)};
        }
        c.values.push_back(x);
        d.values.push_back(y);
    }
    double naive = 0.0;
    for (int i = 0; i < 31; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += std::norm(c.values[i][j] - d.values[i][j]);
        naive += (i == 0 || i == 30 ? 0.5 : 1.0) * s * grid.step();
    }
    CHECK(trajectory_loss(c, d, kObserveAll) == doctest::Approx(naive).epsilon(1e-13));

    Trajectory other{TimeGrid(0.0, 2.0, 31), a.values};
    CHECK_THROWS_AS(trajectory_loss(a, other, kObserveAll), GridMismatch);
}

TEST_CASE("tikhonov") {
    const TimeGrid grid(1e-6, 3.0, 64);
    HypothesisSpec spec;
    spec.variant = KernelVariant::Scalar;
    spec.q = spec.r = 0;
    CHECK(tikhonov(KernelHypothesis::zero(spec), grid, 0.5) == 0.0);

    const KernelHypothesis constant(spec, {PadeModel(0, 0, {cplx{0.7, 0.0}, 1.0})});
    CHECK(tikhonov(constant, grid, 0.0) == doctest::Approx(0.49 * grid.length()).epsilon(1e-14));
    CHECK(tikhonov(constant, grid, 1.0) == 0.0);
}

TEST_CASE("coercivity sandwich") {
    const TimeGrid grid(1e-6, 3.0, 64);
    HypothesisSpec spec;
    spec.variant = KernelVariant::Block;
    spec.q = spec.r = 3;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> v(spec.parameter_count());
        for (double& x : v) x = u(rng);
        for (std::size_t a = 0; a < 4; ++a) v[a * 16 + 2 * 4] = 1.0;  // denominator constants
        const LearnedModel m = unpack(spec, v);
        const SobolevParts parts = sobolev_parts(m.kernel, grid);
        const double h1 = parts.l2 + parts.seminorm;
        for (double beta : {0.1, 0.5, 0.95}) {
            const double t = tikhonov(m.kernel, grid, beta);
            CHECK(std::min(beta, 1.0 - beta) * h1 <= t * (1.0 + 1e-14));
            CHECK(t <= std::max(beta, 1.0 - beta) * h1 * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("objective on data from a known model") {
    const Synthetic s = block_synthetic(5, 1);
    const Objective plain(s.structure, s.data, RegConfig{0.0, 0.5});
    const ObjectiveParts exact = plain.evaluate(s.params);
    CHECK(exact.feasible);
    CHECK(exact.loss == 0.0);
    CHECK(exact.value == 0.0);

    // perturbed parameters: recomposition from independent pieces
    std::vector<double> v = s.params;
    v[0] += 0.05;
    v[18] -= 0.03;
    const RegConfig reg{1e-4, 0.95};
    const Objective obj(s.structure, s.data, reg);
    const ObjectiveParts parts = obj.evaluate(v);
    const LearnedModel m = unpack(s.structure.spec, v);
    const auto learned = solve_batch(m.A, kernel_function(m.kernel), s.data.grid, s.data.initial_states);
    const double l = loss(learned, s.data, kObserveAll);
    const double r = tikhonov(m.kernel, s.data.grid, reg.beta);
    CHECK(parts.loss == doctest::Approx(l).epsilon(1e-14));
    CHECK(parts.reg == doctest::Approx(r).epsilon(1e-14));
    CHECK(std::abs(parts.value - ((1.0 - reg.alpha) * l + reg.alpha * r)) <= 1e-12 * parts.value);
    CHECK(parts.loss >= 0.0);
    CHECK(parts.reg >= 0.0);

    // alpha = 0 is the pure loss
    CHECK(Objective(s.structure, s.data, RegConfig{0.0, 0.95}).evaluate(v).value == parts.loss);

    // bitwise reproducible
    CHECK(obj(v) == obj(v));

    // empirical risk on the training ensemble is the training loss
    CHECK(empirical_risk(v, s.structure, s.data) == parts.loss);
    const auto per = per_trajectory_losses(v, s.structure, s.data);
    double mean = 0.0;
    for (double x : per) mean += x;
    CHECK(mean / static_cast<double>(per.size()) == doctest::Approx(parts.loss).epsilon(1e-15));
}

TEST_CASE("guarded objective") {
    const Synthetic s = block_synthetic(3, 2);
    const Objective obj(s.structure, s.data, RegConfig{1e-4, 0.95});

    // atom 0 denominator 1 - t / t_12 vanishes on a grid node
    std::vector<double> pole = s.params;
    pole[4] = 1.0;
    pole[6] = -1.0 / s.data.grid.node(12);
    const ObjectiveParts p = obj.evaluate(pole);
    CHECK_FALSE(p.feasible);
    CHECK(p.value == kGuardValue);
    CHECK(empirical_risk(pole, s.structure, s.data) == kGuardValue);

    // violent kernel: state overflows
    std::vector<double> wild = s.params;
    wild[0] = 1e200;
    CHECK(obj(wild) == kGuardValue);

    std::vector<double> short_v(s.params.begin(), s.params.end() - 1);
    CHECK_THROWS_AS(obj.evaluate(short_v), LengthMismatch);
}

TEST_CASE("evaluation nodes include the solver lags") {
    const TimeGrid grid(1e-6, 3.0, 8);
    const auto nodes = evaluation_nodes(grid);
    CHECK(nodes.size() == 8 + 6);
    for (std::size_t row = 0; row < grid.size(); ++row)
        for (std::size_t k = 0; k <= row; ++k) {
            const double lag = lag_value(grid, row, k);
            bool found = false;
            for (double n : nodes) found = found || n == lag;
            CHECK(found);
        }
}

TEST_CASE("regularisation config") {
    CHECK_NOTHROW((RegConfig{0.0, 0.0}.validate()));
    CHECK_NOTHROW((RegConfig{0.5, 1.0}.validate()));
    CHECK_THROWS_AS((RegConfig{1.0, 0.5}.validate()), DomainError);
    CHECK_THROWS_AS((RegConfig{-0.1, 0.5}.validate()), DomainError);
    CHECK_THROWS_AS((RegConfig{0.1, 1.5}.validate()), DomainError);
}
}
