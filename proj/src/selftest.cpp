#include "memkern/selftest.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "memkern/errors.hpp"
#include "memkern/objective.hpp"
#include "memkern/qstate.hpp"
#include "memkern/testbeds.hpp"
#include "memkern/volterra.hpp"

namespace memkern {

namespace {

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
    return CheckResult{std::move(name), ok, std::move(detail)};
}

CheckResult gamma_values() {
    const double e1 = std::abs(gamma_fn(1.0) - 1.0);
    const double e2 = std::abs(gamma_fn(0.5) - std::sqrt(std::numbers::pi));
    const double e3 = std::abs(gamma_fn(5.0) - 24.0) / 24.0;
    const double worst = std::max({e1, e2, e3});
    return check("gamma oracles", worst <= 1e-12, "max error " + sci(worst));
}

CheckResult zeta_basel(const SelftestHooks& hooks) {
    const double err = std::abs(hooks.zeta(2.0, cplx{1.0, 0.0}) - std::numbers::pi * std::numbers::pi / 6.0);
    return check("zeta(2,1) = pi^2/6", err <= 1e-10, "error " + sci(err));
}

CheckResult zeta_shift(const SelftestHooks& hooks) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> s_dist(1.5, 4.0), re_dist(0.5, 3.0), im_dist(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double s = s_dist(rng);
        const cplx a{re_dist(rng), im_dist(rng)};
        const cplx lhs = hooks.zeta(s, a) - hooks.zeta(s, a + 1.0);
        const cplx rhs = std::pow(a, -s);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    return check("zeta shift identity", worst <= 1e-12, "max error " + sci(worst));
}

CheckResult dephasing_closed_form() {
    const TimeGrid grid(1e-6, 3.0, 64);
    double worst = 0.0;
    for (double p : {0.5, 1.0, 2.0}) {
        const SpectralDensityParams bath{1.0, p, 1.0};
        const FrequencyQuadrature quad(bath, QuadratureConfig{});
        for (double t : grid.nodes())
            worst = std::max(worst, std::abs(dephasing_correlation(t, bath) - quad.dephasing(t)));
    }
    return check("dephasing closed form vs quadrature", worst <= 1e-8, "max error " + sci(worst));
}

Matrix4c double_commutator_by_units(const Matrix2c& P, const Matrix2c& Q) {
    Matrix4c S;
    for (int col = 0; col < 4; ++col) {
        StateVector e = StateVector::Zero();
        e[col] = 1.0;
        const Matrix2c rho = devectorize(e);
        const Matrix2c inner = Q * rho - rho * Q;
        S.col(col) = vectorize(P * inner - inner * P);
    }
    return S;
}

CheckResult superop_oracle(const SelftestHooks& hooks) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        Matrix2c P, Q;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                P(r, c) = cplx{n(rng), n(rng)};
                Q(r, c) = cplx{n(rng), n(rng)};
            }
        worst = std::max(worst, (hooks.double_commutator(P, Q) - double_commutator_by_units(P, Q)).norm());
    }
    return check("double commutator oracle", worst <= 1e-13, "max error " + sci(worst));
}

struct SmallDecayRun {
    std::vector<Trajectory> trajectories;
    Matrix4c A;
    double kernel_max = 0.0;
};

// A reduced-resolution decay-and-decoherence ensemble assembled through the hook.
SmallDecayRun small_decay_run(const SelftestHooks& hooks) {
    Problem2Config cfg;
    cfg.grid = TimeGrid(1e-6, 3.0, 16);
    cfg.quad.nodes = std::size_t{1} << 12;
    const DecayKernelTable table(cfg, cfg.grid);
    KernelFunction kernel = [&](double t, double lag) {
        const DecayKernelValues v = table.values(t, lag);
        return hooks.block(v.b00, v.b11, v.b01, v.b10);
    };
    std::mt19937_64 rng(11);
    std::vector<StateVector> x0s;
    for (int i = 0; i < 8; ++i) x0s.push_back(vectorize(sample_initial_state(rng)));
    const Matrix4c A = Matrix4c::Zero();
    const KernelLattice lattice(A, kernel, cfg.grid);
    SmallDecayRun run{{}, A, lattice.max_kernel_norm()};
    for (const auto& x0 : x0s) run.trajectories.push_back(lattice.solve(x0));
    return run;
}

CheckResult trace_hermiticity(const SmallDecayRun& run) {
    double trace = 0.0, herm = 0.0;
    for (const auto& traj : run.trajectories)
        for (const auto& x : traj.values) {
            trace = std::max(trace, std::abs(x[0] + x[1] - 1.0));
            herm = std::max({herm, std::abs(x[3] - std::conj(x[2])), std::abs(x[0].imag()), std::abs(x[1].imag())});
        }
    return check("trace and Hermiticity preservation", trace <= 1e-10 && herm <= 1e-10,
                 "trace drift " + sci(trace) + ", Hermiticity defect " + sci(herm));
}

CheckResult gronwall(const SmallDecayRun& run) {
    bool ok = true;
    double ratio = 0.0;
    for (const auto& traj : run.trajectories) {
        const GronwallCheck g = gronwall_check(traj, run.A, run.kernel_max);
        ok = ok && g.holds;
        ratio = std::max(ratio, g.sup_norm / g.bound);
    }
    return check("Gronwall bound", ok, "max sup/bound " + sci(ratio));
}

CheckResult coercivity() {
    const TimeGrid grid(1e-6, 3.0, 64);
    HypothesisSpec spec;
    spec.variant = KernelVariant::Block;
    spec.q = spec.r = 3;
    const Initializer init = default_initializer(spec, 0.1);
    std::mt19937_64 rng(3);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
        const LearnedModel m = unpack(spec, init(rng));
        const SobolevParts parts = sobolev_parts(m.kernel, grid);
        const double h1 = parts.l2 + parts.seminorm;
        for (double beta : {0.1, 0.5, 0.95}) {
            const double t = tikhonov(m.kernel, grid, beta);
            const double slack = 1e-14 * h1;
            ok = ok && std::min(1.0 - beta, beta) * h1 <= t + slack && t <= std::max(1.0 - beta, beta) * h1 + slack;
        }
    }
    return check("Tikhonov coercivity sandwich", ok, "100 random atoms, beta in {0.1, 0.5, 0.95}");
}

CheckResult pack_roundtrip() {
    bool ok = true;
    for (KernelVariant v : {KernelVariant::Scalar, KernelVariant::Block, KernelVariant::Rank1Cross, KernelVariant::Full}) {
        HypothesisSpec spec;
        spec.variant = v;
        spec.q = 3;
        spec.r = 2;
        spec.learn_A = v == KernelVariant::Full;
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> params(spec.parameter_count());
        for (double& x : params) x = u(rng);
        const LearnedModel m = unpack(spec, params);
        ok = ok && pack(m.kernel, m.A) == params;
    }
    return check("pack/unpack round trip", ok, "all variants");
}

CheckResult determinism() {
    Problem1Config cfg;
    cfg.noise_level = 0.1;
    cfg.seed = 9;
    const Dataset a = gen_problem1(cfg);
    const Dataset b = gen_problem1(cfg);
    bool same = a.trajectories.size() == b.trajectories.size();
    for (std::size_t i = 0; same && i < a.trajectories.size(); ++i)
        same = a.trajectories[i].values == b.trajectories[i].values;
    return check("seeded generation is reproducible", same, "noisy dephasing dataset generated twice");
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestHooks& hooks) {
    std::vector<CheckResult> out;
    out.push_back(gamma_values());
    out.push_back(zeta_basel(hooks));
    out.push_back(zeta_shift(hooks));
    out.push_back(dephasing_closed_form());
    out.push_back(superop_oracle(hooks));
    try {
        const SmallDecayRun run = small_decay_run(hooks);
        out.push_back(trace_hermiticity(run));
        out.push_back(gronwall(run));
    } catch (const Error& e) {
        out.push_back(check("trace and Hermiticity preservation", false, e.what()));
        out.push_back(check("Gronwall bound", false, e.what()));
    }
    out.push_back(coercivity());
    out.push_back(pack_roundtrip());
    out.push_back(determinism());
    return out;
}

std::vector<BenchRow> run_solver_benchmark(std::span<const std::size_t> sizes) {
    std::vector<BenchRow> rows;
    const KernelFunction kernel = [](double, double) -> Matrix4c { return -Matrix4c::Identity(); };
    for (std::size_t M : sizes) {
        const TimeGrid grid(0.0, 3.0, M);
        const Trajectory traj = solve(VolterraProblem{Matrix4c::Zero(), kernel, StateVector::Ones(), grid});
        double err = 0.0;
        for (std::size_t i = 0; i < M; ++i) err = std::max(err, std::abs(traj.values[i][0] - std::cos(grid.node(i))));
        BenchRow row{M, err, 0.0};
        if (!rows.empty()) {
            const double h_prev = 3.0 / static_cast<double>(rows.back().M - 1);
            row.order = std::log(rows.back().error / err) / std::log(h_prev / grid.step());
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace memkern
