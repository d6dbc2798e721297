#include "memkern/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "memkern/errors.hpp"
#include "memkern/io.hpp"
#include "memkern/parallel.hpp"
#include "memkern/selftest.hpp"
#include "memkern/testbeds.hpp"

namespace memkern {

namespace fs = std::filesystem;

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Generator settings shared by `gen` and `dump-kernel`. NaN / 0 fields take
// the per-problem default once the problem id is known.
struct GeneratorOptions {
    int problem = 1;
    double g = kUnset;
    double p = 1.0;
    double Lambda = 1.0;
    double noise = 0.0;
    std::size_t M = 0;
    double t0 = 1e-6;
    double T = 3.0;
    std::size_t n_train = 30;
    std::size_t n_test = 100;
    double eps0 = 1.0;
    double omega_max = 1000.0;
    std::size_t quad_nodes = std::size_t{1} << 18;
    Problem3Config p3{};
};

struct FitOptions {
    std::string data;
    std::string init_model;
    double alpha = kUnset;
    double beta = kUnset;
    int q = 0;
    int r = 0;
    double eps0 = 1.0;
    double Delta = 1.0;
    double t_ramp = 0.05;
    OptimOptions optim{};
};

struct EvalOptions {
    std::string model;
    std::string data;
};

struct DumpOptions {
    std::string model;
};

struct Globals {
    std::uint64_t seed = 0;
    std::string out = ".";
    std::size_t threads = 0;
};

// Signals an exit code from deep inside a command.
struct ExitRequest {
    int code;
    std::string message;
};

// Real-valued options echo their defaults at round-trip precision.
CLI::Option* add_real(CLI::App* sub, const std::string& name, double& ref, const std::string& desc = "") {
    CLI::Option* opt = sub->add_option(name, ref, desc);
    if (!std::isnan(ref)) opt->default_str(format_double(ref));
    return opt;
}

void add_generator_options(CLI::App* sub, GeneratorOptions& o) {
    sub->add_option("--problem", o.problem, "Testbed: 1 dephasing, 2 decay, 3 cross-correlated")
        ->check(CLI::Range(1, 3));
    add_real(sub, "--g", o.g, "Coupling strength (default 1, or 1/4 for problem 2)");
    add_real(sub, "--p", o.p, "Ohmicity exponent");
    add_real(sub, "--lambda", o.Lambda, "Spectral cutoff");
    add_real(sub, "--noise", o.noise, "Relative uniform noise level (problem 1)");
    sub->add_option("--M", o.M, "Grid points (default 64 for problem 1, else 32)");
    add_real(sub, "--t0", o.t0, "Initial time");
    add_real(sub, "--T", o.T, "Final time");
    sub->add_option("--n-train", o.n_train, "Training trajectories (problems 2, 3)");
    sub->add_option("--n-test", o.n_test, "Held-out trajectories (problems 2, 3)");
    add_real(sub, "--eps0", o.eps0, "Qubit splitting");
    add_real(sub, "--omega-max", o.omega_max, "Frequency cutoff of the bath quadrature");
    sub->add_option("--quad-nodes", o.quad_nodes, "Frequency quadrature nodes");
    add_real(sub, "--alpha-x", o.p3.alpha_x, "Amplitude of C_xx (problem 3)");
    add_real(sub, "--gamma-x", o.p3.gamma_x, "Decay rate of C_xx (problem 3)");
    add_real(sub, "--omega-x", o.p3.Omega_x, "Oscillation frequency of C_xx (problem 3)");
    add_real(sub, "--alpha-z", o.p3.alpha_z, "Amplitude of C_zz (problem 3)");
    add_real(sub, "--gamma-z", o.p3.gamma_z, "Decay rate of C_zz (problem 3)");
    add_real(sub, "--kappa", o.p3.kappa, "Amplitude of C_xz (problem 3)");
    add_real(sub, "--gamma-c", o.p3.gamma_c, "Decay rate of C_xz (problem 3)");
    add_real(sub, "--phi", o.p3.phi, "Phase of C_xz (problem 3)");
    add_real(sub, "--delta", o.p3.Delta, "Rotating-frame frequency (problem 3)");
    add_real(sub, "--t-ramp", o.p3.t_ramp, "Small-lag ramp time (problem 3)");
}

// Record a resolved value so the manifest echoes it explicitly.
template <typename T>
void pin(CLI::App* sub, const std::string& name, const T& value) {
    CLI::Option* opt = sub->get_option(name);
    std::ostringstream os;
    if constexpr (std::is_floating_point_v<T>) {
        os << format_double(value);
    } else {
        os << value;
    }
    opt->clear();
    opt->add_result(os.str());
}

struct ResolvedGenerator {
    Problem1Config p1;
    Problem2Config p2;
    Problem3Config p3;
    TimeGrid grid;
};

ResolvedGenerator resolve_generator(CLI::App* sub, GeneratorOptions& o, std::uint64_t seed) {
    if (std::isnan(o.g)) o.g = o.problem == 2 ? 0.25 : 1.0;
    if (o.M == 0) o.M = o.problem == 1 ? 64 : 32;
    pin(sub, "--g", o.g);
    pin(sub, "--M", o.M);

    ResolvedGenerator r;
    r.grid = TimeGrid(o.t0, o.T, o.M);
    r.p1.bath = {o.g, o.p, o.Lambda};
    r.p1.grid = r.grid;
    r.p1.noise_level = o.noise;
    r.p1.seed = seed;
    r.p2.bath = {o.g, o.p, o.Lambda};
    r.p2.eps0 = o.eps0;
    r.p2.grid = r.grid;
    r.p2.quad = {o.omega_max, o.quad_nodes};
    r.p2.n_train = o.n_train;
    r.p2.n_test = o.n_test;
    r.p2.seed = seed;
    r.p3 = o.p3;
    r.p3.eps0 = o.eps0;
    r.p3.grid = r.grid;
    r.p3.n_train = o.n_train;
    r.p3.n_test = o.n_test;
    r.p3.seed = seed;
    switch (o.problem) {
        case 1: r.p1.validate(); break;
        case 2: r.p2.validate(); break;
        default: r.p3.validate(); break;
    }
    return r;
}

void write_manifest(const CLI::App& app, const CLI::App* active, const fs::path& path) {
    std::istringstream all(app.config_to_str(true, false));
    std::ostringstream kept;
    kept << "# rerun: memkern --config " << path.string() << ' ' << active->get_name() << '\n';
    std::string line;
    while (std::getline(all, line)) {
        const auto eq = line.find('=');
        const auto dot = line.find('.');
        const bool scoped = dot != std::string::npos && (eq == std::string::npos || dot < eq);
        if (scoped && line.compare(0, dot, active->get_name()) != 0) continue;
        kept << line << '\n';
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << kept.str();
}

Dataset load_dataset(const std::string& path) {
    try {
        return read_dataset_csv(path);
    } catch (const Error& e) {
        throw ExitRequest{kExitConfig, e.what()};
    } catch (const std::exception& e) {
        throw ExitRequest{kExitConfig, "cannot parse dataset '" + path + "': " + e.what()};
    }
}

ModelFile load_model(const std::string& path) {
    try {
        return read_model(path);
    } catch (const Error& e) {
        throw ExitRequest{kExitConfig, e.what()};
    }
}

ProblemStructure structure_for(int problem, const HypothesisSpec& spec, const Matrix4c& A) {
    ProblemStructure s{spec, problem == 1 ? kObserveCoherence : kObserveAll, A};
    return s;
}

int cmd_gen(CLI::App& app, CLI::App* sub, GeneratorOptions& o, const Globals& g, std::ostream& out) {
    ResolvedGenerator r = [&] {
        try {
            return resolve_generator(sub, o, g.seed);
        } catch (const Error& e) {
            throw ExitRequest{kExitConfig, e.what()};
        }
    }();
    const fs::path dir(g.out);
    try {
        if (o.problem == 1) {
            const Dataset d = gen_problem1(r.p1);
            write_dataset_csv(dir / "data.csv", d);
            out << "wrote " << (dir / "data.csv").string() << " (1 trajectory, " << d.grid.size() << " nodes)\n";
        } else {
            const auto [train, test] = o.problem == 2 ? gen_problem2(r.p2) : gen_problem3(r.p3);
            write_dataset_csv(dir / "train.csv", train);
            write_dataset_csv(dir / "test.csv", test);
            out << "wrote " << (dir / "train.csv").string() << " (" << train.trajectories.size()
                << " trajectories) and " << (dir / "test.csv").string() << " (" << test.trajectories.size()
                << " trajectories)\n";
        }
    } catch (const Error& e) {
        throw ExitRequest{kExitGeneration, std::string("generation failed: ") + e.what()};
    }
    write_manifest(app, sub, dir / "gen.manifest.ini");
    return kExitOk;
}

int cmd_fit(CLI::App& app, CLI::App* sub, FitOptions& o, const Globals& g, std::ostream& out) {
    const Dataset data = load_dataset(o.data);
    const int problem = data.meta.problem;
    if (problem < 1 || problem > 3) throw ExitRequest{kExitConfig, "dataset names an unknown problem"};

    ProblemStructure structure;
    if (problem == 1) {
        Problem1Config c;
        if (o.q > 0) c.q = o.q;
        if (o.r > 0) c.r = o.r;
        structure = structure_for_problem1(c);
    } else if (problem == 2) {
        Problem2Config c;
        c.eps0 = o.eps0;
        if (o.q > 0) c.q = o.q;
        if (o.r > 0) c.r = o.r;
        structure = structure_for_problem2(c);
    } else {
        Problem3Config c;
        c.Delta = o.Delta;
        c.eps0 = o.eps0;
        c.t_ramp = o.t_ramp;
        if (o.q > 0) c.q = o.q;
        if (o.r > 0) c.r = o.r;
        structure = structure_for_problem3(c);
    }
    const RegConfig defaults = default_reg(problem, data.meta.noise_level);
    RegConfig reg{std::isnan(o.alpha) ? defaults.alpha : o.alpha, std::isnan(o.beta) ? defaults.beta : o.beta};
    o.q = structure.spec.q;
    o.r = structure.spec.r;
    pin(sub, "--alpha", reg.alpha);
    pin(sub, "--beta", reg.beta);
    pin(sub, "--q", o.q);
    pin(sub, "--r", o.r);

    OptimOptions opts = o.optim;
    opts.seed = g.seed;
    try {
        reg.validate();
        opts.validate();
    } catch (const Error& e) {
        throw ExitRequest{kExitConfig, e.what()};
    }

    std::vector<double> warm;
    if (!o.init_model.empty()) {
        const ModelFile init = load_model(o.init_model);
        warm = pack(init.model.kernel, init.model.A);
        if (warm.size() != structure.spec.parameter_count() || init.model.kernel.spec().variant != structure.spec.variant)
            throw ExitRequest{kExitConfig, "initial model does not match the problem's hypothesis"};
    }

    FitOutcome fit = [&] {
        try {
            return fit_problem(structure, data, reg, opts, warm);
        } catch (const AllStartsFailed& e) {
            throw ExitRequest{kExitOptimization, e.what()};
        }
    }();

    const Objective objective(structure, data, reg);
    bool gronwall_ok = true;
    {
        const KernelLattice lattice(fit.model.A, kernel_function(fit.model.kernel), data.grid);
        for (const auto& x0 : data.initial_states)
            gronwall_ok = gronwall_check(lattice.solve(x0), fit.model.A, lattice.max_kernel_norm()).holds && gronwall_ok;
    }

    const fs::path dir(g.out);
    write_model(dir / "model.json", ModelFile{fit.model, problem, data.grid});
    nlohmann::json report = report_to_json(fit.report);
    report["problem"] = problem;
    report["parameter_count"] = fit.params.size();
    report["gronwall_holds"] = gronwall_ok;
    {
        std::ofstream f(dir / "report.json", std::ios::binary);
        f << report.dump(2) << '\n';
    }
    write_manifest(app, sub, dir / "fit.manifest.ini");
    out << std::scientific << std::setprecision(6) << "objective " << fit.report.objective << "  loss "
        << fit.report.loss << "  reg " << fit.report.reg << "  status " << fit.report.status << "  start "
        << fit.report.start_index << '\n';
    return kExitOk;
}

int cmd_eval(CLI::App& app, CLI::App* sub, const EvalOptions& o, const Globals& g, std::ostream& out) {
    const ModelFile model = load_model(o.model);
    const Dataset data = load_dataset(o.data);
    if (model.grid && !(*model.grid == data.grid))
        throw ExitRequest{kExitGridMismatch, "dataset grid differs from the model's training grid"};
    const int problem = model.problem != 0 ? model.problem : data.meta.problem;
    const ProblemStructure structure = structure_for(problem, model.model.kernel.spec(), model.model.A);
    const std::vector<double> params = pack(model.model.kernel, model.model.A);

    const std::vector<double> losses = per_trajectory_losses(params, structure, data);
    double risk = 0.0;
    for (double l : losses) risk += l;
    risk /= static_cast<double>(losses.size());

    const fs::path dir(g.out);
    fs::create_directories(dir);
    {
        const nlohmann::json j{{"problem", problem}, {"risk", risk}, {"per_trajectory", losses},
                               {"n_trajectories", losses.size()}};
        std::ofstream f(dir / "eval.json", std::ios::binary);
        f << j.dump(2) << '\n';
    }
    try {
        const KernelLattice lattice(model.model.A, kernel_function(model.model.kernel), data.grid);
        std::vector<Trajectory> learned;
        for (const auto& x0 : data.initial_states) learned.push_back(lattice.solve(x0));
        write_trajectories_csv(dir / "eval_trajectories.csv", learned);
    } catch (const Error& e) {
        out << "learned model is not solvable on this grid: " << e.what() << '\n';
    }
    write_manifest(app, sub, dir / "eval.manifest.ini");
    out << std::scientific << std::setprecision(6) << "empirical risk " << risk << " over " << losses.size()
        << " trajectories\n";
    return kExitOk;
}

int cmd_dump(CLI::App& app, CLI::App* sub, GeneratorOptions& o, const DumpOptions& d, const Globals& g,
             std::ostream& out) {
    std::optional<ModelFile> model;
    if (!d.model.empty()) {
        model = load_model(d.model);
        if (model->grid && o.M == 0 && !sub->get_option("--t0")->count() && !sub->get_option("--T")->count()) {
            o.M = model->grid->size();
            o.t0 = model->grid->t0();
            o.T = model->grid->T();
            pin(sub, "--t0", o.t0);
            pin(sub, "--T", o.T);
        }
    }
    ResolvedGenerator r = [&] {
        try {
            return resolve_generator(sub, o, g.seed);
        } catch (const Error& e) {
            throw ExitRequest{kExitConfig, e.what()};
        }
    }();
    std::optional<KernelHypothesis> learned;
    if (model) learned = model->model.kernel;
    KernelTable table;
    try {
        table = dump_true_kernels(o.problem, r.p1, r.p2, r.p3, r.grid, learned);
    } catch (const Error& e) {
        throw ExitRequest{kExitConfig, e.what()};
    }
    const fs::path dir(g.out);
    write_kernel_table_csv(dir / "kernels.csv", table);
    write_manifest(app, sub, dir / "dump-kernel.manifest.ini");
    out << "wrote " << (dir / "kernels.csv").string() << " (" << table.rows.size() << " rows)\n";
    return kExitOk;
}

int cmd_bench(std::ostream& out) {
    const std::size_t sizes[] = {32, 64, 128, 256};
    const auto rows = run_solver_benchmark(sizes);
    out << std::setw(6) << "M" << std::setw(16) << "error" << std::setw(10) << "order" << '\n';
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << std::setw(6) << rows[i].M << std::setw(16) << std::scientific << std::setprecision(6) << rows[i].error;
        if (i > 0) {
            out << std::setw(10) << std::fixed << std::setprecision(3) << rows[i].order;
            ok = ok && rows[i].order >= 1.8;
        } else {
            out << std::setw(10) << "-";
        }
        out << '\n';
    }
    if (!ok) {
        out << "observed order below 1.8\n";
        return kExitSolverOrder;
    }
    return kExitOk;
}

int cmd_selftest(std::ostream& out) {
    const auto results = run_selftest();
    std::vector<std::string> failed;
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        if (!r.passed) failed.push_back(r.name);
    }
    if (failed.empty()) {
        out << results.size() << " checks passed\n";
        return kExitOk;
    }
    out << failed.size() << " of " << results.size() << " checks failed:";
    for (const auto& f : failed) out << "\n  " << f;
    out << '\n';
    return kExitSelftest;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learn memory kernels of open qubit dynamics from trajectories", "memkern"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "INI file with option values; command-line flags take precedence");
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

    GeneratorOptions gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "Generate synthetic datasets");
    add_generator_options(gen, gen_opts);

    FitOptions fit_opts;
    CLI::App* fit = app.add_subcommand("fit", "Fit a kernel model to a dataset");
    fit->add_option("--data", fit_opts.data, "Training dataset CSV")->required();
    fit->add_option("--init-model", fit_opts.init_model, "Model JSON used as the first start");
    add_real(fit, "--alpha", fit_opts.alpha, "Regulariser weight (default per problem)");
    add_real(fit, "--beta", fit_opts.beta, "Seminorm balance (default per problem)");
    fit->add_option("--q", fit_opts.q, "Numerator degree (default per problem)");
    fit->add_option("--r", fit_opts.r, "Denominator degree (default per problem)");
    add_real(fit, "--eps0", fit_opts.eps0, "Qubit splitting");
    add_real(fit, "--delta", fit_opts.Delta, "Rotating-frame frequency (problem 3)");
    add_real(fit, "--t-ramp", fit_opts.t_ramp, "Small-lag ramp time (problem 3)");
    fit->add_option("--starts", fit_opts.optim.n_starts, "Independent starts");
    fit->add_option("--max-iters", fit_opts.optim.max_iters, "Iterations per start");
    add_real(fit, "--grad-tol", fit_opts.optim.grad_tol);
    add_real(fit, "--step-tol", fit_opts.optim.step_tol);
    add_real(fit, "--fd-step", fit_opts.optim.fd_step);
    add_real(fit, "--init-scale", fit_opts.optim.init_scale);

    EvalOptions eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
    eval->add_option("--model", eval_opts.model, "Model JSON")->required();
    eval->add_option("--data", eval_opts.data, "Dataset CSV")->required();

    GeneratorOptions dump_gen;
    DumpOptions dump_opts;
    CLI::App* dump = app.add_subcommand("dump-kernel", "Tabulate generator and learned kernels");
    add_generator_options(dump, dump_gen);
    dump->add_option("--model", dump_opts.model, "Model JSON with learned atoms");

    CLI::App* bench = app.add_subcommand("bench-solver", "Convergence study of the Volterra solver");
    CLI::App* self = app.add_subcommand("selftest", "Run the invariant suite");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    set_thread_count(g.threads);
    try {
        if (gen->parsed()) return cmd_gen(app, gen, gen_opts, g, out);
        if (fit->parsed()) return cmd_fit(app, fit, fit_opts, g, out);
        if (eval->parsed()) return cmd_eval(app, eval, eval_opts, g, out);
        if (dump->parsed()) return cmd_dump(app, dump, dump_gen, dump_opts, g, out);
        if (bench->parsed()) return cmd_bench(out);
        if (self->parsed()) return cmd_selftest(out);
    } catch (const ExitRequest& e) {
        err << "error: " << e.message << '\n';
        return e.code;
    } catch (const GridMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitGridMismatch;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace memkern
