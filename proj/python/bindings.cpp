#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "memkern/cli.hpp"
#include "memkern/errors.hpp"
#include "memkern/io.hpp"
#include "memkern/parallel.hpp"
#include "memkern/selftest.hpp"
#include "memkern/testbeds.hpp"

namespace py = pybind11;
using namespace memkern;

namespace {

// (n_traj, M, 4) complex array of the observed series.
py::array_t<cplx> states_array(const Dataset& d) {
    const auto n = static_cast<py::ssize_t>(d.trajectories.size());
    const auto M = static_cast<py::ssize_t>(d.grid.size());
    py::array_t<cplx> out({n, M, py::ssize_t{4}});
    auto v = out.mutable_unchecked<3>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t k = 0; k < M; ++k)
            for (py::ssize_t j = 0; j < 4; ++j)
                v(i, k, j) = d.trajectories[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(k)][j];
    return out;
}

py::array_t<cplx> trajectories_array(const std::vector<Trajectory>& trajs) {
    Dataset d;
    d.grid = trajs.empty() ? TimeGrid{} : trajs.front().grid;
    d.trajectories = trajs;
    return states_array(d);
}

py::dict report_dict(const FitReport& r) {
    py::dict d;
    d["objective"] = r.objective;
    d["loss"] = r.loss;
    d["reg"] = r.reg;
    d["iterations"] = r.iterations;
    d["grad_norm"] = r.grad_norm;
    d["wall_time"] = r.wall_time;
    d["start_index"] = r.start_index;
    d["seed"] = r.seed;
    d["status"] = r.status;
    d["alpha"] = r.reg_config.alpha;
    d["beta"] = r.reg_config.beta;
    d["start_objectives"] = r.start_objectives;
    d["final_objectives"] = r.final_objectives;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Memory-kernel learning for open qubit dynamics";

    py::register_exception<Error>(m, "MemkernError", PyExc_RuntimeError);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("t0") = 1e-6, py::arg("T") = 3.0, py::arg("M") = 64)
        .def_property_readonly("t0", &TimeGrid::t0)
        .def_property_readonly("T", &TimeGrid::T)
        .def_property_readonly("M", &TimeGrid::size)
        .def_property_readonly("step", &TimeGrid::step)
        .def("nodes", &TimeGrid::nodes)
        .def("__eq__", [](const TimeGrid& a, const TimeGrid& b) { return a == b; })
        .def("__repr__", [](const TimeGrid& g) {
            std::ostringstream s;
            s << "TimeGrid(t0=" << g.t0() << ", T=" << g.T() << ", M=" << g.size() << ")";
            return s.str();
        });

    py::class_<SpectralDensityParams>(m, "SpectralDensityParams")
        .def(py::init<>())
        .def(py::init([](double g, double p, double Lambda) { return SpectralDensityParams{g, p, Lambda}; }),
             py::arg("g") = 1.0, py::arg("p") = 1.0, py::arg("Lambda") = 1.0)
        .def_readwrite("g", &SpectralDensityParams::g)
        .def_readwrite("p", &SpectralDensityParams::p)
        .def_readwrite("Lambda", &SpectralDensityParams::Lambda);

    py::class_<QuadratureConfig>(m, "QuadratureConfig")
        .def(py::init<>())
        .def_readwrite("Omega", &QuadratureConfig::Omega)
        .def_readwrite("nodes", &QuadratureConfig::nodes);

    py::class_<Problem1Config>(m, "Problem1Config")
        .def(py::init<>())
        .def_readwrite("bath", &Problem1Config::bath)
        .def_readwrite("grid", &Problem1Config::grid)
        .def_readwrite("q", &Problem1Config::q)
        .def_readwrite("r", &Problem1Config::r)
        .def_readwrite("noise_level", &Problem1Config::noise_level)
        .def_readwrite("seed", &Problem1Config::seed);

    py::class_<Problem2Config>(m, "Problem2Config")
        .def(py::init<>())
        .def_readwrite("bath", &Problem2Config::bath)
        .def_readwrite("eps0", &Problem2Config::eps0)
        .def_readwrite("grid", &Problem2Config::grid)
        .def_readwrite("quad", &Problem2Config::quad)
        .def_readwrite("q", &Problem2Config::q)
        .def_readwrite("r", &Problem2Config::r)
        .def_readwrite("n_train", &Problem2Config::n_train)
        .def_readwrite("n_test", &Problem2Config::n_test)
        .def_readwrite("seed", &Problem2Config::seed);

    py::class_<Problem3Config>(m, "Problem3Config")
        .def(py::init<>())
        .def_readwrite("grid", &Problem3Config::grid)
        .def_readwrite("alpha_x", &Problem3Config::alpha_x)
        .def_readwrite("gamma_x", &Problem3Config::gamma_x)
        .def_readwrite("Omega_x", &Problem3Config::Omega_x)
        .def_readwrite("alpha_z", &Problem3Config::alpha_z)
        .def_readwrite("gamma_z", &Problem3Config::gamma_z)
        .def_readwrite("kappa", &Problem3Config::kappa)
        .def_readwrite("gamma_c", &Problem3Config::gamma_c)
        .def_readwrite("phi", &Problem3Config::phi)
        .def_readwrite("Delta", &Problem3Config::Delta)
        .def_readwrite("eps0", &Problem3Config::eps0)
        .def_readwrite("t_ramp", &Problem3Config::t_ramp)
        .def_readwrite("q", &Problem3Config::q)
        .def_readwrite("r", &Problem3Config::r)
        .def_readwrite("n_train", &Problem3Config::n_train)
        .def_readwrite("n_test", &Problem3Config::n_test)
        .def_readwrite("seed", &Problem3Config::seed);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("grid", &Dataset::grid)
        .def_property_readonly("t", [](const Dataset& d) { return d.grid.nodes(); })
        .def_property_readonly("states", &states_array)
        .def_readonly("initial_states", &Dataset::initial_states)
        .def_property_readonly("problem", [](const Dataset& d) { return d.meta.problem; })
        .def_property_readonly("seed", [](const Dataset& d) { return d.meta.seed; })
        .def_property_readonly("noise_level", [](const Dataset& d) { return d.meta.noise_level; })
        .def("__len__", [](const Dataset& d) { return d.trajectories.size(); });

    py::class_<RegConfig>(m, "RegConfig")
        .def(py::init([](double alpha, double beta) { return RegConfig{alpha, beta}; }), py::arg("alpha") = 0.0,
             py::arg("beta") = 0.0)
        .def_readwrite("alpha", &RegConfig::alpha)
        .def_readwrite("beta", &RegConfig::beta);

    py::class_<OptimOptions>(m, "OptimOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &OptimOptions::max_iters)
        .def_readwrite("grad_tol", &OptimOptions::grad_tol)
        .def_readwrite("step_tol", &OptimOptions::step_tol)
        .def_readwrite("fd_step", &OptimOptions::fd_step)
        .def_readwrite("n_starts", &OptimOptions::n_starts)
        .def_readwrite("init_scale", &OptimOptions::init_scale)
        .def_readwrite("seed", &OptimOptions::seed);

    py::class_<ProblemStructure>(m, "ProblemStructure")
        .def_property_readonly("variant", [](const ProblemStructure& s) { return to_string(s.spec.variant); })
        .def_property_readonly("parameter_count", [](const ProblemStructure& s) { return s.spec.parameter_count(); })
        .def_property_readonly("atom_names", [](const ProblemStructure& s) { return s.spec.atom_names(); });

    py::class_<LearnedModel>(m, "LearnedModel")
        .def_property_readonly("variant", [](const LearnedModel& lm) { return to_string(lm.kernel.spec().variant); })
        .def_property_readonly("A", [](const LearnedModel& lm) { return lm.A; })
        .def("kernel", [](const LearnedModel& lm, double t, double lag) { return lm.kernel.assemble(t, lag); },
             py::arg("t"), py::arg("lag"))
        .def(
            "atom",
            [](const LearnedModel& lm, std::size_t index, double t) {
                if (index >= lm.kernel.atoms().size()) throw py::index_error("atom index out of range");
                return pade_eval(lm.kernel.atoms()[index], t);
            },
            py::arg("index"), py::arg("t"))
        .def(
            "solve",
            [](const LearnedModel& lm, const Dataset& d) {
                return trajectories_array(solve_batch(lm.A, kernel_function(lm.kernel), d.grid, d.initial_states));
            },
            py::arg("data"), "Forward solves from the dataset's initial states, shape (n, M, 4).");

    py::class_<FitOutcome>(m, "FitOutcome")
        .def_readonly("params", &FitOutcome::params)
        .def_readonly("model", &FitOutcome::model)
        .def_property_readonly("report", [](const FitOutcome& f) { return report_dict(f.report); });

    m.def("gen_problem1", &gen_problem1, py::arg("cfg") = Problem1Config{});
    m.def("gen_problem2", &gen_problem2, py::arg("cfg") = Problem2Config{},
          "Returns (train, test).");
    m.def("gen_problem3", &gen_problem3, py::arg("cfg") = Problem3Config{},
          "Returns (train, test).");

    m.def("structure_for_problem1", &structure_for_problem1, py::arg("cfg") = Problem1Config{});
    m.def("structure_for_problem2", &structure_for_problem2, py::arg("cfg") = Problem2Config{});
    m.def("structure_for_problem3", &structure_for_problem3, py::arg("cfg") = Problem3Config{});
    m.def("default_reg", &default_reg, py::arg("problem"), py::arg("noise_level") = 0.0);

    m.def(
        "fit",
        [](const ProblemStructure& s, const Dataset& d, const RegConfig& reg, const OptimOptions& opts,
           std::vector<double> warm_start) {
            py::gil_scoped_release release;
            return fit_problem(s, d, reg, opts, warm_start);
        },
        py::arg("structure"), py::arg("data"), py::arg("reg"), py::arg("opts") = OptimOptions{},
        py::arg("warm_start") = std::vector<double>{});
    m.def(
        "empirical_risk",
        [](std::vector<double> params, const ProblemStructure& s, const Dataset& d) {
            return empirical_risk(params, s, d);
        },
        py::arg("params"), py::arg("structure"), py::arg("data"));

    m.def("read_dataset", [](const std::filesystem::path& p) { return read_dataset_csv(p); }, py::arg("path"));
    m.def("write_dataset", [](const std::filesystem::path& p, const Dataset& d) { write_dataset_csv(p, d); },
          py::arg("path"), py::arg("data"));

    m.def("gamma", &gamma_fn, py::arg("z"));
    m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("s"), py::arg("a"));
    m.def("dephasing_correlation", &dephasing_correlation, py::arg("t"),
          py::arg("params") = SpectralDensityParams{});

    m.def("selftest", [] {
        std::vector<py::dict> out;
        for (const auto& r : run_selftest()) {
            py::dict d;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.push_back(d);
        }
        return out;
    });
    m.def(
        "bench_solver",
        [](std::vector<std::size_t> sizes) {
            std::vector<py::tuple> out;
            for (const auto& r : run_solver_benchmark(sizes)) out.push_back(py::make_tuple(r.M, r.error, r.order));
            return out;
        },
        py::arg("sizes") = std::vector<std::size_t>{32, 64, 128, 256});

    m.def("set_threads", &set_thread_count, py::arg("n"));
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
