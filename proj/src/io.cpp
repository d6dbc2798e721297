#include "memkern/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "memkern/errors.hpp"

namespace memkern {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s.empty()) return 0.0;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw Error("malformed number '" + s + "'");
    return v;
}

}  // namespace

void write_dataset_csv(const fs::path& path, const Dataset& data) {
    std::ofstream out = open_out(path);
    const bool coherence_only = data.meta.problem == 1;
    out << "# problem,seed,M,t0,T,noise_level\n";
    out << "# " << data.meta.problem << ',' << data.meta.seed << ',' << data.grid.size() << ','
        << format_double(data.grid.t0()) << ',' << format_double(data.grid.T()) << ','
        << format_double(data.meta.noise_level) << '\n';
    out << "traj_id,t,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3\n";
    for (std::size_t id = 0; id < data.trajectories.size(); ++id) {
        const auto& traj = data.trajectories[id];
        for (std::size_t i = 0; i < traj.values.size(); ++i) {
            out << id << ',' << format_double(data.grid.node(i));
            for (int j = 0; j < 4; ++j) {
                if (coherence_only && j != 2) {
                    out << ",,";
                } else {
                    out << ',' << format_double(traj.values[i][j].real()) << ','
                        << format_double(traj.values[i][j].imag());
                }
            }
            out << '\n';
        }
    }
}

Dataset read_dataset_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset '" + path.string() + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("# problem", 0) != 0) throw Error("dataset is missing its metadata header");
    std::getline(in, line);
    if (line.rfind("# ", 0) != 0) throw Error("dataset is missing its metadata values");
    const auto meta = split_csv(line.substr(2));
    if (meta.size() != 6) throw Error("dataset metadata needs six fields");

    Dataset d;
    d.meta.problem = std::stoi(meta[0]);
    d.meta.seed = std::stoull(meta[1]);
    const auto M = static_cast<std::size_t>(std::stoull(meta[2]));
    d.grid = TimeGrid(parse_double(meta[3]), parse_double(meta[4]), M);
    d.meta.noise_level = parse_double(meta[5]);

    std::getline(in, line);
    if (line.rfind("traj_id,t", 0) != 0) throw Error("dataset column header missing");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 10) throw Error("dataset row needs ten fields: '" + line + "'");
        const auto id = static_cast<std::size_t>(std::stoull(f[0]));
        if (id == d.trajectories.size()) d.trajectories.push_back(Trajectory{d.grid, {}});
        if (id + 1 != d.trajectories.size()) throw Error("dataset rows must be grouped by trajectory");
        StateVector x;
        for (int j = 0; j < 4; ++j)
            x[j] = cplx{parse_double(f[static_cast<std::size_t>(2 + 2 * j)]),
                        parse_double(f[static_cast<std::size_t>(3 + 2 * j)])};
        d.trajectories.back().values.push_back(x);
    }
    for (const auto& traj : d.trajectories) {
        if (traj.values.size() != M) throw GridMismatch("trajectory length differs from M in the header");
        // Problem 1 starts from the equal superposition; its first row may carry noise.
        d.initial_states.push_back(d.meta.problem == 1 ? equal_superposition() : traj.values.front());
    }
    return d;
}

namespace {

nlohmann::json grid_to_json(const TimeGrid& g) { return {{"t0", g.t0()}, {"T", g.T()}, {"M", g.size()}}; }

}  // namespace

nlohmann::json model_to_json(const ModelFile& m) {
    const HypothesisSpec& spec = m.model.kernel.spec();
    nlohmann::json j;
    j["variant"] = to_string(spec.variant);
    j["orders"] = {spec.q, spec.r};
    j["atom_names"] = spec.atom_names();
    j["real_mode"] = spec.real_mode;
    j["learn_A"] = spec.learn_A;
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (const auto& atom : m.model.kernel.atoms()) {
        nlohmann::json r = nlohmann::json::array(), i = nlohmann::json::array();
        for (cplx c : atom.coefficients()) {
            r.push_back(c.real());
            i.push_back(c.imag());
        }
        re.push_back(r);
        im.push_back(i);
    }
    j["xi_re"] = re;
    j["xi_im"] = im;
    nlohmann::json are = nlohmann::json::array(), aim = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) {
            rr.push_back(m.model.A(r, c).real());
            ii.push_back(m.model.A(r, c).imag());
        }
        are.push_back(rr);
        aim.push_back(ii);
    }
    j["A_re"] = are;
    j["A_im"] = aim;
    j["eps0"] = spec.eps0;
    j["Delta"] = spec.Delta;
    j["t_ramp"] = spec.t_ramp;
    j["pole_tol"] = spec.pole_tol;
    j["problem"] = m.problem;
    if (m.grid) j["grid"] = grid_to_json(*m.grid);
    return j;
}

ModelFile model_from_json(const nlohmann::json& j) {
    try {
        HypothesisSpec spec;
        spec.variant = variant_from_string(j.at("variant").get<std::string>());
        spec.q = j.at("orders").at(0).get<int>();
        spec.r = j.at("orders").at(1).get<int>();
        spec.real_mode = j.value("real_mode", false);
        spec.learn_A = j.value("learn_A", false);
        spec.eps0 = j.at("eps0").get<double>();
        spec.Delta = j.at("Delta").get<double>();
        spec.t_ramp = j.at("t_ramp").get<double>();
        spec.pole_tol = j.at("pole_tol").get<double>();

        const auto& re = j.at("xi_re");
        const auto& im = j.at("xi_im");
        if (re.size() != spec.atom_count() || im.size() != spec.atom_count())
            throw Error("model atom count does not match its variant");
        std::vector<PadeModel> atoms;
        for (std::size_t a = 0; a < spec.atom_count(); ++a) {
            std::vector<cplx> xi;
            for (std::size_t k = 0; k < re[a].size(); ++k)
                xi.emplace_back(re[a].at(k).get<double>(), im[a].at(k).get<double>());
            atoms.emplace_back(spec.q, spec.r, std::move(xi));
        }
        Matrix4c A;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                A(r, c) = cplx{j.at("A_re").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
                               j.at("A_im").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>()};

        ModelFile m{LearnedModel{KernelHypothesis(spec, std::move(atoms)), A}, j.value("problem", 0), std::nullopt};
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            m.grid = TimeGrid(g.at("t0").get<double>(), g.at("T").get<double>(), g.at("M").get<std::size_t>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed model document: ") + e.what());
    }
}

void write_model(const fs::path& path, const ModelFile& m) {
    std::ofstream out = open_out(path);
    out << model_to_json(m).dump(2) << '\n';
}

ModelFile read_model(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("model is not valid JSON: ") + e.what());
    }
    return model_from_json(j);
}

nlohmann::json report_to_json(const FitReport& r) {
    return {{"objective", r.objective},
            {"loss", r.loss},
            {"reg", r.reg},
            {"alpha", r.reg_config.alpha},
            {"beta", r.reg_config.beta},
            {"iterations", r.iterations},
            {"grad_norm", r.grad_norm},
            {"start_index", r.start_index},
            {"seed", r.seed},
            {"status", r.status},
            {"start_objectives", r.start_objectives},
            {"final_objectives", r.final_objectives},
            {"wall_time", r.wall_time}};
}

void write_kernel_table_csv(const fs::path& path, const KernelTable& table) {
    std::ofstream out = open_out(path);
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
        out << '\n';
    }
}

void write_trajectories_csv(const fs::path& path, const std::vector<Trajectory>& trajs) {
    std::ofstream out = open_out(path);
    out << "traj_id,t,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3\n";
    for (std::size_t id = 0; id < trajs.size(); ++id) {
        const auto& traj = trajs[id];
        for (std::size_t i = 0; i < traj.values.size(); ++i) {
            out << id << ',' << format_double(traj.grid.node(i));
            for (int j = 0; j < 4; ++j)
                out << ',' << format_double(traj.values[i][j].real()) << ',' << format_double(traj.values[i][j].imag());
            out << '\n';
        }
    }
}

}  // namespace memkern
