#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "memkern/errors.hpp"
#include "memkern/io.hpp"

using namespace memkern;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
    const fs::path dir = fs::path(MEMKERN_TEST_TMPDIR) / "io" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
}

}  // namespace

TEST_SUITE("io") {
TEST_CASE("format_double round trip") {
    for (double v : {0.1, 1e-6, 3.0, -2.5e-300, 0.7853981633974483, 1.0 / 3.0}) CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("problem 1 dataset round trip") {
    const fs::path dir = tmp_dir("p1");
    Problem1Config cfg;
    cfg.noise_level = 0.1;
    cfg.seed = 4;
    const Dataset d = gen_problem1(cfg);
    write_dataset_csv(dir / "data.csv", d);

    std::ifstream f(dir / "data.csv");
    std::string line;
    std::getline(f, line);
    CHECK(line == "# problem,seed,M,t0,T,noise_level");
    std::getline(f, line);
    CHECK(line == "# 1,4,64,1e-06,3,0.1");

    const Dataset back = read_dataset_csv(dir / "data.csv");
    CHECK(back.grid == d.grid);
    CHECK(back.meta.problem == 1);
    CHECK(back.meta.seed == 4);
    CHECK(back.meta.noise_level == 0.1);
    REQUIRE(back.trajectories.size() == 1);
    for (std::size_t k = 0; k < d.grid.size(); ++k) CHECK(back.trajectories[0].values[k][2] == d.trajectories[0].values[k][2]);
    CHECK(back.initial_states[0] == equal_superposition());
}

TEST_CASE("ensemble dataset round trip") {
    const fs::path dir = tmp_dir("p3");
    Problem3Config cfg;
    cfg.n_train = 3;
    cfg.n_test = 1;
    cfg.seed = 9;
    const Dataset d = gen_problem3(cfg).first;
    write_dataset_csv(dir / "train.csv", d);
    const Dataset back = read_dataset_csv(dir / "train.csv");
    CHECK(back.meta.problem == 3);
    REQUIRE(back.trajectories.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.trajectories[i].values == d.trajectories[i].values);
        CHECK(back.initial_states[i] == d.initial_states[i]);
    }
    // a second write is byte-identical
    write_dataset_csv(dir / "again.csv", back);
    std::ifstream a(dir / "train.csv"), b(dir / "again.csv");
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
}

TEST_CASE("model json round trip") {
    for (KernelVariant v : {KernelVariant::Scalar, KernelVariant::Block, KernelVariant::Rank1Cross, KernelVariant::Full}) {
        HypothesisSpec spec;
        spec.variant = v;
        spec.q = 2;
        spec.r = 1;
        spec.learn_A = v == KernelVariant::Full;
        spec.real_mode = v == KernelVariant::Rank1Cross;
        std::vector<double> params(spec.parameter_count());
        std::mt19937_64 rng(static_cast<unsigned>(v) + 1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (double& x : params) x = u(rng);
        const LearnedModel m = unpack(spec, params);
        const ModelFile file{m, 2, TimeGrid(1e-6, 3.0, 32)};
        const ModelFile back = model_from_json(model_to_json(file));
        CHECK(back.problem == 2);
        REQUIRE(back.grid.has_value());
        CHECK(*back.grid == *file.grid);
        CHECK(back.model.kernel.spec().variant == v);
        CHECK(pack(back.model.kernel, back.model.A) == params);

        const fs::path dir = tmp_dir("model");
        write_model(dir / "model.json", file);
        CHECK(pack(read_model(dir / "model.json").model.kernel, m.A) == pack(m.kernel, m.A));
    }
}

TEST_CASE("malformed inputs") {
    const fs::path dir = tmp_dir("bad");
    CHECK_THROWS_AS(read_dataset_csv(dir / "missing.csv"), Error);
    write_text(dir / "header.csv", "traj_id,t\n0,1\n");
    CHECK_THROWS_AS(read_dataset_csv(dir / "header.csv"), Error);
    write_text(dir / "short.csv",
               "# problem,seed,M,t0,T,noise_level\n# 2,0,4,1e-06,3,0\n"
               "traj_id,t,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3\n0,1e-06,1,0,0,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_dataset_csv(dir / "short.csv"), Error);
    write_text(dir / "junk.csv",
               "# problem,seed,M,t0,T,noise_level\n# 2,0,1,1e-06,3,0\n"
               "traj_id,t,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3\n0,1e-06,abc,0,0,0,0,0,0,0\n");
    CHECK_THROWS_AS(read_dataset_csv(dir / "junk.csv"), Error);

    write_text(dir / "bad.json", "{not json");
    CHECK_THROWS_AS(read_model(dir / "bad.json"), Error);
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"variant", "Block"}}), Error);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"variant":"Nope","orders":[1,1]})")), Error);
}
}
