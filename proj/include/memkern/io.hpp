#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "memkern/objective.hpp"
#include "memkern/testbeds.hpp"

namespace memkern {

// Dataset CSV:
//   # problem,seed,M,t0,T,noise_level
//   # <values>
//   traj_id,t,re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,re_x3,im_x3
// Problem 1 files carry the rho01 columns only; the other fields are empty.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(const std::filesystem::path& path);

struct ModelFile {
    LearnedModel model;
    int problem = 0;
    std::optional<TimeGrid> grid;  // training grid
};

nlohmann::json model_to_json(const ModelFile& m);
ModelFile model_from_json(const nlohmann::json& j);
void write_model(const std::filesystem::path& path, const ModelFile& m);
ModelFile read_model(const std::filesystem::path& path);

nlohmann::json report_to_json(const FitReport& r);

void write_kernel_table_csv(const std::filesystem::path& path, const KernelTable& table);
void write_trajectories_csv(const std::filesystem::path& path, const std::vector<Trajectory>& trajs);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace memkern
