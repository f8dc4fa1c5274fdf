#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "phlearn/dynamics.hpp"
#include "phlearn/learn.hpp"
#include "phlearn/types.hpp"

namespace phlearn {

using Json = nlohmann::json;

// File formats (stable CLI contract):
//   system file:  {"n": int, "Q": [[...]], "B": [...]}
//   params file:  {"n": int, "d": [...], "v": [...]}
//   trajectory CSV: header t,u,y[,x1..x2n], full double precision.
// Unknown keys in JSON objects are rejected. Parse problems throw ParseError.

PHSystem read_system_json(const std::filesystem::path& path);
void write_system_json(const std::filesystem::path& path, const PHSystem& sys);

CHParams read_params_json(const std::filesystem::path& path);
void write_params_json(const std::filesystem::path& path, const CHParams& p);

/// Square matrix from a .csv (comma-separated rows) or .json file (a 2-D
/// array, or an object with a single key "Q"). Selected by extension.
Matrix read_matrix_auto(const std::filesystem::path& path);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Comparison table t,u,y,y_model used by the experiment artifacts.
void write_comparison_csv(const std::filesystem::path& path, const Trajectory& truth,
                          const std::vector<double>& y_model);

Json report_to_json(const TrainReport& report, const TrainConfig& cfg);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

std::string to_string(ParamSpace space);
ParamSpace param_space_from_string(const std::string& s);
std::string to_string(StepMethod method);
StepMethod step_method_from_string(const std::string& s);
std::string to_string(RepresentationKind rep);
RepresentationKind representation_from_string(const std::string& s);
std::string to_string(GradMethod grad);
GradMethod grad_method_from_string(const std::string& s);

}  // namespace phlearn
