#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "phlearn/io.hpp"
#include "phlearn/learn.hpp"
#include "phlearn/types.hpp"

namespace phlearn {

/// Lossless LC circuit with five parallel branches and unit components:
/// n = 5, Q = I_10, B = (0,0,0,0,0,1,1,1,1,1)^T. Non-canonical.
PHSystem circuit_system();

/// Two-particle chain with nearest-neighbor springs and a grounding spring on
/// the first particle: n = 2, Q = blkdiag([[2,-1],[-1,1]], I_2), B = (0,0,1,0)^T,
/// output = velocity of the first particle. Canonical.
PHSystem fk_system();

/// Reference initial state (2, 1, -3, -3) of the chain experiment.
Vector fk_initial_state();

/// Optional overrides of the scripted experiment defaults.
struct ScenarioOverrides {
  std::optional<int> steps;        // training steps
  std::optional<int> test_steps;   // evaluation horizon (circuit)
  std::optional<double> dt;
  std::optional<double> lr;
  std::optional<int> epochs;
  std::optional<int> model_dim;    // model n
  std::optional<ParamSpace> space; // restricts the runs to one space
  std::optional<std::vector<std::string>> signals;  // circuit test signals
};

struct Scenario {
  std::string name;  // "circuit" or "fk"
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  ScenarioOverrides overrides;
};

/// Runs a scenario and writes its artifacts (train.csv, test_<signal>.csv,
/// report_<space>.json, summary.json) into out_dir. Returns the summary.
Json run_scenario(const Scenario& s);

}  // namespace phlearn
