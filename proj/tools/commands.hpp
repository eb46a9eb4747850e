#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "manifest.hpp"

namespace pedmotion::cli {

namespace fs = std::filesystem;

struct Common {
  int threads = 1;
  bool verbose = false;
  std::string manifest;  // empty: <output dir>/manifest.ndjson
};

struct SynthArgs {
  fs::path out;
  int count = 100;
  std::uint64_t seed = 0;
  int joints = 22;
};

struct FilterArgs {
  fs::path in;
  fs::path out;
  std::string keywords;  // filter config document; empty uses the built-in list
  double fps = 20.0;
};

struct ReconstructArgs {
  fs::path in;
  fs::path out;
  double attempt_min = 0.5;
  double cross_min = 2.5;
};

struct RetargetArgs {
  fs::path in;
  fs::path out;
  std::string skeleton;  // skeleton map document; empty uses the built-in CARLA-like map
};

struct GenerateArgs {
  fs::path clips;
  fs::path out;
  std::uint64_t seed = 0;
  int scenarios = 1;
  int interactive = 20;
  int ambient = 10;
  int vehicles = 30;
  int obstacles = 4;
  double route_length = 200.0;
  std::string planner = "constant_speed";
};

struct SimulateArgs {
  std::vector<fs::path> scenarios;  // files or directories
  fs::path clips;
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::string planner;      // overrides the planner named in each scenario
  std::string planner_cmd;  // external stdio planner, whitespace-separated argv
  int parallel_runs = 1;
  double planner_budget = 0.5;
};

struct EvaluateArgs {
  fs::path logs;
  fs::path scenarios;
  fs::path out;
  std::string csv;
  std::string agent;
};

struct StatsArgs {
  fs::path trajectories;
  fs::path tags;
  fs::path out;
  std::size_t samples = 100;
};

struct PlotArgs {
  std::string stats;
  std::string report;
  fs::path out;
};

struct ValidateArgs {
  std::vector<fs::path> files;
};

// Each command reads its inputs, writes its outputs and records both in
// `record`. Errors are pedmotion::Error with file context in the message.
void cmd_synth(const SynthArgs& a, const Common& c, RunRecord& record);
void cmd_filter(const FilterArgs& a, const Common& c, RunRecord& record);
void cmd_reconstruct(const ReconstructArgs& a, const Common& c, RunRecord& record);
void cmd_retarget(const RetargetArgs& a, const Common& c, RunRecord& record);
void cmd_generate(const GenerateArgs& a, const Common& c, RunRecord& record);
void cmd_simulate(const SimulateArgs& a, const Common& c, RunRecord& record);
void cmd_evaluate(const EvaluateArgs& a, const Common& c, RunRecord& record);
void cmd_stats(const StatsArgs& a, const Common& c, RunRecord& record);
void cmd_plot(const PlotArgs& a, const Common& c, RunRecord& record);
/// Prints "<path>: <format> ok" per file; throws on the first invalid one.
void cmd_validate(const ValidateArgs& a, RunRecord& record);
void cmd_planner_serve(const std::string& planner);

}  // namespace pedmotion::cli
