#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "pedmotion/error.hpp"

#ifndef PEDMOTION_VERSION
#define PEDMOTION_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace pedmotion;
using namespace pedmotion::cli;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitProcessing = 2;

// Default config file: $PEDMOTION_CONFIG_DIR/pedmotion.toml when the variable is set.
std::string default_config_file() {
  const char* dir = std::getenv("PEDMOTION_CONFIG_DIR");
  if (dir == nullptr || *dir == '\0') return "";
  const fs::path p = fs::path(dir) / "pedmotion.toml";
  return fs::exists(p) ? p.string() : "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pedestrian motion toolkit: retargeting, scenario simulation and metrics", "pedmotion"};
  app.set_version_flag("--version", PEDMOTION_VERSION);
  app.require_subcommand(1);
  app.set_config("--config", default_config_file(), "TOML/INI config file; flags override its values");

  Common common;
  app.add_option("--threads,-j", common.threads, "Worker threads for per-file stages")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", common.verbose, "Progress messages on stderr");
  app.add_option("--manifest", common.manifest, "Run manifest (NDJSON, appended); default <output>/manifest.ndjson");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic motion corpus");
  c_synth->add_option("--out,-o", synth.out, "Output directory")->required();
  c_synth->add_option("--count,-n", synth.count, "Number of motions")->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Corpus seed")->capture_default_str();
  c_synth->add_option("--joints", synth.joints, "Source joints per frame")->capture_default_str();

  FilterArgs filter;
  auto* c_filter = app.add_subcommand("filter", "Keyword-filter motions, downsample them and tag behaviors");
  c_filter->add_option("--in,-i", filter.in, "Motion file or directory")->required();
  c_filter->add_option("--out,-o", filter.out, "Output directory")->required();
  c_filter->add_option("--keywords", filter.keywords, "Filter config document (keywords and tag categories)");
  c_filter->add_option("--fps", filter.fps, "Output frame rate")->capture_default_str();

  ReconstructArgs recon;
  auto* c_recon = app.add_subcommand("reconstruct", "Integrate root velocities into global trajectories");
  c_recon->add_option("--in,-i", recon.in, "Motion file or directory")->required();
  c_recon->add_option("--out,-o", recon.out, "Output directory")->required();
  c_recon->add_option("--attempt-min", recon.attempt_min, "Forward displacement (m) for Attempting")
      ->capture_default_str();
  c_recon->add_option("--cross-min", recon.cross_min, "Forward displacement (m) for Crossing")->capture_default_str();

  RetargetArgs retarget;
  auto* c_retarget = app.add_subcommand("retarget", "Convert motions to target-skeleton Euler clips");
  c_retarget->add_option("--in,-i", retarget.in, "Motion file or directory")->required();
  c_retarget->add_option("--out,-o", retarget.out, "Output directory")->required();
  c_retarget->add_option("--skeleton", retarget.skeleton, "Skeleton map document");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Build scenarios from a clip library");
  c_gen->add_option("--clips", gen.clips, "Clip directory")->required();
  c_gen->add_option("--out,-o", gen.out, "Output directory")->required();
  c_gen->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  c_gen->add_option("--scenarios", gen.scenarios)->capture_default_str();
  c_gen->add_option("--interactive", gen.interactive)->capture_default_str();
  c_gen->add_option("--ambient", gen.ambient)->capture_default_str();
  c_gen->add_option("--vehicles", gen.vehicles)->capture_default_str();
  c_gen->add_option("--obstacles", gen.obstacles)->capture_default_str();
  c_gen->add_option("--route-length", gen.route_length, "Route length (m)")->capture_default_str();
  c_gen->add_option("--planner", gen.planner, "Planner id stored in the scenarios")->capture_default_str();

  SimulateArgs sim;
  std::uint64_t sim_seed = 0;
  auto* c_sim = app.add_subcommand("simulate", "Run scenarios against a planner and write event logs");
  c_sim->add_option("--scenario,-s", sim.scenarios, "Scenario files or directories")->required();
  c_sim->add_option("--clips", sim.clips, "Clip directory")->required();
  c_sim->add_option("--out,-o", sim.out, "Output directory")->required();
  c_sim->add_option("--seed", sim_seed, "Run seed (scenario i uses seed + i)")->required();
  auto* o_planner = c_sim->add_option("--planner", sim.planner, "Built-in planner: constant_speed | reactive_brake");
  c_sim->add_option("--planner-cmd", sim.planner_cmd, "External planner command speaking the stdio protocol")
      ->excludes(o_planner);
  c_sim->add_option("--parallel-runs", sim.parallel_runs, "Scenarios simulated concurrently")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_sim->add_option("--planner-budget", sim.planner_budget, "Wall-clock seconds per planner call, 0 disables")
      ->capture_default_str();

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Score logs: collisions/km, pMAIS3+, FPBR, ADE");
  c_eval->add_option("--logs", eval.logs, "Log file or directory")->required();
  c_eval->add_option("--scenarios", eval.scenarios, "Scenario file or directory")->required();
  c_eval->add_option("--out,-o", eval.out, "Report document")->required();
  c_eval->add_option("--csv", eval.csv, "Also write a one-row CSV summary");
  c_eval->add_option("--agent", eval.agent, "Agent name in the CSV (default: the planner id)");

  StatsArgs stats;
  auto* c_stats = app.add_subcommand("stats", "Per-class displacement curves and tag distribution");
  c_stats->add_option("--trajectories", stats.trajectories, "Trajectory file or directory")->required();
  c_stats->add_option("--tags", stats.tags, "Tags document from `filter`")->required();
  c_stats->add_option("--out,-o", stats.out, "Stats document")->required();
  c_stats->add_option("--samples", stats.samples, "Curve samples")->capture_default_str();

  PlotArgs plot;
  auto* c_plot = app.add_subcommand("plot", "SVG charts from a stats or report document");
  c_plot->add_option("--stats", plot.stats, "Stats document");
  c_plot->add_option("--report", plot.report, "Report document");
  c_plot->add_option("--out,-o", plot.out, "Output directory")->required();

  ValidateArgs validate;
  auto* c_validate = app.add_subcommand("validate", "Parse documents and check they are canonical");
  c_validate->add_option("files", validate.files, "Documents")->required();

  std::string serve_planner = "reactive_brake";
  auto* c_serve = app.add_subcommand("planner-serve", "Serve a built-in planner over stdin/stdout");
  c_serve->add_option("--planner", serve_planner)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  RunRecord record;
  std::optional<std::uint64_t> seed;
  fs::path manifest_dir;
  try {
    if (cmd == c_synth) {
      cmd_synth(synth, common, record);
      seed = synth.seed;
      manifest_dir = synth.out;
    } else if (cmd == c_filter) {
      cmd_filter(filter, common, record);
      manifest_dir = filter.out;
    } else if (cmd == c_recon) {
      cmd_reconstruct(recon, common, record);
      manifest_dir = recon.out;
    } else if (cmd == c_retarget) {
      cmd_retarget(retarget, common, record);
      manifest_dir = retarget.out;
    } else if (cmd == c_gen) {
      cmd_generate(gen, common, record);
      seed = gen.seed;
      manifest_dir = gen.out;
    } else if (cmd == c_sim) {
      sim.seed = sim_seed;
      cmd_simulate(sim, common, record);
      seed = sim_seed;
      manifest_dir = sim.out;
    } else if (cmd == c_eval) {
      cmd_evaluate(eval, common, record);
      manifest_dir = eval.out.parent_path();
    } else if (cmd == c_stats) {
      cmd_stats(stats, common, record);
      manifest_dir = stats.out.parent_path();
    } else if (cmd == c_plot) {
      cmd_plot(plot, common, record);
      manifest_dir = plot.out;
    } else if (cmd == c_validate) {
      cmd_validate(validate, record);
      return 0;
    } else if (cmd == c_serve) {
      cmd_planner_serve(serve_planner);
      return 0;
    }
    const fs::path manifest = common.manifest.empty() ? manifest_dir / "manifest.ndjson" : fs::path(common.manifest);
    append_manifest(manifest, record.manifest_line(name, app.config_to_str(true, false), seed));
  } catch (const Error& e) {
    fmt::print(stderr, "pedmotion {}: {} error: {}\n", name, to_string(e.code()), e.what());
    return e.is_input_error() ? kExitInput : kExitProcessing;
  } catch (const std::exception& e) {
    fmt::print(stderr, "pedmotion {}: {}\n", name, e.what());
    return kExitProcessing;
  }
  return 0;
}
