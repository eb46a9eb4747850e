#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "pedmotion/filterpipe.hpp"
#include "pedmotion/metrics.hpp"
#include "pedmotion/motion_io.hpp"
#include "pedmotion/planner.hpp"
#include "pedmotion/plot.hpp"
#include "pedmotion/retarget.hpp"
#include "pedmotion/scenario.hpp"
#include "pedmotion/synth.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion::cli {

namespace {

constexpr std::string_view kMotionExt = ".motion.json";
constexpr std::string_view kClipExt = ".clip.json";
constexpr std::string_view kTrajectoryExt = ".trajectory.json";
constexpr std::string_view kScenarioExt = ".scenario.json";
constexpr std::string_view kLogExt = ".log.ndjson";

bool has_suffix(const std::string& name, std::string_view suffix) {
  return name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Files under `path` ending in `suffix`, sorted by name; `path` may also be
/// a single file.
std::vector<fs::path> list_inputs(const fs::path& path, std::string_view suffix) {
  if (fs::is_regular_file(path)) return {path};
  if (!fs::is_directory(path)) fail(ErrorCode::InvalidInput, fmt::format("'{}' does not exist", path.string()));
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && has_suffix(entry.path().filename().string(), suffix)) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) fail(ErrorCode::InvalidInput, fmt::format("no *{} files in '{}'", suffix, path.string()));
  return out;
}

/// Re-throws library errors with the file name in front.
template <typename Fn>
auto in_file(const fs::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers. The error from the
/// lowest failing index is re-thrown so failures do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Loaded {
  fs::path path;
  std::string text;
};

std::vector<Loaded> load_all(const std::vector<fs::path>& paths, RunRecord& record) {
  std::vector<Loaded> out;
  for (const fs::path& p : paths) {
    out.push_back({p, read_file(p)});
    record.input(p, out.back().text);
  }
  return out;
}

template <typename T, typename Read>
std::vector<T> parse_all(const std::vector<Loaded>& files, int threads, Read read) {
  std::vector<T> out(files.size());
  parallel_for(files.size(), threads, [&](std::size_t i) { out[i] = in_file(files[i].path, [&] { return read(files[i].text); }); });
  return out;
}

void emit(const fs::path& path, const std::string& text, RunRecord& record) {
  write_file(path, text);
  record.output(path, text);
}

void note(const Common& c, const std::string& msg) {
  if (c.verbose) fmt::print(stderr, "pedmotion: {}\n", msg);
}

ClipLibrary load_clips(const fs::path& dir, int threads, RunRecord& record) {
  const auto files = load_all(list_inputs(dir, kClipExt), record);
  ClipLibrary clips;
  for (RetargetedClip& clip : parse_all<RetargetedClip>(files, threads, read_clip)) {
    const std::string id = clip.id;
    if (!clips.emplace(id, std::move(clip)).second) fail(ErrorCode::Validation, fmt::format("duplicate clip id '{}'", id));
  }
  return clips;
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> argv;
  for (std::string word; in >> word;) argv.push_back(word);
  if (argv.empty()) fail(ErrorCode::InvalidInput, "--planner-cmd is empty");
  return argv;
}

}  // namespace

void cmd_synth(const SynthArgs& a, const Common& c, RunRecord& record) {
  if (a.count <= 0) fail(ErrorCode::InvalidInput, "--count must be positive");
  const auto corpus = synth_corpus(a.count, a.seed, a.joints);
  std::vector<std::string> texts(corpus.size());
  parallel_for(corpus.size(), c.threads, [&](std::size_t i) { texts[i] = write_motion(corpus[i]); });
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    emit(a.out / (corpus[i].id + std::string(kMotionExt)), texts[i], record);
  }
  note(c, fmt::format("wrote {} motions to {}", corpus.size(), a.out.string()));
}

void cmd_filter(const FilterArgs& a, const Common& c, RunRecord& record) {
  FilterConfig config = FilterConfig::defaults();
  if (!a.keywords.empty()) {
    const std::string text = read_file(a.keywords);
    record.input(a.keywords, text);
    config = in_file(a.keywords, [&] { return read_filter_config(text); });
  }
  const auto files = load_all(list_inputs(a.in, kMotionExt), record);
  const auto corpus = parse_all<MotionSequence>(files, c.threads, read_motion);
  const FilterResult result = keyword_filter(corpus, config.keywords);

  std::vector<std::string> texts(result.accepted.size());
  parallel_for(result.accepted.size(), c.threads, [&](std::size_t i) {
    texts[i] = write_motion(resample(result.accepted[i], a.fps));
  });
  std::vector<TagRecord> tags;
  for (std::size_t i = 0; i < result.accepted.size(); ++i) {
    const MotionSequence& m = result.accepted[i];
    emit(a.out / (m.id + std::string(kMotionExt)), texts[i], record);
    tags.push_back({m.id, tag_behavior(m.annotation, config)});
  }
  emit(a.out / "filter_report.ndjson", write_filter_report(result.report), record);
  emit(a.out / "tags.json", write_tags(tags), record);
  note(c, fmt::format("accepted {} of {} motions", result.accepted.size(), corpus.size()));
}

void cmd_reconstruct(const ReconstructArgs& a, const Common& c, RunRecord& record) {
  const ClassThresholds th{a.attempt_min, a.cross_min, Vec3::UnitZ()};
  th.validate();
  const auto files = load_all(list_inputs(a.in, kMotionExt), record);
  std::vector<std::string> ids(files.size());
  std::vector<std::string> texts(files.size());
  parallel_for(files.size(), c.threads, [&](std::size_t i) {
    in_file(files[i].path, [&] {
      TrajectoryDocument doc;
      doc.trajectory = reconstruct_global(read_motion(files[i].text));
      doc.behavior = classify(doc.trajectory, th);
      doc.forward_displacement = forward_displacement(doc.trajectory, th.forward_axis);
      ids[i] = doc.trajectory.id;
      texts[i] = write_trajectory(doc);
    });
  });
  for (std::size_t i = 0; i < files.size(); ++i) emit(a.out / (ids[i] + std::string(kTrajectoryExt)), texts[i], record);
  note(c, fmt::format("reconstructed {} trajectories", files.size()));
}

void cmd_retarget(const RetargetArgs& a, const Common& c, RunRecord& record) {
  SkeletonMap map = SkeletonMap::carla_like();
  if (!a.skeleton.empty()) {
    const std::string text = read_file(a.skeleton);
    record.input(a.skeleton, text);
    map = in_file(a.skeleton, [&] { return read_skeleton(text); });
  }
  const auto files = load_all(list_inputs(a.in, kMotionExt), record);
  std::vector<std::string> ids(files.size());
  std::vector<std::string> texts(files.size());
  std::atomic<std::size_t> flagged{0};
  parallel_for(files.size(), c.threads, [&](std::size_t i) {
    in_file(files[i].path, [&] {
      const RetargetedClip clip = retarget_clip(read_motion(files[i].text), map);
      flagged += static_cast<std::size_t>(
          std::count_if(clip.frames.begin(), clip.frames.end(), [](const ClipFrame& f) { return f.gimbal_locked; }));
      ids[i] = clip.id;
      texts[i] = write_clip(clip);
    });
  });
  for (std::size_t i = 0; i < files.size(); ++i) emit(a.out / (ids[i] + std::string(kClipExt)), texts[i], record);
  note(c, fmt::format("retargeted {} clips, {} gimbal-flagged frames", files.size(), flagged.load()));
}

void cmd_generate(const GenerateArgs& a, const Common& c, RunRecord& record) {
  const ClipLibrary clips = load_clips(a.clips, c.threads, record);
  GeneratorOptions opts;
  opts.scenarios = a.scenarios;
  opts.interactive = a.interactive;
  opts.ambient = a.ambient;
  opts.vehicles = a.vehicles;
  opts.obstacles = a.obstacles;
  opts.route_length = a.route_length;
  opts.planner = a.planner;
  const auto specs = generate_scenarios(clips, opts, a.seed);
  for (const ScenarioSpec& s : specs) emit(a.out / (s.id + std::string(kScenarioExt)), write_scenario(s), record);
  note(c, fmt::format("generated {} scenarios", specs.size()));
}

void cmd_simulate(const SimulateArgs& a, const Common& c, RunRecord& record) {
  if (!a.seed) fail(ErrorCode::InvalidInput, "simulate requires --seed");
  std::vector<fs::path> paths;
  for (const fs::path& p : a.scenarios) {
    for (fs::path& f : list_inputs(p, kScenarioExt)) paths.push_back(std::move(f));
  }
  const auto files = load_all(paths, record);
  std::vector<ScenarioSpec> specs = parse_all<ScenarioSpec>(files, 1, read_scenario);
  // The run seed replaces the seed stored in each scenario; scenario i gets seed + i.
  for (std::size_t i = 0; i < specs.size(); ++i) specs[i].seed = *a.seed + i;
  const ClipLibrary clips = load_clips(a.clips, c.threads, record);
  if (!a.planner.empty()) make_planner(a.planner);  // reject unknown ids before any run starts
  SimOptions options;
  options.planner_budget = a.planner_budget;

  std::vector<std::string> logs(specs.size());
  parallel_for(specs.size(), std::max(a.parallel_runs, 1), [&](std::size_t i) {
    std::unique_ptr<Planner> planner;
    if (!a.planner_cmd.empty()) {
      planner = std::make_unique<StdioPlanner>(split_command(a.planner_cmd));
    } else {
      planner = make_planner(a.planner.empty() ? specs[i].ego.planner : a.planner);
    }
    logs[i] = in_file(files[i].path, [&] { return write_log(run(specs[i], clips, *planner, options)); });
  });
  for (std::size_t i = 0; i < specs.size(); ++i) {
    emit(a.out / (specs[i].id + std::string(kScenarioExt)), write_scenario(specs[i]), record);
    emit(a.out / (specs[i].id + std::string(kLogExt)), logs[i], record);
  }
  note(c, fmt::format("simulated {} scenarios", specs.size()));
}

void cmd_evaluate(const EvaluateArgs& a, const Common& c, RunRecord& record) {
  const auto log_files = load_all(list_inputs(a.logs, kLogExt), record);
  const auto logs = parse_all<ScenarioLog>(log_files, c.threads, read_log);
  const auto spec_files = load_all(list_inputs(a.scenarios, kScenarioExt), record);
  std::map<std::string, ScenarioSpec> by_id;
  for (ScenarioSpec& s : parse_all<ScenarioSpec>(spec_files, c.threads, read_scenario)) {
    const std::string id = s.id;
    by_id.emplace(id, std::move(s));
  }
  std::vector<ScenarioSpec> specs;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto it = by_id.find(logs[i].header.scenario);
    if (it == by_id.end()) {
      fail(ErrorCode::Validation,
           fmt::format("{}: no scenario '{}' in {}", log_files[i].path.string(), logs[i].header.scenario,
                       a.scenarios.string()));
    }
    specs.push_back(it->second);
  }
  const MetricsReport r = report(logs, specs);
  emit(a.out, write_report(r), record);
  if (!a.csv.empty()) {
    std::string agent = a.agent;
    if (agent.empty()) {
      std::set<std::string> planners;
      for (const ScenarioLog& l : logs) planners.insert(l.header.planner);
      agent = planners.size() == 1 ? *planners.begin() : "mixed";
    }
    emit(a.csv, report_csv(r, agent), record);
  }
  note(c, fmt::format("{} runs, {:.4f} collisions/km", r.runs.size(), r.collisions_per_km));
}

void cmd_stats(const StatsArgs& a, const Common& c, RunRecord& record) {
  const auto files = load_all(list_inputs(a.trajectories, kTrajectoryExt), record);
  const auto docs = parse_all<TrajectoryDocument>(files, c.threads, read_trajectory);
  const std::string tag_text = read_file(a.tags);
  record.input(a.tags, tag_text);
  const auto tags = in_file(a.tags, [&] { return read_tags(tag_text); });
  std::map<std::string, TagSet> tag_by_id;
  for (const TagRecord& t : tags) tag_by_id[t.id] = t.tags;

  std::vector<std::pair<GlobalTrajectory, BehaviorClass>> trajs;
  std::vector<std::pair<TagSet, BehaviorClass>> tagged;
  std::size_t untagged = 0;
  for (const TrajectoryDocument& d : docs) {
    trajs.emplace_back(d.trajectory, d.behavior);
    if (const auto it = tag_by_id.find(d.trajectory.id); it != tag_by_id.end()) {
      tagged.emplace_back(it->second, d.behavior);
    } else {
      ++untagged;
    }
  }
  StatsDocument stats{class_stats(trajs, a.samples), tag_distribution(tagged)};
  if (untagged > 0) stats.trajectory.warnings.push_back(fmt::format("{} trajectories have no tag record", untagged));
  emit(a.out, write_stats(stats), record);
  note(c, fmt::format("stats over {} trajectories", docs.size()));
}

void cmd_plot(const PlotArgs& a, const Common& c, RunRecord& record) {
  if (a.stats.empty() && a.report.empty()) fail(ErrorCode::InvalidInput, "plot needs --stats or --report");
  if (!a.stats.empty()) {
    const std::string text = read_file(a.stats);
    record.input(a.stats, text);
    const StatsDocument stats = in_file(a.stats, [&] { return read_stats(text); });
    emit(a.out / "tag_distribution.svg", plot_tag_distribution(stats.tags), record);
    emit(a.out / "class_curves.svg", plot_class_curves(stats.trajectory), record);
  }
  if (!a.report.empty()) {
    const std::string text = read_file(a.report);
    record.input(a.report, text);
    const MetricsReport r = in_file(a.report, [&] { return read_report(text); });
    emit(a.out / "report.svg", plot_report(r), record);
  }
  note(c, fmt::format("charts written to {}", a.out.string()));
}

void cmd_validate(const ValidateArgs& a, RunRecord& record) {
  for (const fs::path& p : a.files) {
    const std::string text = read_file(p);
    record.input(p, text);
    const std::string format = in_file(p, [&] { return document_format(text); });
    const std::string canonical = in_file(p, [&] { return canonicalize(text); });
    fmt::print("{}: {} ok{}\n", p.string(), format, canonical == text ? "" : " (not in canonical form)");
  }
}

void cmd_planner_serve(const std::string& planner) {
  const auto p = make_planner(planner);
  serve_stdio(*p, std::cin, std::cout);
}

}  // namespace pedmotion::cli
