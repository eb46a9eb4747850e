#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pedmotion/filterpipe.hpp"
#include "pedmotion/metrics.hpp"
#include "pedmotion/motion.hpp"
#include "pedmotion/scenario_types.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion {

using Json = nlohmann::ordered_json;

/// Canonical document text: objects one member per line, arrays of arrays or
/// objects one element per line, everything else inline; floats printed with
/// 17 significant digits; trailing newline.
std::string dump_canonical(const Json& doc);
/// One compact line without the trailing newline.
std::string dump_line(const Json& doc);
/// Throws Parse with `what` in the message on malformed JSON.
Json parse_json(std::string_view text, std::string_view what);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Document kinds. Every writer emits the canonical form; every reader
// validates the type invariants and throws Parse (schema) or Validation
// (invariant) errors that name the offending field and frame.

std::string write_motion(const MotionSequence& seq);
MotionSequence read_motion(std::string_view text);

std::string write_clip(const RetargetedClip& clip);
RetargetedClip read_clip(std::string_view text);

std::string write_skeleton(const SkeletonMap& map);
SkeletonMap read_skeleton(std::string_view text);

std::string write_scenario(const ScenarioSpec& spec);
ScenarioSpec read_scenario(std::string_view text);

/// NDJSON: header line, event lines, track lines, prediction lines, summary line.
std::string write_log(const ScenarioLog& log);
ScenarioLog read_log(std::string_view text);

struct TrajectoryDocument {
  GlobalTrajectory trajectory;
  BehaviorClass behavior = BehaviorClass::NotCrossing;
  double forward_displacement = 0.0;
};
std::string write_trajectory(const TrajectoryDocument& doc);
TrajectoryDocument read_trajectory(std::string_view text);

std::string write_filter_config(const FilterConfig& config);
FilterConfig read_filter_config(std::string_view text);

/// NDJSON, one decision per line.
std::string write_filter_report(const std::vector<FilterDecision>& report);
std::vector<FilterDecision> read_filter_report(std::string_view text);

struct TagRecord {
  std::string id;
  TagSet tags;
};
std::string write_tags(const std::vector<TagRecord>& records);
std::vector<TagRecord> read_tags(std::string_view text);

struct StatsDocument {
  TrajectoryStats trajectory;
  TagDistribution tags;
};
std::string write_stats(const StatsDocument& stats);
StatsDocument read_stats(std::string_view text);

std::string write_report(const MetricsReport& report);
MetricsReport read_report(std::string_view text);

/// Kind tag stored in the "format" member of each JSON document, or the
/// header "type" of an NDJSON log.
std::string document_format(std::string_view text);

/// Re-serializes `text` according to its detected format.
std::string canonicalize(std::string_view text);

}  // namespace pedmotion
