#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedmotion/scenario_types.hpp"

namespace pedmotion {

/// Logistic probability of an MAIS 3+ injury at impact speed `v` (m/s).
/// Throws InvalidInput for negative or non-finite speeds.
double p_mais3(double v);

std::size_t count_events(const ScenarioLog& log, EventKind kind);

/// Collision events per kilometre. Throws InvalidInput for distance <= 0.
double collisions_per_km(const ScenarioLog& log, double distance_km);

struct Interval {
  double begin = 0.0;
  double end = 0.0;
};

/// Crossing intervals per pedestrian; an open crossing ends at the run end.
std::vector<Interval> crossing_intervals(const ScenarioLog& log);

inline constexpr double kFpbrWindowBefore = 1.0;
inline constexpr double kFpbrWindowAfter = 3.0;

struct BrakeAssociation {
  std::size_t braking_events = 0;
  std::size_t false_positives = 0;
};

/// A braking event is a false positive iff no crossing interval overlaps the
/// closed window [t - 1 s, t + 3 s] around its start.
BrakeAssociation associate_braking(const ScenarioLog& log);

/// False-positive braking rate; 0 when there are no braking events.
double fpbr(const ScenarioLog& log);

/// Average displacement error between predicted and ground-truth positions,
/// averaged over the horizon of each prediction, then over each pedestrian's
/// predictions, then over pedestrians. Horizon steps past the end of the log
/// are skipped. Empty when the log has no usable predictions. Throws
/// Validation for predictions of unknown pedestrians.
std::optional<double> ade(const ScenarioLog& log);

struct RunMetrics {
  std::string scenario;
  std::string planner;
  std::uint64_t seed = 0;
  double distance_km = 0.0;
  std::size_t collisions = 0;
  std::size_t braking_events = 0;
  std::size_t false_positive_brakes = 0;
  std::size_t crossings = 0;
  std::vector<double> impact_speeds;
  double collisions_per_km = 0.0;
  double mean_pmais3 = 0.0;
  double fpbr = 0.0;
  std::optional<double> ade;
};

struct MetricsReport {
  double collisions_per_km = 0.0;
  double mean_pmais3 = 0.0;
  double fpbr = 0.0;
  std::optional<double> ade;
  double distance_km = 0.0;
  std::size_t collisions = 0;
  std::size_t braking_events = 0;
  std::size_t crossings = 0;
  std::vector<RunMetrics> runs;  // sorted by (scenario, planner, seed)
};

RunMetrics run_metrics(const ScenarioLog& log);

/// Aggregates runs: collisions/km is total collisions over total distance,
/// pMAIS3+ the mean over every collision, FPBR pooled over braking events and
/// ADE the distance-weighted mean over runs that have predictions. Runs are
/// sorted before summation so the result does not depend on input order.
/// Throws Validation if the lists differ in length or a log does not belong
/// to its spec.
MetricsReport report(std::span<const ScenarioLog> logs, std::span<const ScenarioSpec> specs);

/// Table row layout: agent, Collisions/km, pMAIS3+ (%), FPBR, ADE.
std::string report_csv(const MetricsReport& report, const std::string& agent);

}  // namespace pedmotion
