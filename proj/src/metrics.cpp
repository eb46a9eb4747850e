#include "pedmotion/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

double p_mais3(double v) {
  if (!std::isfinite(v) || v < 0.0) fail(ErrorCode::InvalidInput, fmt::format("impact speed {} is invalid", v));
  return 1.0 / (1.0 + std::exp(3.164 - 0.288 * v));
}

std::size_t count_events(const ScenarioLog& log, EventKind kind) {
  return static_cast<std::size_t>(
      std::count_if(log.events.begin(), log.events.end(), [&](const Event& e) { return e.kind == kind; }));
}

double collisions_per_km(const ScenarioLog& log, double distance_km) {
  if (!(distance_km > 0.0)) fail(ErrorCode::InvalidInput, "distance must be positive");
  return static_cast<double>(count_events(log, EventKind::Collision)) / distance_km;
}

namespace {

double run_end_time(const ScenarioLog& log) {
  double end = log.summary.duration_s;
  for (const Event& e : log.events) end = std::max(end, e.t);
  return end;
}

}  // namespace

std::vector<Interval> crossing_intervals(const ScenarioLog& log) {
  std::map<std::string, double> open;
  std::vector<Interval> out;
  for (const Event& e : log.events) {
    if (e.agents.empty()) continue;
    const std::string& ped = e.agents.front();
    if (e.kind == EventKind::CrossingEnter) {
      open.emplace(ped, e.t);
    } else if (e.kind == EventKind::CrossingExit) {
      if (const auto it = open.find(ped); it != open.end()) {
        out.push_back({it->second, e.t});
        open.erase(it);
      }
    }
  }
  const double end = run_end_time(log);
  for (const auto& [ped, begin] : open) out.push_back({begin, end});
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end < b.end;
  });
  return out;
}

BrakeAssociation associate_braking(const ScenarioLog& log) {
  const std::vector<Interval> crossings = crossing_intervals(log);
  BrakeAssociation out;
  for (const Event& e : log.events) {
    if (e.kind != EventKind::BrakeStart) continue;
    ++out.braking_events;
    const double lo = e.t - kFpbrWindowBefore;
    const double hi = e.t + kFpbrWindowAfter;
    const bool explained = std::any_of(crossings.begin(), crossings.end(),
                                       [&](const Interval& c) { return c.begin <= hi && c.end >= lo; });
    if (!explained) ++out.false_positives;
  }
  return out;
}

double fpbr(const ScenarioLog& log) {
  const BrakeAssociation a = associate_braking(log);
  return a.braking_events == 0 ? 0.0
                               : static_cast<double>(a.false_positives) / static_cast<double>(a.braking_events);
}

std::optional<double> ade(const ScenarioLog& log) {
  std::map<int, std::map<std::string, Vec2>> truth;
  std::set<std::string> known;
  for (const TrackSample& s : log.tracks) {
    auto& at = truth[s.tick];
    for (const PedestrianSample& p : s.pedestrians) {
      at[p.id] = p.position;
      known.insert(p.id);
    }
  }
  std::map<std::string, std::pair<double, std::size_t>> per_ped;
  for (const Prediction& pred : log.predictions) {
    if (!known.count(pred.pedestrian)) {
      fail(ErrorCode::Validation, fmt::format("prediction for unknown pedestrian '{}'", pred.pedestrian));
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t h = 0; h < pred.positions.size(); ++h) {
      const auto tick = truth.find(pred.tick + static_cast<int>(h) + 1);
      if (tick == truth.end()) continue;
      const auto gt = tick->second.find(pred.pedestrian);
      if (gt == tick->second.end()) continue;
      sum += (pred.positions[h] - gt->second).norm();
      ++n;
    }
    if (n == 0) continue;
    auto& acc = per_ped[pred.pedestrian];
    acc.first += sum / static_cast<double>(n);
    ++acc.second;
  }
  if (per_ped.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [id, acc] : per_ped) total += acc.first / static_cast<double>(acc.second);
  return total / static_cast<double>(per_ped.size());
}

RunMetrics run_metrics(const ScenarioLog& log) {
  RunMetrics m;
  m.scenario = log.header.scenario;
  m.planner = log.header.planner;
  m.seed = log.header.seed;
  m.distance_km = log.summary.distance_m / 1000.0;
  for (const Event& e : log.events) {
    if (e.kind == EventKind::Collision) {
      ++m.collisions;
      m.impact_speeds.push_back(e.impact_speed.value_or(0.0));
    } else if (e.kind == EventKind::CrossingEnter) {
      ++m.crossings;
    }
  }
  // A run that never moved reports zero rather than dividing by zero.
  m.collisions_per_km = m.distance_km > 0.0 ? static_cast<double>(m.collisions) / m.distance_km : 0.0;
  if (!m.impact_speeds.empty()) {
    double sum = 0.0;
    for (double v : m.impact_speeds) sum += p_mais3(v);
    m.mean_pmais3 = sum / static_cast<double>(m.impact_speeds.size());
  }
  const BrakeAssociation brakes = associate_braking(log);
  m.braking_events = brakes.braking_events;
  m.false_positive_brakes = brakes.false_positives;
  m.fpbr = brakes.braking_events == 0
               ? 0.0
               : static_cast<double>(brakes.false_positives) / static_cast<double>(brakes.braking_events);
  m.ade = ade(log);
  return m;
}

MetricsReport report(std::span<const ScenarioLog> logs, std::span<const ScenarioSpec> specs) {
  if (logs.size() != specs.size()) {
    fail(ErrorCode::Validation, fmt::format("{} logs for {} scenarios", logs.size(), specs.size()));
  }
  MetricsReport r;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (logs[i].header.scenario != specs[i].id || logs[i].header.seed != specs[i].seed) {
      fail(ErrorCode::Validation, fmt::format("log '{}' (seed {}) does not match scenario '{}' (seed {})",
                                              logs[i].header.scenario, logs[i].header.seed, specs[i].id,
                                              specs[i].seed));
    }
    r.runs.push_back(run_metrics(logs[i]));
  }
  std::sort(r.runs.begin(), r.runs.end(), [](const RunMetrics& a, const RunMetrics& b) {
    return std::tie(a.scenario, a.planner, a.seed) < std::tie(b.scenario, b.planner, b.seed);
  });

  double pmais_sum = 0.0;
  std::size_t impacts = 0;
  std::size_t false_positives = 0;
  double ade_weighted = 0.0;
  double ade_weight = 0.0;
  double ade_plain = 0.0;
  std::size_t ade_runs = 0;
  for (const RunMetrics& m : r.runs) {
    r.distance_km += m.distance_km;
    r.collisions += m.collisions;
    r.braking_events += m.braking_events;
    r.crossings += m.crossings;
    false_positives += m.false_positive_brakes;
    for (double v : m.impact_speeds) {
      pmais_sum += p_mais3(v);
      ++impacts;
    }
    if (m.ade) {
      ade_weighted += *m.ade * m.distance_km;
      ade_weight += m.distance_km;
      ade_plain += *m.ade;
      ++ade_runs;
    }
  }
  r.collisions_per_km = r.distance_km > 0.0 ? static_cast<double>(r.collisions) / r.distance_km : 0.0;
  r.mean_pmais3 = impacts == 0 ? 0.0 : pmais_sum / static_cast<double>(impacts);
  r.fpbr = r.braking_events == 0 ? 0.0 : static_cast<double>(false_positives) / static_cast<double>(r.braking_events);
  if (ade_runs > 0) r.ade = ade_weight > 0.0 ? ade_weighted / ade_weight : ade_plain / static_cast<double>(ade_runs);
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string report_csv(const MetricsReport& report, const std::string& agent) {
  std::string out = "Agent,Collisions/km,pMAIS3+ (%),FPBR,ADE\n";
  const std::string ade = report.ade ? fmt::format("{:.4f}", *report.ade) : "-";
  out += fmt::format("{},{:.4f},{:.2f},{:.4f},{}\n", csv_field(agent), report.collisions_per_km, 100.0 * report.mean_pmais3,
                     report.fpbr, ade);
  return out;
}

}  // namespace pedmotion
