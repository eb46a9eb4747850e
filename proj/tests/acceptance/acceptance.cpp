// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes (including its runtime limit).

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "json.hpp"
#include "pedmotion/error.hpp"
#include "pedmotion/filterpipe.hpp"
#include "pedmotion/metrics.hpp"
#include "pedmotion/motion_io.hpp"
#include "pedmotion/planner.hpp"
#include "pedmotion/retarget.hpp"
#include "pedmotion/rotmath.hpp"
#include "pedmotion/scenario.hpp"
#include "pedmotion/trajectory.hpp"
#include "random_motion.hpp"
#include "scenes.hpp"

using namespace pedmotion;
namespace fs = std::filesystem;
using pedmotion::testing::random_axis_angle;
using pedmotion::testing::random_sequence;
using pedmotion::testing::random_sixd;
using pedmotion::testing::random_unit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  double limit_s;  // <= 0: no runtime limit
  std::function<Outcome()> run;
};

// Collects failures while letting a criterion run to completion.
struct Tally {
  bool ok = true;
  std::vector<std::string> notes;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (notes.size() < 5) notes.push_back(what);
    }
  }
  Outcome outcome(std::string summary) const {
    for (const std::string& n : notes) summary += "; FAILED: " + n;
    return {ok, summary};
  }
};

// --- independent oracles ----------------------------------------------------

Mat3 quat_exp(const Vec3& aa) {
  const double a = aa.norm();
  return a == 0.0 ? Mat3::Identity() : Eigen::Quaterniond(Eigen::AngleAxisd(a, aa / a)).toRotationMatrix();
}

Mat3 gram_schmidt(const SixD& s) {
  const Vec3 b1 = s.a1 / s.a1.norm();
  Vec3 b2 = s.a2 - b1.dot(s.a2) * b1;
  b2 /= b2.norm();
  Mat3 r;
  r << b1, b2, b1.cross(b2);
  return r;
}

Vec3 naive_position(const MotionSequence& seq, std::size_t t, const Vec3& origin) {
  Vec3 p = origin;
  for (std::size_t tau = 1; tau <= t; ++tau) p += gram_schmidt(seq.frames[tau].root_6d) * seq.frames[tau].root_vel;
  return p;
}

double max_diff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

// --- criteria ---------------------------------------------------------------

Outcome ac1_injury() {
  Tally t;
  const double p0 = p_mais3(0.0);
  const double p0_oracle = 1.0 / (1.0 + std::exp(3.164));
  const double half = p_mais3(3.164 / 0.288);
  t.require(std::abs(p0 - p0_oracle) <= 1e-9, fmt::format("p(0) = {:.10f}", p0));
  t.require(std::abs(p0 - 0.0405) < 5e-5, "p(0) not ~0.0405");
  t.require(std::abs(half - 0.5) <= 1e-9, fmt::format("p(3.164/0.288) = {:.12f}", half));
  t.require(std::abs(p_mais3(10.9861) - 0.5) <= 1e-5, "p(10.9861) != 0.5");
  double prev = -1.0;
  int grid = 0;
  for (int i = 0; i <= 3000; ++i) {
    const double p = p_mais3(0.01 * i);
    t.require(p > prev && p > 0.0 && p < 1.0, fmt::format("not strictly increasing at {} m/s", 0.01 * i));
    prev = p;
    ++grid;
  }
  return t.outcome(fmt::format("p(0)={:.10f} (direct evaluation), p(10.986)={:.12f}, monotone on {} grid points",
                               p0, half, grid));
}

Outcome ac2_rotations() {
  Tally t;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> angle(1e-6, std::numbers::pi - 1e-6);
  std::uniform_real_distribution<double> any(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t big_error = 0;
  std::size_t big_error_flagged = 0;
  std::size_t flagged = 0;
  double worst_free = 0.0;
  constexpr int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) {
    // axis-angle <-> matrix
    const Vec3 aa = random_unit(gen) * angle(gen);
    const Mat3 r = axis_angle_to_matrix(aa);
    t.require(max_diff(r, quat_exp(aa)) <= 1e-9, "exp map vs quaternion oracle");
    t.require((matrix_to_axis_angle(r) - aa).cwiseAbs().maxCoeff() <= 1e-9, "log(exp(w)) != w");
    t.require(max_diff(axis_angle_to_matrix(matrix_to_axis_angle(r)), r) <= 1e-9, "exp(log(R)) != R");

    // 6D -> matrix
    const Mat3 s = sixd_to_matrix(random_sixd(gen));
    t.require(max_diff(s.transpose() * s, Mat3::Identity()) <= 1e-9, "6D output not orthonormal");
    t.require(std::abs(s.determinant() - 1.0) <= 1e-9, "6D output det != 1");

    // Euler compose-back; one trial in ten is pushed to (or very near) the singularity.
    double pitch = std::asin(2.0 * unit(gen) - 1.0);
    if (i % 10 == 0) pitch = std::copysign(std::numbers::pi / 2.0 - 1e-7 * unit(gen), any(gen));
    const Mat3 e_in = rot_x(any(gen)) * rot_y(pitch) * rot_z(any(gen));
    const EulerResult e = matrix_to_euler_xyz(e_in);
    const double err = max_diff(euler_xyz_to_matrix(e.angles), e_in);
    if (e.gimbal_locked) {
      ++flagged;
      t.require(err <= 1e-6, fmt::format("flagged compose-back error {:.3g}", err));
    } else {
      worst_free = std::max(worst_free, err);
      t.require(err <= 1e-7, fmt::format("compose-back error {:.3g} away from gimbal lock", err));
    }
    if (err > 1e-6) {
      ++big_error;
      if (e.gimbal_locked) ++big_error_flagged;
    }
  }
  t.require(big_error == big_error_flagged, "unflagged frame with compose-back error > 1e-6");
  return t.outcome(fmt::format("{} trials; {} gimbal-flagged; worst unflagged compose-back {:.2g}; "
                               "{}/{} frames over 1e-6 flagged",
                               kTrials, flagged, worst_free, big_error_flagged, big_error));
}

Outcome ac3_trajectory() {
  Tally t;
  std::mt19937_64 gen(3033);
  std::uniform_int_distribution<std::size_t> len(2, 60);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const MotionSequence seq = random_sequence(gen, len(gen), 1);
    const Vec3 origin = random_unit(gen) * 3.0;
    const GlobalTrajectory traj = reconstruct_global(seq, origin);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      worst = std::max(worst, (traj.positions[i] - naive_position(seq, i, origin)).cwiseAbs().maxCoeff());
    }
  }
  t.require(worst <= 1e-9, fmt::format("oracle deviation {:.3g}", worst));

  double worst_eq = 0.0;
  double worst_add = 0.0;
  for (int k = 0; k < 100; ++k) {
    MotionSequence seq = random_sequence(gen, 40, 1);
    const GlobalTrajectory a = reconstruct_global(seq);
    const Mat3 q = quat_exp(random_axis_angle(gen));
    MotionSequence rotated = seq;
    for (MotionFrame& f : rotated.frames) f.root_6d = {q * f.root_6d.a1, q * f.root_6d.a2};
    const GlobalTrajectory b = reconstruct_global(rotated);
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst_eq = std::max(worst_eq, ((b.positions[i] - b.positions[0]) - q * (a.positions[i] - a.positions[0])).norm());
    }
    const std::size_t split = 1 + static_cast<std::size_t>(k % 38);
    MotionSequence tail = seq;
    tail.frames.erase(tail.frames.begin(), tail.frames.begin() + static_cast<std::ptrdiff_t>(split));
    const GlobalTrajectory part = reconstruct_global(tail, a.positions[split]);
    for (std::size_t i = 0; i < part.size(); ++i) {
      worst_add = std::max(worst_add, (part.positions[i] - a.positions[split + i]).cwiseAbs().maxCoeff());
    }
  }
  t.require(worst_eq <= 1e-9, fmt::format("equivariance deviation {:.3g}", worst_eq));
  t.require(worst_add <= 1e-12, fmt::format("additivity deviation {:.3g}", worst_add));
  return t.outcome(fmt::format("1000 sequences, max oracle deviation {:.2g}; 100 cases: equivariance {:.2g}, "
                               "additivity {:.2g}",
                               worst, worst_eq, worst_add));
}

Outcome ac4_retarget() {
  Tally t;
  const SkeletonMap map = SkeletonMap::carla_like();
  const Mat3& c = map.frame.matrix();
  std::mt19937_64 gen(4044);
  std::size_t checked = 0;
  std::size_t skipped = 0;
  double worst = 0.0;
  for (int clip = 0; clip < 100; ++clip) {
    const MotionSequence seq = random_sequence(gen, 50, kDefaultSourceJointCount);
    for (const MotionFrame& f : seq.frames) {
      const auto out = retarget_frame(f.joints, map);
      for (std::size_t j = 0; j < map.joints.size(); ++j) {
        if (out[j].gimbal_locked) {
          ++skipped;
          continue;
        }
        Mat3 merged = Mat3::Identity();
        for (int s : map.joints[j].sources) merged = merged * (c * quat_exp(f.joints[static_cast<std::size_t>(s)]) * c.transpose());
        const Mat3& rest = map.joints[j].rest;
        const Mat3 back = rest * euler_xyz_to_matrix(out[j].angles) * rest.transpose();
        worst = std::max(worst, max_diff(back, merged));
        ++checked;
      }
    }
  }
  t.require(worst <= 1e-6, fmt::format("inverse-pipeline error {:.3g}", worst));

  MotionSequence zero;
  zero.id = "zero";
  zero.fps = 20.0;
  zero.frames.resize(2);
  for (MotionFrame& f : zero.frames) f.joints.assign(kDefaultSourceJointCount, AxisAngle::Zero());
  const RetargetedClip clip = retarget_clip(zero, map);
  bool exact = true;
  for (const ClipFrame& f : clip.frames) {
    for (const EulerXYZ& e : f.joints) exact = exact && e.x == 0.0 && e.y == 0.0 && e.z == 0.0;
    exact = exact && f.root_position == clip.frames.front().root_position;
  }
  t.require(exact, "zero pose does not retarget to exact zeros");
  return t.outcome(fmt::format("100 clips x 50 frames: {} joint rotations within {:.2g} ({} flagged, skipped); "
                               "zero pose exact",
                               checked, worst, skipped));
}

// Contact time for the crossing scene from the geometry alone: ego center at
// x = 8t, half-length 2.25, half-width 1; pedestrian disc r = 0.3 at x = 30,
// idle until 1.3 s, blending until 1.8 s, then walking +y at 1.4 m/s.
double analytic_contact_tick_time() {
  using namespace pedmotion::testing;
  for (int k = 0; k < 2000; ++k) {
    const double t = 0.05 * k;
    const double ex = kSceneEgoSpeed * t;
    const double py = kScenePedY + kScenePedSpeed * std::max(0.0, t - 1.8);
    const double dx = std::max(0.0, std::abs(kScenePedX - ex) - 2.25);
    const double dy = std::max(0.0, std::abs(py) - 1.0);
    if (std::hypot(dx, dy) <= 0.3) return t;
  }
  return -1.0;
}

Outcome ac5_simulator() {
  using namespace pedmotion::testing;
  Tally t;
  const ClipLibrary clips = crossing_clips();
  ConstantSpeedPlanner cs;
  const ScenarioLog log = run(crossing_scene(), clips, cs);
  std::vector<Event> collisions;
  for (const Event& e : log.events) {
    if (e.kind == EventKind::Collision) collisions.push_back(e);
  }
  const double analytic_speed = std::hypot(kSceneEgoSpeed, kScenePedSpeed);
  const double analytic_t = analytic_contact_tick_time();
  t.require(collisions.size() == 1, fmt::format("{} collisions", collisions.size()));
  double impact = std::nan("");
  if (!collisions.empty()) {
    impact = collisions[0].impact_speed.value_or(std::nan(""));
    t.require(std::abs(impact - analytic_speed) <= 1e-6, fmt::format("impact {:.9f}", impact));
    t.require(std::abs(collisions[0].t - analytic_t) < 1e-9, fmt::format("contact at {} s", collisions[0].t));
  }

  ReactiveBrakePlanner rb;
  const ScenarioLog braked = run(crossing_scene("reactive_brake"), clips, rb);
  const auto rb_collisions = count_events(braked, EventKind::Collision);
  t.require(rb_collisions == 0, fmt::format("reactive brake: {} collisions", rb_collisions));

  ReactiveBrakePlanner rb2;
  t.require(write_log(braked) == write_log(run(crossing_scene("reactive_brake"), clips, rb2)),
            "seeded reruns differ");
  ConstantSpeedPlanner cs2;
  t.require(write_log(log) == write_log(run(crossing_scene(), clips, cs2)), "seeded reruns differ (constant speed)");
  return t.outcome(fmt::format("constant speed: {} collision at {:.2f} s, impact {:.9f} vs analytic {:.9f}; "
                               "reactive brake: {} collisions; reruns byte-identical",
                               collisions.size(), collisions.empty() ? -1.0 : collisions[0].t, impact, analytic_speed,
                               rb_collisions));
}

Event ev(double t, EventKind k, std::vector<std::string> agents = {"ego"}) {
  return {t, k, std::move(agents), std::nullopt, std::nullopt, ""};
}

ScenarioLog ade_fixture(double offset) {
  ScenarioLog log;
  log.header = {"ade", 1, 0.05, "fixture"};
  for (int k = 0; k <= 30; ++k) log.tracks.push_back({k, 0.05 * k, {{"p", Vec2(0.5 * k, 2.0), false}}});
  for (int k = 0; k < 30; k += 5) {
    Prediction pred{k, "p", {}};
    for (int h = 1; h <= 8; ++h) pred.positions.push_back(Vec2(0.5 * (k + h) + offset, 2.0));
    log.predictions.push_back(pred);
  }
  log.summary = {100.0, 1.5, true, "route_complete"};
  return log;
}

Outcome ac6_metrics() {
  Tally t;
  // Three braking events, one crossing: only the brake at 4.5 s has a crossing in [t-1, t+3].
  ScenarioLog fp;
  fp.events = {ev(0, EventKind::RunStart),           ev(4.5, EventKind::BrakeStart),
               ev(5.0, EventKind::CrossingEnter, {"p"}), ev(5.5, EventKind::BrakeEnd),
               ev(7.0, EventKind::CrossingExit, {"p"}),  ev(20.0, EventKind::BrakeStart),
               ev(21.0, EventKind::BrakeEnd),          ev(30.0, EventKind::BrakeStart),
               ev(31.0, EventKind::BrakeEnd),          ev(40.0, EventKind::RunEnd)};
  fp.summary = {400.0, 40.0, true, "route_complete"};
  const double f = fpbr(fp);
  t.require(f == 2.0 / 3.0, fmt::format("FPBR {}", f));

  const double ade0 = ade(ade_fixture(0.0)).value_or(-1.0);
  const double ade1 = ade(ade_fixture(1.0)).value_or(-1.0);
  t.require(ade0 == 0.0, fmt::format("ADE {}", ade0));
  t.require(ade1 == 1.0, fmt::format("ADE {}", ade1));

  ScenarioLog col;
  col.events = {ev(0, EventKind::RunStart), {1.0, EventKind::Collision, {"ego", "a"}, 3.0, std::nullopt, ""},
                {2.0, EventKind::Collision, {"ego", "b"}, 5.0, std::nullopt, ""}, ev(3.0, EventKind::RunEnd)};
  col.summary.distance_m = 500.0;
  const double cpk = collisions_per_km(col, 0.5);
  t.require(cpk == 4.0, fmt::format("collisions/km {}", cpk));
  t.require(run_metrics(col).collisions_per_km == 4.0, "run_metrics collisions/km");

  std::vector<ScenarioLog> logs;
  std::vector<ScenarioSpec> specs;
  std::mt19937_64 gen(6066);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    ScenarioLog log = ade_fixture(u(gen));
    log.header.scenario = fmt::format("s{}", i % 4);
    log.header.seed = static_cast<std::uint64_t>(i);
    log.events = {ev(0, EventKind::RunStart), {0.5 + u(gen), EventKind::Collision, {"ego", "p"}, 10.0 * u(gen), std::nullopt, ""},
                  ev(2.0, EventKind::BrakeStart), ev(3.0, EventKind::BrakeEnd), ev(9.0, EventKind::RunEnd)};
    log.summary.distance_m = 100.0 + 50.0 * u(gen);
    ScenarioSpec spec;
    spec.id = log.header.scenario;
    spec.seed = log.header.seed;
    logs.push_back(log);
    specs.push_back(spec);
  }
  const std::string reference = write_report(report(logs, specs));
  std::vector<std::size_t> order(logs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  int invariant = 0;
  for (int s = 0; s < 10; ++s) {
    std::shuffle(order.begin(), order.end(), gen);
    std::vector<ScenarioLog> l;
    std::vector<ScenarioSpec> sp;
    for (std::size_t i : order) {
      l.push_back(logs[i]);
      sp.push_back(specs[i]);
    }
    if (write_report(report(l, sp)) == reference) ++invariant;
  }
  t.require(invariant == 10, fmt::format("report changed under {} of 10 shuffles", 10 - invariant));
  return t.outcome(fmt::format("FPBR={} (2/3), ADE={} and {}, collisions/km={}, report identical under {}/10 shuffles",
                               f, ade0, ade1, cpk, invariant));
}

Outcome ac7_filter() {
  Tally t;
  const std::string dir = PEDMOTION_FIXTURE_DIR;
  std::vector<MotionSequence> corpus;
  {
    std::ifstream in(dir + "/annotations_200.ndjson");
    for (std::string line; std::getline(in, line);) {
      const auto j = nlohmann::json::parse(line);
      MotionSequence m;
      m.id = j.at("id").get<std::string>();
      m.annotation = j.at("annotation").get<std::string>();
      corpus.push_back(std::move(m));
    }
  }
  std::ifstream expected_in(dir + "/annotations_200.expected.json");
  const auto expected = nlohmann::json::parse(expected_in);
  const auto golden = expected.at("accepted").get<std::size_t>();
  t.require(corpus.size() == 200, fmt::format("fixture has {} items", corpus.size()));

  auto ids = [](const std::vector<MotionSequence>& v) {
    std::vector<std::string> out;
    for (const auto& m : v) out.push_back(m.id);
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto keywords = FilterConfig::defaults().keywords;
  const FilterResult once = keyword_filter(corpus, keywords);
  const FilterResult twice = keyword_filter(once.accepted, keywords);
  t.require(ids(once.accepted) == ids(twice.accepted), "filter not idempotent");
  t.require(once.accepted.size() == golden,
            fmt::format("accepted {} vs golden {}", once.accepted.size(), golden));

  std::vector<std::string> prefix;
  std::vector<std::string> previous;
  for (const std::string& k : keywords) {
    prefix.push_back(k);
    const auto now = ids(keyword_filter(corpus, prefix).accepted);
    t.require(std::includes(now.begin(), now.end(), previous.begin(), previous.end()),
              fmt::format("adding '{}' removed items", k));
    previous = now;
  }
  return t.outcome(fmt::format("accepted {}/200 (golden {}); idempotent; monotone over {} keyword prefixes. "
                               "Note: the 30,000 -> 5,108 reduction on the original private corpus is not reproducible",
                               once.accepted.size(), golden, keywords.size()));
}

#ifdef PEDMOTION_CLI_PATH
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = fmt::format("'{}' {} >> '{}' 2>&1", PEDMOTION_CLI_PATH, args, log.string());
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac8_end_to_end() {
  Tally t;
  const fs::path root = fs::temp_directory_path() / "pedmotion_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path log = root / "cli.log";
  const std::string r = root.string();
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"synth", fmt::format("synth -o {0}/corpus -n 100 --seed 1", r)},
      {"filter", fmt::format("filter -i {0}/corpus -o {0}/filtered", r)},
      {"reconstruct", fmt::format("reconstruct -i {0}/filtered -o {0}/trajectories", r)},
      {"retarget", fmt::format("retarget -i {0}/filtered -o {0}/clips", r)},
      {"generate", fmt::format("generate --clips {0}/clips -o {0}/scenarios --seed 2 --scenarios 2", r)},
      {"simulate", fmt::format("simulate -s {0}/scenarios --clips {0}/clips -o {0}/runs --seed 3 --planner reactive_brake", r)},
      {"evaluate", fmt::format("evaluate --logs {0}/runs --scenarios {0}/runs -o {0}/eval/report.json --csv {0}/eval/report.csv", r)},
      {"stats", fmt::format("stats --trajectories {0}/trajectories --tags {0}/filtered/tags.json -o {0}/eval/stats.json", r)},
      {"plot", fmt::format("plot --stats {0}/eval/stats.json --report {0}/eval/report.json -o {0}/charts", r)},
  };
  const auto start = std::chrono::steady_clock::now();
  std::string codes;
  for (const auto& [name, args] : stages) {
    const int code = run_cli(args, log);
    codes += fmt::format("{}={} ", name, code);
    t.require(code == 0, fmt::format("{} exited {}", name, code));
    if (code != 0) break;
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.require(elapsed < 60.0, fmt::format("pipeline took {:.1f} s", elapsed));

  std::size_t documents = 0;
  std::size_t stable = 0;
  std::size_t charts = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.ndjson" || name == "cli.log" || name == "report.csv") continue;
    if (entry.path().extension() == ".svg") {
      ++charts;
      continue;
    }
    ++documents;
    const std::string text = read_file(entry.path());
    try {
      if (canonicalize(text) == text) {
        ++stable;
      } else {
        t.require(false, fmt::format("{} not byte-stable", name));
      }
    } catch (const Error& e) {
      t.require(false, fmt::format("{}: {}", name, e.what()));
    }
  }
  t.require(charts == 3, fmt::format("{} charts", charts));
  if (t.ok) fs::remove_all(root);
  return t.outcome(fmt::format("{}pipeline {:.1f} s; {}/{} documents round-trip byte-stable; {} charts", codes,
                               elapsed, stable, documents, charts));
}
#endif

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"AC1", "injury probability formula", 1.0, ac1_injury},
      {"AC2", "rotation suite", 10.0, ac2_rotations},
      {"AC3", "trajectory oracle", 10.0, ac3_trajectory},
      {"AC4", "retargeting inverse pipeline", 30.0, ac4_retarget},
      {"AC5", "simulator determinism and physics", 10.0, ac5_simulator},
      {"AC6", "metrics on constructed logs", 0.0, ac6_metrics},
      {"AC7", "filter pipeline", 0.0, ac7_filter},
#ifdef PEDMOTION_CLI_PATH
      {"AC8", "end-to-end CLI pipeline", 60.0, ac8_end_to_end},
#endif
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0 && elapsed >= c.limit_s) {
      o.pass = false;
      o.detail += fmt::format("; FAILED: runtime limit {:.0f} s", c.limit_s);
    }
    if (!o.pass) ++failures;
    fmt::print("{} {} [{:.3f} s] {}: {}\n", c.id, o.pass ? "PASS" : "FAIL", elapsed, c.name, o.detail);
  }
#ifndef PEDMOTION_CLI_PATH
  fmt::print("AC8 FAIL [0.000 s] end-to-end CLI pipeline: built without the CLI\n");
  ++failures;
#endif
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
