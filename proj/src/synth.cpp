#include "pedmotion/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KindProfile {
  double duration_lo, duration_hi;
  double speed_lo, speed_hi;      // m/s while moving
  double travel_lo, travel_hi;    // total forward travel cap, m
  double yaw_rate;                // max |rad/s|
  double gait_amplitude;          // rad
  std::array<const char*, 5> annotations;
};

const KindProfile& profile(SynthKind kind) {
  static const KindProfile crossing{6.0, 8.0, 1.2, 1.6, 8.0, 11.0, 0.08, 0.5,
                                    {"a person walks across the street", "someone crosses the road at a steady pace",
                                     "a man strolls forward", "a woman walks straight ahead",
                                     "a person strides across the crosswalk"}};
  static const KindProfile attempting{3.0, 5.0, 0.9, 1.2, 0.6, 1.5, 0.0, 0.4,
                                      {"a person takes a few steps forward and stops",
                                       "someone steps toward the curb then waits",
                                       "a man walks forward briefly and halts", "a woman steps off and hesitates",
                                       "a person edges forward toward the road"}};
  static const KindProfile standing{3.0, 5.0, 0.0, 0.05, 0.0, 0.15, 0.05, 0.08,
                                    {"a person stands still", "someone waits at the corner",
                                     "a man stands and looks around", "a woman is waiting for the light",
                                     "a person idles near the curb"}};
  static const KindProfile running{3.0, 4.0, 2.8, 3.8, 6.0, 14.0, 0.05, 0.9,
                                   {"a person runs forward", "someone jogs across the road", "a person sprints ahead",
                                    "a man is running quickly", "a woman jogs in a straight line"}};
  static const KindProfile falling{2.5, 4.0, 0.6, 0.9, 0.1, 0.4, 0.0, 0.3,
                                   {"a person stumbles and falls down", "someone trips and falls",
                                    "a man slips on the ground", "a woman falls forward", "a person stumbles"}};
  static const KindProfile non_traffic{3.0, 5.0, 0.0, 0.1, 0.0, 0.2, 0.3, 0.6,
                                       {"a person waves both arms", "someone dances in place",
                                        "a man throws a ball", "a person does jumping jacks",
                                        "a woman sits down on a chair"}};
  switch (kind) {
    case SynthKind::Crossing: return crossing;
    case SynthKind::Attempting: return attempting;
    case SynthKind::Standing: return standing;
    case SynthKind::Running: return running;
    case SynthKind::Falling: return falling;
    case SynthKind::NonTraffic: return non_traffic;
  }
  return crossing;
}

}  // namespace

MotionSequence synth_motion(SynthKind kind, const std::string& id, Rng& rng, const SynthOptions& options) {
  if (options.joint_count < 1) fail(ErrorCode::InvalidInput, "joint_count must be positive");
  if (!(options.fps > 0.0)) fail(ErrorCode::InvalidInput, "fps must be positive");
  const KindProfile& k = profile(kind);

  MotionSequence seq;
  seq.id = id;
  seq.fps = options.fps;
  seq.annotation = k.annotations[rng.index(k.annotations.size())];

  const double duration = rng.uniform(k.duration_lo, k.duration_hi);
  const auto frames = static_cast<std::size_t>(std::lround(duration * options.fps)) + 1;
  const double dt = 1.0 / options.fps;
  const double speed = rng.uniform(k.speed_lo, k.speed_hi);
  const double travel = rng.uniform(k.travel_lo, k.travel_hi);
  const double yaw0 = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double yaw_rate = rng.uniform(-k.yaw_rate, k.yaw_rate);
  const double cadence = rng.uniform(0.8, 1.2) * (kind == SynthKind::Running ? 1.5 : 1.0);

  std::vector<double> amplitude(static_cast<std::size_t>(options.joint_count));
  std::vector<double> phase(amplitude.size());
  std::vector<Vec3> axis(amplitude.size());
  for (std::size_t j = 0; j < amplitude.size(); ++j) {
    amplitude[j] = k.gait_amplitude * rng.uniform(0.2, 1.0);
    phase[j] = rng.uniform(0.0, kTwoPi);
    Vec3 a(1.0, rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    axis[j] = a.normalized();
  }

  double travelled = 0.0;
  seq.frames.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const double t = static_cast<double>(f) * dt;
    MotionFrame frame;
    const Mat3 root = rot_y(yaw0 + yaw_rate * t);
    frame.root_6d = matrix_to_sixd(root);
    if (f > 0) {
      const double step = std::min(speed * dt, std::max(0.0, travel - travelled));
      travelled += step;
      const double sway = 0.01 * std::sin(kTwoPi * cadence * t);
      const double bob = 0.005 * std::cos(2.0 * kTwoPi * cadence * t) * (step > 0.0 ? 1.0 : 0.0);
      frame.root_vel = Vec3(sway * dt, bob * dt, step);
    }
    const double moving = travelled < travel ? 1.0 : 0.3;
    frame.joints.reserve(amplitude.size());
    for (std::size_t j = 0; j < amplitude.size(); ++j) {
      double angle = moving * amplitude[j] * std::sin(kTwoPi * cadence * t + phase[j]);
      if (kind == SynthKind::Falling && j == 3) angle += 0.8 * t / duration;  // spine folds forward
      frame.joints.push_back(axis[j] * angle);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

std::vector<MotionSequence> synth_corpus(int count, std::uint64_t seed, int joint_count) {
  if (count < 0) fail(ErrorCode::InvalidInput, "count must be >= 0");
  static constexpr SynthKind kinds[] = {SynthKind::Crossing, SynthKind::Attempting, SynthKind::Standing,
                                        SynthKind::Running,  SynthKind::Falling,    SynthKind::NonTraffic};
  static constexpr double rates[] = {20.0, 30.0, 40.0, 60.0};
  Rng rng(seed);
  const std::size_t offset = rng.index(std::size(kinds));
  std::vector<MotionSequence> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SynthOptions opts;
    opts.joint_count = joint_count;
    opts.fps = rates[rng.index(std::size(rates))];
    const SynthKind kind = kinds[(offset + static_cast<std::size_t>(i)) % std::size(kinds)];
    out.push_back(synth_motion(kind, fmt::format("motion_{:05}", i), rng, opts));
  }
  return out;
}

}  // namespace pedmotion
