#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pedmotion/motion.hpp"

namespace pedmotion {

/// Platform-independent draws on top of std::mt19937_64 (whose raw output
/// sequence is fixed by the standard, unlike the std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

enum class SynthKind { Crossing, Attempting, Standing, Running, Falling, NonTraffic };

struct SynthOptions {
  int joint_count = kDefaultSourceJointCount;
  double fps = 20.0;
};

/// One synthetic motion of the given kind: gait-like joint oscillations, a
/// yaw-rotating root and a matching annotation.
MotionSequence synth_motion(SynthKind kind, const std::string& id, Rng& rng, const SynthOptions& options = {});

/// `count` motions with kinds cycled deterministically from the seed and
/// frame rates drawn from {20, 30, 40, 60} Hz.
std::vector<MotionSequence> synth_corpus(int count, std::uint64_t seed, int joint_count = kDefaultSourceJointCount);

}  // namespace pedmotion
