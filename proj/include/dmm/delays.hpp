#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dmm/types.hpp"

namespace dmm {

enum class DelayKind { kZero, kConstant, kCyclic, kUniformRandom };

// Bounded delay sequence tau_1, tau_2, ... with 0 <= tau_k <= tau_max.
//
// Random schedules draw from std::mt19937_64 (whose output sequence is fixed
// by the C++ standard) and map each 64-bit word to {0, ..., tau_max} by
// rejection sampling on the top of the range followed by modulo, so the
// sequence is identical on every platform. Draws are sequential: a random
// schedule must be queried once per iteration in order.
class DelaySchedule {
 public:
  static DelaySchedule Zero();
  static DelaySchedule Constant(int tau);
  static DelaySchedule Cyclic(std::vector<int> pattern);
  static DelaySchedule UniformRandom(int tau_max, std::uint64_t seed);

  // Accepts `zero`, `const:3`, `cycle:0,1,2`, `rand:5` and `rand:5:seed=42`.
  // `default_seed` is used when a random spec carries no seed.
  static DelaySchedule Parse(std::string_view spec, std::uint64_t default_seed = 0);

  DelayKind kind() const { return kind_; }
  int tau_max() const { return tau_max_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<int>& pattern() const { return pattern_; }

  // Raw delay for iteration k >= 1. See effective_delay for start-up clipping.
  int next_delay(long k);

  // Canonical spec string; Parse(describe()) reproduces the schedule.
  std::string describe() const;

 private:
  DelaySchedule(DelayKind kind, int tau_max) : kind_(kind), tau_max_(tau_max) {}

  DelayKind kind_;
  int tau_max_;
  std::vector<int> pattern_;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
};

// Delay actually applied at iteration k: never reaches before z_1.
inline int effective_delay(int tau, long k) {
  return static_cast<int>(std::min<long>(tau, k - 1));
}

// Ring buffer of the last `capacity` iterates, indexed by iteration number.
// Slots are allocated once; pushing copies into an existing slot.
class IterateHistory {
 public:
  explicit IterateHistory(int capacity);

  int capacity() const { return static_cast<int>(slots_.size()); }
  long newest() const { return newest_; }
  long oldest() const;

  // Indices must be pushed consecutively starting from 1.
  void push(long k, const Vector& z);
  const Vector& at(long index) const;

  // Iterate from k - min(tau, k - 1). Throws std::out_of_range if that index
  // has been evicted or not yet pushed.
  const Vector& stale_lookup(long k, int tau) const;

 private:
  std::vector<Vector> slots_;
  long newest_ = 0;
};

}  // namespace dmm
