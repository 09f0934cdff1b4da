#include "dmm/delays.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmm {

namespace {

template <typename Int>
Int parse_int(std::string_view text, std::string_view what) {
  Int value{};
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

int checked_tau(std::string_view text) {
  const int tau = parse_int<int>(text, "delay");
  if (tau < 0) throw std::invalid_argument("delays must be non-negative");
  return tau;
}

}  // namespace

DelaySchedule DelaySchedule::Zero() { return DelaySchedule(DelayKind::kZero, 0); }

DelaySchedule DelaySchedule::Constant(int tau) {
  if (tau < 0) throw std::invalid_argument("delays must be non-negative");
  if (tau == 0) return Zero();
  return DelaySchedule(DelayKind::kConstant, tau);
}

DelaySchedule DelaySchedule::Cyclic(std::vector<int> pattern) {
  if (pattern.empty()) throw std::invalid_argument("cyclic delay pattern is empty");
  if (std::any_of(pattern.begin(), pattern.end(), [](int t) { return t < 0; })) {
    throw std::invalid_argument("delays must be non-negative");
  }
  DelaySchedule s(DelayKind::kCyclic, *std::max_element(pattern.begin(), pattern.end()));
  s.pattern_ = std::move(pattern);
  return s;
}

DelaySchedule DelaySchedule::UniformRandom(int tau_max, std::uint64_t seed) {
  if (tau_max < 0) throw std::invalid_argument("tau_max must be non-negative");
  DelaySchedule s(DelayKind::kUniformRandom, tau_max);
  s.seed_ = seed;
  s.rng_.seed(seed);
  return s;
}

DelaySchedule DelaySchedule::Parse(std::string_view spec, std::uint64_t default_seed) {
  if (spec == "zero" || spec == "none") return Zero();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown delay schedule '" + std::string(spec) + "'");
  }
  const std::string_view head = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);
  if (head == "const") return Constant(checked_tau(rest));
  if (head == "cycle") {
    std::vector<int> pattern;
    while (true) {
      const auto comma = rest.find(',');
      pattern.push_back(checked_tau(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return Cyclic(std::move(pattern));
  }
  if (head == "rand") {
    std::uint64_t seed = default_seed;
    const auto second = rest.find(':');
    if (second != std::string_view::npos) {
      std::string_view seed_part = rest.substr(second + 1);
      if (seed_part.substr(0, 5) == "seed=") seed_part.remove_prefix(5);
      seed = parse_int<std::uint64_t>(seed_part, "seed");
      rest = rest.substr(0, second);
    }
    return UniformRandom(checked_tau(rest), seed);
  }
  throw std::invalid_argument("unknown delay schedule '" + std::string(spec) + "'");
}

int DelaySchedule::next_delay(long k) {
  if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
  switch (kind_) {
    case DelayKind::kZero:
      return 0;
    case DelayKind::kConstant:
      return tau_max_;
    case DelayKind::kCyclic:
      return pattern_[static_cast<std::size_t>((k - 1) % static_cast<long>(pattern_.size()))];
    case DelayKind::kUniformRandom: {
      if (tau_max_ == 0) return 0;
      const std::uint64_t bound = static_cast<std::uint64_t>(tau_max_) + 1;
      // Reject the lowest (2^64 mod bound) words so the modulo is unbiased.
      const std::uint64_t threshold = (0 - bound) % bound;
      std::uint64_t word = rng_();
      while (word < threshold) word = rng_();
      return static_cast<int>(word % bound);
    }
  }
  return 0;
}

std::string DelaySchedule::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case DelayKind::kZero:
      out << "zero";
      break;
    case DelayKind::kConstant:
      out << "const:" << tau_max_;
      break;
    case DelayKind::kCyclic:
      out << "cycle:";
      for (std::size_t i = 0; i < pattern_.size(); ++i) out << (i ? "," : "") << pattern_[i];
      break;
    case DelayKind::kUniformRandom:
      out << "rand:" << tau_max_ << ":seed=" << seed_;
      break;
  }
  return out.str();
}

IterateHistory::IterateHistory(int capacity) {
  if (capacity < 1) throw std::invalid_argument("history capacity must be >= 1");
  slots_.resize(static_cast<std::size_t>(capacity));
}

long IterateHistory::oldest() const {
  return std::max<long>(1, newest_ - capacity() + 1);
}

void IterateHistory::push(long k, const Vector& z) {
  if (k != newest_ + 1) {
    throw std::invalid_argument("history indices must be pushed consecutively");
  }
  slots_[static_cast<std::size_t>(k % capacity())] = z;
  newest_ = k;
}

const Vector& IterateHistory::at(long index) const {
  if (newest_ == 0 || index > newest_ || index < oldest()) {
    std::ostringstream msg;
    msg << "iterate " << index << " is not in the history window [" << oldest() << ", "
        << newest_ << "]; schedule tau_max exceeds history capacity";
    throw std::out_of_range(msg.str());
  }
  return slots_[static_cast<std::size_t>(index % capacity())];
}

const Vector& IterateHistory::stale_lookup(long k, int tau) const {
  if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
  return at(k - effective_delay(tau, k));
}

}  // namespace dmm
