#include <map>
#include <random>

#include <gtest/gtest.h>

#include "dmm/delays.hpp"

namespace dmm {
namespace {

TEST(DelaySchedule, ConstantAndZero) {
  auto c = DelaySchedule::Constant(1);
  EXPECT_EQ(c.next_delay(5), 1);
  auto c3 = DelaySchedule::Constant(3);
  EXPECT_EQ(c3.next_delay(2), 3);
  EXPECT_EQ(effective_delay(3, 2), 1);
  auto z = DelaySchedule::Zero();
  for (long k = 1; k < 50; ++k) EXPECT_EQ(z.next_delay(k), 0);
  EXPECT_EQ(z.tau_max(), 0);
}

TEST(DelaySchedule, Cyclic) {
  auto s = DelaySchedule::Cyclic({0, 1, 2});
  EXPECT_EQ(s.tau_max(), 2);
  const int expected[] = {0, 1, 2, 0, 1, 2, 0};
  for (long k = 1; k <= 7; ++k) EXPECT_EQ(s.next_delay(k), expected[k - 1]);
}

TEST(DelaySchedule, RandomStaysInRangeAndReplays) {
  auto a = DelaySchedule::UniformRandom(5, 42);
  auto b = DelaySchedule::UniformRandom(5, 42);
  auto c = DelaySchedule::UniformRandom(5, 43);
  std::map<int, int> counts;
  bool differs = false;
  for (long k = 1; k <= 60000; ++k) {
    const int t = a.next_delay(k);
    ASSERT_GE(t, 0);
    ASSERT_LE(t, 5);
    ASSERT_EQ(t, b.next_delay(k));
    differs |= t != c.next_delay(k);
    ++counts[t];
  }
  EXPECT_TRUE(differs);
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [t, n] : counts) EXPECT_NEAR(n, 10000, 500) << t;
}

// The generator is the standard 64-bit Mersenne Twister; its 10000th output
// is fixed by the language standard.
TEST(DelaySchedule, RandomUsesMt19937_64) {
  std::mt19937_64 ref(5489u);
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ull);
  // tau_max = 1: bound 2 divides 2^64, so no rejection and t = word % 2.
  auto s = DelaySchedule::UniformRandom(1, 5489u);
  std::mt19937_64 words(5489u);
  for (long k = 1; k <= 100; ++k) EXPECT_EQ(s.next_delay(k), static_cast<int>(words() % 2));
}

TEST(DelaySchedule, ParseSpecs) {
  EXPECT_EQ(DelaySchedule::Parse("zero").kind(), DelayKind::kZero);
  auto c = DelaySchedule::Parse("const:3");
  EXPECT_EQ(c.kind(), DelayKind::kConstant);
  EXPECT_EQ(c.tau_max(), 3);
  auto y = DelaySchedule::Parse("cycle:0,1,2");
  EXPECT_EQ(y.pattern(), (std::vector<int>{0, 1, 2}));
  auto r = DelaySchedule::Parse("rand:5:seed=42");
  EXPECT_EQ(r.kind(), DelayKind::kUniformRandom);
  EXPECT_EQ(r.tau_max(), 5);
  EXPECT_EQ(r.seed(), 42u);
  EXPECT_EQ(DelaySchedule::Parse("rand:2", 9).seed(), 9u);
  for (const char* spec : {"zero", "const:3", "cycle:0,1,2", "rand:5:seed=42"}) {
    EXPECT_EQ(DelaySchedule::Parse(DelaySchedule::Parse(spec).describe()).describe(),
              DelaySchedule::Parse(spec).describe());
  }
}

TEST(DelaySchedule, ParseErrors) {
  for (const char* spec : {"", "const", "const:-1", "const:x", "cycle:", "cycle:1,,2", "rand:",
                           "rand:3:seed=abc", "lag:1", "const:1.5"}) {
    EXPECT_THROW(DelaySchedule::Parse(spec), std::invalid_argument) << spec;
  }
  EXPECT_THROW(DelaySchedule::Constant(-1), std::invalid_argument);
  EXPECT_THROW(DelaySchedule::Cyclic({}), std::invalid_argument);
  EXPECT_THROW(DelaySchedule::Zero().next_delay(0), std::invalid_argument);
}

TEST(DelaySchedule, BoundedForEverySchedule) {
  std::vector<DelaySchedule> all = {DelaySchedule::Zero(), DelaySchedule::Constant(4),
                                    DelaySchedule::Cyclic({3, 0, 1}),
                                    DelaySchedule::UniformRandom(7, 1)};
  for (auto& s : all) {
    int worst = 0;
    for (long k = 1; k <= 5000; ++k) worst = std::max(worst, s.next_delay(k));
    EXPECT_LE(worst, s.tau_max()) << s.describe();
  }
}

Vector scalar(double v) { return Vector::Constant(1, v); }

TEST(IterateHistory, Lookups) {
  IterateHistory h(3);
  for (long k = 1; k <= 5; ++k) h.push(k, scalar(static_cast<double>(k)));
  EXPECT_EQ(h.stale_lookup(5, 2)(0), 3.0);
  EXPECT_EQ(h.stale_lookup(5, 0)(0), 5.0);
  EXPECT_EQ(h.newest(), 5);
  EXPECT_EQ(h.oldest(), 3);
  EXPECT_THROW(h.stale_lookup(5, 3), std::out_of_range);
  EXPECT_THROW(h.stale_lookup(6, 0), std::out_of_range);
}

TEST(IterateHistory, ClippedAtStart) {
  IterateHistory h(2);
  h.push(1, scalar(1.0));
  EXPECT_EQ(h.stale_lookup(1, 7)(0), 1.0);
  h.push(2, scalar(2.0));
  EXPECT_EQ(h.stale_lookup(2, 5)(0), 1.0);
}

TEST(IterateHistory, BoundedMemory) {
  IterateHistory h(4);
  for (long k = 1; k <= 10000; ++k) h.push(k, scalar(static_cast<double>(k)));
  EXPECT_EQ(h.capacity(), 4);
  EXPECT_EQ(h.oldest(), 9997);
  for (int tau = 0; tau < 4; ++tau) EXPECT_EQ(h.stale_lookup(10000, tau)(0), 10000.0 - tau);
}

TEST(IterateHistory, Errors) {
  EXPECT_THROW(IterateHistory(0), std::invalid_argument);
  IterateHistory h(2);
  EXPECT_THROW(h.push(2, scalar(0.0)), std::invalid_argument);
  h.push(1, scalar(0.0));
  EXPECT_THROW(h.push(3, scalar(0.0)), std::invalid_argument);
}

TEST(IterateHistory, ZeroDelayIsCurrent) {
  IterateHistory h(1);
  for (long k = 1; k <= 20; ++k) {
    h.push(k, scalar(k * 0.5));
    EXPECT_EQ(h.stale_lookup(k, 0)(0), k * 0.5);
  }
}

}  // namespace
}  // namespace dmm
