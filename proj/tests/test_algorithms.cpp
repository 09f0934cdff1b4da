#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dmm/algorithms.hpp"
#include "dmm/error.hpp"
#include "support/oracles.hpp"

namespace dmm {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Dgda, FirstStepExample) {
  DgdaSolver s(SaddleProblem::Bilinear(1, DomainSet::All(1)), DelaySchedule::Zero(), 0.1,
               vec({1.0, 1.0}));
  const StepRecord r = s.step();
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.z, vec({1.0, 1.0}));
  EXPECT_EQ(s.iterate(), vec({0.9, 1.1}));
  EXPECT_EQ(s.k(), 2);
  EXPECT_EQ(r.error_norms.size(), 1u);
  EXPECT_EQ(r.max_error(), 0.0);
}

TEST(Dgda, DecoupledContraction) {
  DgdaSolver s(SaddleProblem::QuadraticSCSC(1.0, Matrix::Zero(1, 1)), DelaySchedule::Zero(), 0.5,
               vec({1.0, 1.0}));
  s.step();
  EXPECT_EQ(s.iterate(), vec({0.5, 0.5}));
}

TEST(Dgda, SaddleIsFixedPoint) {
  DgdaSolver s(SaddleProblem::Bilinear(2, DomainSet::Ball(2, 1.0)), DelaySchedule::Constant(3),
               0.3, Vector::Zero(4));
  for (int i = 0; i < 20; ++i) s.step();
  EXPECT_EQ(s.iterate(), Vector::Zero(4));
}

TEST(Dgda, MatchesDelayedRecursion) {
  std::mt19937_64 rng(1);
  const auto p = SaddleProblem::QuadraticSCSC(0.5, testing::random_matrix(rng, 2, 2, 1.0));
  const Vector z1 = testing::random_vector(rng, 4, 1.0);
  DelaySchedule probe = DelaySchedule::UniformRandom(3, 77);
  std::vector<int> raw;
  for (long k = 1; k <= 200; ++k) raw.push_back(probe.next_delay(k));
  const auto ref = testing::reference_delayed_gda(p, 0.05, z1, raw);
  DgdaSolver s(p, DelaySchedule::UniformRandom(3, 77), 0.05, z1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const StepRecord r = s.step();
    ASSERT_EQ(r.tau, std::min<long>(raw[i], static_cast<long>(i)));
    ASSERT_EQ(s.iterate(), ref[i + 1]) << "step " << i + 1;
  }
}

TEST(Dgda, ErrorNormIsPhiDifference) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::All(1));
  DgdaSolver s(p, DelaySchedule::Constant(1), 0.1, vec({1.0, 0.0}));
  s.step();
  const Vector z2 = s.iterate();
  const StepRecord r = s.step();
  EXPECT_EQ(r.tau, 1);
  EXPECT_NEAR(r.error_norms[0], (p.phi(z2) - p.phi(vec({1.0, 0.0}))).norm(), 1e-15);
}

TEST(Dgda, DivergenceIsStatusNotCrash) {
  DgdaSolver s(SaddleProblem::Bilinear(1, DomainSet::All(1)), DelaySchedule::Zero(), 1e7,
               vec({1.0, 1.0}));
  bool diverged = false;
  for (int i = 0; i < 10 && !diverged; ++i) diverged = s.step().diverged;
  EXPECT_TRUE(diverged);
  EXPECT_TRUE(s.diverged());
  EXPECT_THROW(s.step(), std::logic_error);
}

TEST(Dgda, Errors) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::All(1));
  EXPECT_THROW(DgdaSolver(p, DelaySchedule::Zero(), 0.0, vec({1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(DgdaSolver(p, DelaySchedule::Zero(), 0.1, vec({1.0})), std::invalid_argument);
}

TEST(Deg, Fig1DelayedGrows) {
  const auto p = SaddleProblem::Bilinear(2, DomainSet::All(2));
  const Vector z1 = Vector::Constant(4, 0.5);
  DegSolver s(p, DelaySchedule::Constant(1), DelaySchedule::Constant(1), 0.2, z1);
  std::vector<double> norms{z1.norm()};
  for (int i = 0; i < 200; ++i) {
    s.step();
    norms.push_back(s.iterate().norm());
  }
  EXPECT_GT(norms.back(), 10.0 * z1.norm());
  // strictly increasing after a short burn-in
  for (std::size_t i = 20; i + 1 < norms.size(); ++i) ASSERT_LT(norms[i], norms[i + 1]) << i;
}

TEST(Deg, Fig1UndelayedConverges) {
  const auto p = SaddleProblem::Bilinear(2, DomainSet::All(2));
  const Vector z1 = Vector::Constant(4, 0.5);
  DegSolver s(p, DelaySchedule::Zero(), DelaySchedule::Zero(), 0.2, z1);
  for (int i = 0; i < 500; ++i) s.step();
  EXPECT_LT(s.iterate().norm(), 1e-3 * z1.norm());
}

TEST(Deg, ProjectionsKeepIteratesFeasible) {
  std::mt19937_64 rng(2);
  const auto p = SaddleProblem::QuadraticCC(testing::random_matrix(rng, 2, 2, 2.0),
                                            DomainSet::Ball(2, 0.5), DomainSet::Box(2, 0.3));
  DegSolver s(p, DelaySchedule::UniformRandom(3, 1), DelaySchedule::UniformRandom(2, 2), 0.4,
              vec({0.1, 0.2, 0.3, -0.3}));
  for (int i = 0; i < 300; ++i) {
    const StepRecord r = s.step();
    ASSERT_TRUE(r.midpoint.has_value());
    ASSERT_TRUE(p.domain_x().contains(p.x_part(*r.midpoint)));
    ASSERT_TRUE(p.domain_y().contains(p.y_part(*r.midpoint)));
    ASSERT_TRUE(p.domain_x().contains(p.x_part(s.iterate())));
    ASSERT_TRUE(p.domain_y().contains(p.y_part(s.iterate())));
    ASSERT_EQ(r.error_norms.size(), 4u);
    for (double e : r.error_norms) ASSERT_GE(e, 0.0);
  }
}

// The y-updates ascend along grad_y. A grad_x typo would move y the wrong way
// on this instance.
TEST(Deg, EndpointUsesGradY) {
  const auto p = SaddleProblem::QuadraticSCSC(1.0, Matrix::Zero(1, 1));
  DegSolver s(p, DelaySchedule::Zero(), DelaySchedule::Zero(), 0.1, vec({0.0, 1.0}));
  s.step();
  // yhat = 1 - 0.1 = 0.9, y2 = 1 + 0.1 * (-0.9) = 0.91; x stays 0.
  EXPECT_NEAR(s.iterate()(1), 0.91, 1e-15);
  EXPECT_EQ(s.iterate()(0), 0.0);
}

TEST(Deg, InitialPointMustBeFeasible) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::Box(1, 1.0));
  EXPECT_THROW(DegSolver(p, DelaySchedule::Zero(), DelaySchedule::Zero(), 0.1, vec({2.0, 0.0})),
               std::invalid_argument);
}

TEST(Deg, IndependentMidpointSchedule) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::Ball(1, 1.0));
  DegSolver s(p, DelaySchedule::Zero(), DelaySchedule::Constant(2), 0.1, vec({0.5, 0.5}));
  for (long k = 1; k <= 5; ++k) {
    const StepRecord r = s.step();
    EXPECT_EQ(r.tau, 0);
    EXPECT_EQ(*r.tau_mid, std::min(2L, k - 1));
    EXPECT_EQ(r.error_norms[0], 0.0);
  }
}

TEST(StepSize, Theorem1) {
  EXPECT_DOUBLE_EQ(stepsize_theorem1(1, 1, 1, 24), 1.0 / 24.0);
  EXPECT_DOUBLE_EQ(stepsize_theorem1(2, 1, 4, 48), 1.0 / 96.0);
  EXPECT_THROW(stepsize_theorem1(1, 1, 1, 0), PreconditionError);
  EXPECT_THROW(stepsize_theorem1(1, 5, 1, 4), PreconditionError);
  EXPECT_THROW(stepsize_theorem1(INFINITY, 1, 1, 100), PreconditionError);
  EXPECT_THROW(stepsize_theorem1(1, 1, 0, 100), PreconditionError);
}

TEST(StepSize, Theorem2) {
  EXPECT_DOUBLE_EQ(stepsize_theorem2(1, 1, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(stepsize_theorem2(1, 1, 4, 16), 1.0 / 16.0);
  EXPECT_THROW(stepsize_theorem2(INFINITY, 1, 1, 10), PreconditionError);
  EXPECT_THROW(stepsize_theorem2(1, 1, 1, 0), PreconditionError);
}

TEST(StepSize, Theorem3) {
  EXPECT_DOUBLE_EQ(stepsize_theorem3(1, 1, 1), 1.0 / 1536.0);
  EXPECT_DOUBLE_EQ(stepsize_theorem3(1, 2, 1), 1.0 / (1536.0 * 64.0));
  EXPECT_THROW(stepsize_theorem3(2, 1, 1), PreconditionError);
  EXPECT_THROW(stepsize_theorem3(0, 1, 1), PreconditionError);
  EXPECT_THROW(stepsize_theorem3(1, 1, 0), PreconditionError);
}

StepRecord record_at(const Vector& z) {
  StepRecord r;
  r.z = z;
  return r;
}

TEST(Averaging, Basics) {
  std::vector<StepRecord> recs(3, record_at(vec({1.5, -2.0})));
  auto [x, y] = averaged_iterates(recs, 1);
  EXPECT_EQ(x, vec({1.5}));
  EXPECT_EQ(y, vec({-2.0}));
  std::vector<StepRecord> two = {record_at(vec({0.0, 0.0})), record_at(vec({2.0, 2.0}))};
  auto [x2, y2] = averaged_iterates(two, 1);
  EXPECT_EQ(x2(0), 1.0);
  EXPECT_EQ(y2(0), 1.0);
  EXPECT_THROW(averaged_iterates(std::span<const StepRecord>{}, 1), std::invalid_argument);
}

TEST(Averaging, DegUsesMidpointsAndMatchesVanillaEg) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::Ball(1, 1.0));
  const Vector z1 = vec({0.6, -0.3});
  DegSolver s(p, DelaySchedule::Zero(), DelaySchedule::Zero(), 0.3, z1);
  std::vector<StepRecord> recs;
  for (int i = 0; i < 50; ++i) recs.push_back(s.step());
  const auto ref = testing::reference_eg(p, 0.3, z1, 50);
  Vector sum = Vector::Zero(2);
  for (const Vector& m : ref.midpoints) sum += m;
  const Vector mean = sum / 50.0;
  auto [x, y] = averaged_iterates(recs, 1);
  EXPECT_EQ(x(0), mean(0));
  EXPECT_EQ(y(0), mean(1));
}

}  // namespace
}  // namespace dmm
