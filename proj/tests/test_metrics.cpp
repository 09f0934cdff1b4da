#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dmm/error.hpp"
#include "dmm/metrics.hpp"

namespace dmm {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Distance, Examples) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::All(1));
  EXPECT_EQ(distance_to_saddle(p, vec({3.0, 4.0})), 5.0);
  EXPECT_EQ(distance_to_saddle(p, p.saddle()), 0.0);
  EXPECT_GE(distance_to_saddle(p, vec({-1e-300, 0.0})), 0.0);
  EXPECT_THROW(distance_to_saddle(p, vec({1.0})), std::invalid_argument);
}

TEST(BoundTracker, SlackAndWorstMargin) {
  BoundTracker t("x");
  t.observe(1, 0.5, 1.0);
  t.observe(2, 1.0 + 0.5e-9, 1.0);  // inside the relative slack
  EXPECT_TRUE(t.report().satisfied);
  EXPECT_EQ(t.report().worst_index, 2);
  t.observe(3, 1.0 + 2e-9, 1.0);
  EXPECT_FALSE(t.report().satisfied);
  EXPECT_EQ(t.report().worst_index, 3);
  EXPECT_EQ(t.report().checked, 3);
  EXPECT_TRUE(t.report().precondition_ok);
  t.flag_precondition("why");
  EXPECT_FALSE(t.report().precondition_ok);
  EXPECT_NE(t.report().note.find("precondition violated"), std::string::npos);
}

TEST(BoundTracker, NanFails) {
  BoundTracker t("x");
  t.observe(1, std::nan(""), 1.0);
  EXPECT_FALSE(t.report().satisfied);
}

TEST(RestrictionH, Construction) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::Ball(1, 3.0));
  const auto h = make_restriction_h(p, vec({0.5, 0.5}));
  EXPECT_DOUBLE_EQ(h.B, 3.0);  // G = 3 beats |z1|^2 = 0.5
  EXPECT_DOUBLE_EQ(h.radius_sq, 30.0);
  EXPECT_TRUE(h.contains(p.saddle()));
  const auto h2 = make_restriction_h(p, vec({2.0, 2.0}));
  EXPECT_DOUBLE_EQ(h2.B, 8.0);
  EXPECT_THROW(make_restriction_h(SaddleProblem::Bilinear(1, DomainSet::All(1)), vec({1.0, 1.0})),
               PreconditionError);
}

TEST(Lemma8, ZeroSequence) {
  const std::vector<double> v(20, 0.0);
  EXPECT_TRUE(check_recursion_lemma8(v, 0.5, 0.1, 2).satisfied);
}

TEST(Lemma8, EqualityCase) {
  std::vector<double> v{1.0};
  for (int k = 0; k < 40; ++k) v.push_back(v.back() * 0.5);
  const BoundReport r = check_recursion_lemma8(v, 0.5, 0.0, 0);
  EXPECT_TRUE(r.satisfied);
  EXPECT_LE(std::abs(r.worst_margin), 1e-12);
}

// Simulated delayed recursion V_{k+1} = p V_k + q max(V_{k-d}, ..., V_k).
TEST(Lemma8, SyntheticDelayedRecursion) {
  const double p = 0.4;
  const double q = 0.1;
  const int d = 2;
  std::vector<double> v{1.0};
  for (int k = 0; k < 200; ++k) {
    double window = 0.0;
    for (int j = std::max(0, k - d); j <= k; ++j) window = std::max(window, v[j]);
    v.push_back(p * v[k] + q * window);
  }
  const BoundReport r = check_recursion_lemma8(v, p, q, d);
  EXPECT_TRUE(r.satisfied);
  Lemma8Monitor m(p, q, d);
  EXPECT_NEAR(m.rate(), std::pow(0.5, 1.0 / 3.0), 1e-15);
}

TEST(Lemma8, DetectsViolation) {
  const std::vector<double> v{1.0, 0.9, 0.9};
  EXPECT_FALSE(check_recursion_lemma8(v, 0.5, 0.0, 0).satisfied);
}

TEST(Lemma8, Preconditions) {
  const std::vector<double> v{1.0};
  EXPECT_THROW(check_recursion_lemma8(v, 0.6, 0.5, 1), PreconditionError);
  EXPECT_THROW(check_recursion_lemma8(v, -0.1, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(check_recursion_lemma8(v, 0.1, 0.5, -1), std::invalid_argument);
}

TEST(Rhs, Formulas) {
  EXPECT_DOUBLE_EQ(theorem1_rhs(2.0, 1.0, 1.0, 1, 100), 10.0 * 4.0 * 0.1);
  EXPECT_DOUBLE_EQ(theorem2_rhs(3.0, 2.0, 2.0, 1, 16), 44.0 * 3.0 * 0.5);
  // tau_max = 0 is evaluated as 1
  EXPECT_DOUBLE_EQ(theorem1_rhs(2.0, 1.0, 1.0, 0, 100), theorem1_rhs(2.0, 1.0, 1.0, 1, 100));
  EXPECT_DOUBLE_EQ(theorem3_envelope(1.0, 2.0, 1, 1, 3.0), 3.0);
  const double one = theorem3_envelope(1.0, 1.0, 1, 7, 1.0);
  EXPECT_NEAR(one, 1.0 - 1.0 / 3072.0, 1e-15);
  EXPECT_THROW(theorem3_envelope(1.0, 1.0, 0, 2, 1.0), PreconditionError);
}

RunSummary deg_summary(const SaddleProblem& p, int tau, long T, const Vector& xbar,
                       const Vector& ybar) {
  RunSummary s;
  s.algorithm = Algorithm::kDeg;
  s.tau_max = tau;
  s.horizon = T;
  s.alpha = stepsize_theorem1(p.constants().G, p.constants().L, tau, T);
  s.average_x = xbar;
  s.average_y = ybar;
  return s;
}

TEST(Theorem1, ReportAndErrors) {
  const auto p = SaddleProblem::Bilinear(2, DomainSet::Ball(2, 1.0));
  const auto s1 = deg_summary(p, 1, 1000, vec({0.01, 0.0}), vec({0.0, -0.02}));
  const BoundReport r1 = check_theorem1(p, s1);
  EXPECT_TRUE(r1.satisfied);
  EXPECT_TRUE(r1.precondition_ok);
  EXPECT_NEAR(r1.empirical, 0.03, 1e-15);
  const auto s5 = deg_summary(p, 5, 1000, vec({0.01, 0.0}), vec({0.0, -0.02}));
  EXPECT_GT(check_theorem1(p, s5).theoretical, r1.theoretical);

  auto off = s1;
  off.alpha *= 2.0;
  EXPECT_FALSE(check_theorem1(p, off).precondition_ok);

  const auto wide = SaddleProblem::QuadraticCC(Matrix::Identity(1, 1) * 5.0, DomainSet::Ball(1, 1.0),
                                               DomainSet::Ball(1, 1.0));
  RunSummary short_run = s1;
  short_run.horizon = 3;
  short_run.average_x = vec({0.0});
  short_run.average_y = vec({0.0});
  EXPECT_THROW(check_theorem1(wide, short_run), PreconditionError);
  EXPECT_THROW(check_theorem1(SaddleProblem::Bilinear(2, DomainSet::All(2)), s1), PreconditionError);
}

TEST(Theorem2, ReportFlagsLargeStep) {
  const auto p = SaddleProblem::Bilinear(1, DomainSet::Ball(1, 1.0));
  RunSummary s;
  s.tau_max = 2;
  s.horizon = 2000;
  s.alpha = stepsize_theorem2(p.constants().G, p.constants().L, 2, 2000);
  s.z1 = vec({0.5, 0.5});
  s.average_x = vec({0.01});
  s.average_y = vec({0.01});
  const BoundReport ok = check_theorem2(p, s);
  EXPECT_TRUE(ok.satisfied);
  EXPECT_TRUE(ok.precondition_ok);
  s.alpha *= 2.0;
  const BoundReport flagged = check_theorem2(p, s);
  EXPECT_FALSE(flagged.precondition_ok);
  EXPECT_NE(flagged.note.find("precondition violated"), std::string::npos);
}

TEST(Theorem3, EnvelopeChecks) {
  const auto p = SaddleProblem::QuadraticSCSC(1.0, Matrix::Identity(1, 1));
  const double alpha = stepsize_theorem3(1.0, p.constants().L, 1);
  const std::vector<double> zeros(50, 0.0);
  EXPECT_TRUE(check_theorem3(p, alpha, 1, zeros).satisfied);
  const std::vector<double> flat(50, 1.0);
  EXPECT_FALSE(check_theorem3(p, alpha, 1, flat).satisfied);
  EXPECT_THROW(check_theorem3(p, alpha, 0, zeros), PreconditionError);
  EXPECT_THROW(check_theorem3(SaddleProblem::Bilinear(1, DomainSet::Ball(1, 1.0)), alpha, 1, zeros),
               PreconditionError);
  EXPECT_FALSE(check_theorem3(p, 2.0 * alpha, 1, zeros).precondition_ok);
}

TEST(WindowMax, Sliding) {
  WindowMax w(3);
  const double seq[] = {1.0, 5.0, 2.0, 0.5, 0.25, 0.1};
  const double expected[] = {1.0, 5.0, 5.0, 5.0, 2.0, 0.5};
  for (int i = 0; i < 6; ++i) {
    w.push(seq[i]);
    EXPECT_EQ(w.max(), expected[i]);
  }
}

}  // namespace
}  // namespace dmm
