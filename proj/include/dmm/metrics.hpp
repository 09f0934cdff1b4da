#pragma once

#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmm/algorithms.hpp"
#include "dmm/problems.hpp"
#include "dmm/types.hpp"

namespace dmm {

// Result of checking `empirical <= theoretical` at one or more indices.
//
// `theoretical`/`empirical` are the values at the binding index (the one with
// the smallest relative margin), `worst_margin` is that relative margin
// (theoretical - empirical) / |theoretical|. A relative slack of 1e-9 absorbs
// round-off in ties.
struct BoundReport {
  std::string name;
  double theoretical = 0.0;
  double empirical = 0.0;
  bool satisfied = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  long worst_index = 0;
  long checked = 0;
  bool precondition_ok = true;
  std::string note;

  bool operator==(const BoundReport&) const = default;
};

inline constexpr double kBoundSlack = 1e-9;

// Accumulates pointwise checks into a BoundReport.
class BoundTracker {
 public:
  explicit BoundTracker(std::string name) { report_.name = std::move(name); }

  void observe(long index, double empirical, double theoretical);
  void flag_precondition(const std::string& why);
  const BoundReport& report() const { return report_; }

 private:
  BoundReport report_;
};

double distance_to_saddle(const SaddleProblem& problem, const Vector& z);

// H = { z : |z - z*|^2 <= 10 B }, B = max(|z1 - z*|^2, G).
struct RestrictionSetH {
  Vector center;
  double radius_sq = 0.0;
  double B = 0.0;

  bool contains(const Vector& z) const;
  DomainSet as_ball() const;
};

// Throws PreconditionError when G is infinite.
RestrictionSetH make_restriction_h(const SaddleProblem& problem, const Vector& z1);

// What the end-of-run checks need to know about a finished run.
struct RunSummary {
  Algorithm algorithm = Algorithm::kDgda;
  double alpha = 0.0;
  long horizon = 0;  // T
  int tau_max = 0;
  Vector z1;
  Vector average_x;  // DEG: mean of midpoints; DGDA: mean of z_1..z_T
  Vector average_y;
};

// Delay bounds use tau_max >= 1, the convention the error bounds are proved in.
inline int bound_tau(int tau_max) { return tau_max < 1 ? 1 : tau_max; }

double theorem1_rhs(double D, double G, double L, int tau_max, long T);
double theorem2_rhs(double B, double G, double L, int tau_max, long T);
double theorem3_envelope(double mu, double L, int tau_max, long k, double r1);

// Gap of the averaged DEG midpoints over X x Y against 10 D^2 sqrt(G L tau / T).
BoundReport check_theorem1(const SaddleProblem& problem, const RunSummary& run);
// H-restricted gap of the averaged DGDA iterates against 44 B sqrt(G L tau / T).
BoundReport check_theorem2(const SaddleProblem& problem, const RunSummary& run);
// r_k (k = 1, 2, ...) against the geometric envelope; `r` holds r_1, r_2, ...
BoundReport check_theorem3(const SaddleProblem& problem, double alpha, int tau_max,
                           std::span<const double> r);
// V_k <= rho^k V_0 with rho = (p + q)^(1 / (1 + d_max)); `v` holds V_0, V_1, ...
BoundReport check_recursion_lemma8(std::span<const double> v, double p, double q, int d_max);

// Max of the last `width` observations.
class WindowMax {
 public:
  explicit WindowMax(int width) : width_(width) {}
  void push(double value);
  double max() const;

 private:
  int width_;
  std::deque<double> values_;
};

// Streaming checker for V_k <= rho^k V_0.
class Lemma8Monitor {
 public:
  Lemma8Monitor(double p, double q, int d_max);
  void observe(double v);
  const BoundReport& report() const { return tracker_.report(); }
  double rate() const { return rho_; }

 private:
  BoundTracker tracker_;
  double log_rho_;
  double rho_;
  long index_ = 0;
  double v0_ = 0.0;
};

// Streaming checker for r_k against the linear-rate envelope.
class Theorem3Monitor {
 public:
  Theorem3Monitor(double mu, double L, int tau_max);
  void observe(long k, double r);
  const BoundReport& report() const { return tracker_.report(); }

 private:
  BoundTracker tracker_;
  double log_factor_;
  double exponent_scale_;
  double r1_ = 0.0;
};

// Evaluates every bound that applies to a run as the run progresses.
//
// Which bounds apply is decided from the algorithm and the instance:
//  * DEG on bounded domains: Lemma3 per step and Theorem1 at the end.
//  * DGDA with finite G: Lemma4 per step; for convex-concave instances also
//    Lemma5 per iterate and Theorem2 at the end.
//  * DGDA on unconstrained SC-SC instances with tau_max >= 1: Lemma7,
//    SCSC-recursion, Lemma8 and Theorem3.
class TrajectoryAudit {
 public:
  TrajectoryAudit(const SaddleProblem& problem, Algorithm algorithm, double alpha, long horizon,
                  int tau_max, const Vector& z1);
  ~TrajectoryAudit();
  TrajectoryAudit(TrajectoryAudit&&) noexcept;
  TrajectoryAudit& operator=(TrajectoryAudit&&) noexcept;

  void observe(const StepRecord& step);
  // Closes the run; `z_last` is z_{k+1} after the final step.
  std::vector<BoundReport> finish(const Vector& z_last, const RunSummary& summary,
                                  bool diverged);

  const std::optional<RestrictionSetH>& restriction() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dmm
