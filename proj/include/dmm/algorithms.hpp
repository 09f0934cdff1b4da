#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dmm/delays.hpp"
#include "dmm/problems.hpp"
#include "dmm/types.hpp"

namespace dmm {

enum class Algorithm { kDgda, kDeg };

// Runs halt once an iterate leaves this norm ball or stops being finite.
inline constexpr double kDivergenceThreshold = 1e12;

bool is_diverged(const Vector& z);

// What happened during iteration k (the step from z_k to z_{k+1}).
struct StepRecord {
  long k = 0;
  Vector z;                        // z_k
  std::optional<Vector> midpoint;  // DEG only: [xhat_k; yhat_k]
  int tau = 0;                     // effective delay of the main (or only) oracle call
  std::optional<int> tau_mid;      // DEG endpoint delay
  // DGDA: {|e_k|}. DEG: {|e_x(x_k,y_k)|, |e_y(x_k,y_k)|, |e_x(xh_k,yh_k)|, |e_y(xh_k,yh_k)|}.
  std::vector<double> error_norms;
  bool diverged = false;  // z_{k+1} is non-finite or beyond kDivergenceThreshold

  double max_error() const;
};

// z_{k+1} = z_k - alpha * Phi(z_{k - tau_k}), unconstrained.
class DgdaSolver {
 public:
  DgdaSolver(SaddleProblem problem, DelaySchedule schedule, double alpha, Vector z1);

  StepRecord step();

  long k() const { return k_; }
  const Vector& iterate() const { return z_; }
  double alpha() const { return alpha_; }
  bool diverged() const { return diverged_; }
  const SaddleProblem& problem() const { return problem_; }

 private:
  SaddleProblem problem_;
  DelaySchedule schedule_;
  double alpha_;
  long k_ = 1;
  Vector z_;
  IterateHistory history_;
  bool diverged_ = false;
};

// Delayed extra-gradient with projections onto X and Y:
//   xhat_k    = P_X(x_k - alpha grad_x f(z_{k - tau_k}))
//   yhat_k    = P_Y(y_k + alpha grad_y f(z_{k - tau_k}))
//   x_{k + 1} = P_X(x_k - alpha grad_x f(zhat_{k - tauhat_k}))
//   y_{k + 1} = P_Y(y_k + alpha grad_y f(zhat_{k - tauhat_k}))
// The y endpoint update ascends along grad_y (not grad_x).
class DegSolver {
 public:
  DegSolver(SaddleProblem problem, DelaySchedule main_schedule, DelaySchedule mid_schedule,
            double alpha, Vector z1);

  StepRecord step();

  long k() const { return k_; }
  const Vector& iterate() const { return z_; }
  double alpha() const { return alpha_; }
  bool diverged() const { return diverged_; }
  const SaddleProblem& problem() const { return problem_; }

 private:
  SaddleProblem problem_;
  DelaySchedule main_schedule_;
  DelaySchedule mid_schedule_;
  double alpha_;
  long k_ = 1;
  Vector z_;
  IterateHistory history_main_;
  IterateHistory history_mid_;
  bool diverged_ = false;
};

// Step-size rules. Each validates its theorem's preconditions (throwing
// PreconditionError) and asserts the inequality the proof relies on.
double stepsize_theorem1(double G, double L, int tau_max, long T);  // DEG, convex-concave
double stepsize_theorem2(double G, double L, int tau_max, long T);  // DGDA, convex-concave
double stepsize_theorem3(double mu, double L, int tau_max);         // DGDA, SC-SC

// Ergodic average: midpoints for DEG records, iterates z_k otherwise.
std::pair<Vector, Vector> averaged_iterates(std::span<const StepRecord> records, int dim_x);

// Running sum of the averaged sequence, summed in index order so that the
// mean is reproducible bit for bit.
class RunningAverage {
 public:
  explicit RunningAverage(int dim) : sum_(Vector::Zero(dim)) {}
  void add(const Vector& v) {
    sum_ += v;
    ++count_;
  }
  long count() const { return count_; }
  Vector mean() const;

 private:
  Vector sum_;
  long count_ = 0;
};

}  // namespace dmm
