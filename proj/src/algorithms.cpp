#include "dmm/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dmm/error.hpp"

namespace dmm {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("step size must be finite and > 0");
  }
}

void require_constants(double G, double L) {
  if (std::isinf(G)) {
    throw PreconditionError("bounded gradients required: G is infinite for this instance");
  }
  if (!(G >= 1.0) || !(L >= 1.0) || !std::isfinite(L)) {
    throw PreconditionError("G and L must be finite and >= 1");
  }
}

void require_tau(int tau_max) {
  if (tau_max < 1) throw PreconditionError("tau_max must be >= 1 for the step-size rules");
}

}  // namespace

bool is_diverged(const Vector& z) {
  return !z.allFinite() || z.norm() > kDivergenceThreshold;
}

double StepRecord::max_error() const {
  double worst = 0.0;
  for (double e : error_norms) worst = std::max(worst, e);
  return worst;
}

DgdaSolver::DgdaSolver(SaddleProblem problem, DelaySchedule schedule, double alpha, Vector z1)
    : problem_(std::move(problem)),
      schedule_(std::move(schedule)),
      alpha_(alpha),
      z_(std::move(z1)),
      history_(schedule_.tau_max() + 1) {
  require_alpha(alpha_);
  if (z_.size() != problem_.dim()) throw std::invalid_argument("z1 has the wrong dimension");
  if (!z_.allFinite()) throw std::invalid_argument("z1 must be finite");
  history_.push(1, z_);
}

StepRecord DgdaSolver::step() {
  if (diverged_) throw std::logic_error("stepping a diverged DGDA run");
  StepRecord rec;
  rec.k = k_;
  rec.tau = effective_delay(schedule_.next_delay(k_), k_);
  const Vector& stale = history_.stale_lookup(k_, rec.tau);
  const Vector g = problem_.phi(stale);
  rec.error_norms.push_back(rec.tau == 0 ? 0.0 : (problem_.phi(z_) - g).norm());
  rec.z = z_;

  z_ = z_ - alpha_ * g;
  ++k_;
  history_.push(k_, z_);
  rec.diverged = diverged_ = is_diverged(z_);
  return rec;
}

DegSolver::DegSolver(SaddleProblem problem, DelaySchedule main_schedule,
                     DelaySchedule mid_schedule, double alpha, Vector z1)
    : problem_(std::move(problem)),
      main_schedule_(std::move(main_schedule)),
      mid_schedule_(std::move(mid_schedule)),
      alpha_(alpha),
      z_(std::move(z1)),
      history_main_(main_schedule_.tau_max() + 1),
      history_mid_(mid_schedule_.tau_max() + 1) {
  require_alpha(alpha_);
  if (z_.size() != problem_.dim()) throw std::invalid_argument("z1 has the wrong dimension");
  if (!problem_.domain_x().contains(problem_.x_part(z_)) ||
      !problem_.domain_y().contains(problem_.y_part(z_))) {
    throw std::invalid_argument("z1 must lie in X x Y");
  }
  history_main_.push(1, z_);
}

StepRecord DegSolver::step() {
  if (diverged_) throw std::logic_error("stepping a diverged DEG run");
  const SaddleProblem& p = problem_;
  const DomainSet& dx = p.domain_x();
  const DomainSet& dy = p.domain_y();

  StepRecord rec;
  rec.k = k_;
  rec.tau = effective_delay(main_schedule_.next_delay(k_), k_);
  const int tau_mid = effective_delay(mid_schedule_.next_delay(k_), k_);
  rec.tau_mid = tau_mid;

  const Vector x = p.x_part(z_);
  const Vector y = p.y_part(z_);

  const Vector& stale = history_main_.stale_lookup(k_, rec.tau);
  const Vector xs = p.x_part(stale);
  const Vector ys = p.y_part(stale);
  const Vector gx = p.grad_x(xs, ys);
  const Vector gy = p.grad_y(xs, ys);
  const Vector xh = dx.project(x - alpha_ * gx);
  const Vector yh = dy.project(y + alpha_ * gy);
  history_mid_.push(k_, p.stack(xh, yh));

  const Vector& stale_mid = history_mid_.stale_lookup(k_, tau_mid);
  const Vector xhs = p.x_part(stale_mid);
  const Vector yhs = p.y_part(stale_mid);
  const Vector gxh = p.grad_x(xhs, yhs);
  const Vector gyh = p.grad_y(xhs, yhs);

  if (rec.tau == 0) {
    rec.error_norms = {0.0, 0.0};
  } else {
    rec.error_norms = {(gx - p.grad_x(x, y)).norm(), (gy - p.grad_y(x, y)).norm()};
  }
  if (tau_mid == 0) {
    rec.error_norms.insert(rec.error_norms.end(), {0.0, 0.0});
  } else {
    rec.error_norms.push_back((gxh - p.grad_x(xh, yh)).norm());
    rec.error_norms.push_back((gyh - p.grad_y(xh, yh)).norm());
  }
  rec.z = z_;
  rec.midpoint = history_mid_.at(k_);

  z_ = p.stack(dx.project(x - alpha_ * gxh), dy.project(y + alpha_ * gyh));
  ++k_;
  history_main_.push(k_, z_);
  rec.diverged = diverged_ = is_diverged(z_);
  return rec;
}

double stepsize_theorem1(double G, double L, int tau_max, long T) {
  require_constants(G, L);
  require_tau(tau_max);
  if (T < 1 || static_cast<double>(T) < L) {
    throw PreconditionError("extra-gradient step-size rule requires T >= L (got T=" +
                            std::to_string(T) + ")");
  }
  const double alpha =
      std::sqrt(1.0 / (24.0 * G * L * static_cast<double>(tau_max) * static_cast<double>(T)));
  if (alpha > 1.0 / (2.0 * L)) throw std::logic_error("alpha exceeds 1/(2L)");
  return alpha;
}

double stepsize_theorem2(double G, double L, int tau_max, long T) {
  require_constants(G, L);
  require_tau(tau_max);
  if (T < 1) throw PreconditionError("horizon T must be >= 1");
  const double alpha =
      1.0 / (2.0 * std::sqrt(L * G * static_cast<double>(tau_max) * static_cast<double>(T)));
  // The boundedness argument needs alpha <= 1 / (2 sqrt(L G tau_max T)); the
  // rule sits exactly on that limit.
  return alpha;
}

double stepsize_theorem3(double mu, double L, int tau_max) {
  if (!(mu > 0.0) || !std::isfinite(L) || mu > L) {
    throw PreconditionError("strongly monotone step-size rule requires 0 < mu <= L");
  }
  require_tau(tau_max);
  const double tau = static_cast<double>(tau_max);
  const double alpha = std::pow(mu, 3) / (1536.0 * std::pow(L, 6) * tau * tau);
  if (alpha > mu / (8.0 * L * L)) throw std::logic_error("alpha exceeds mu/(8 L^2)");
  return alpha;
}

std::pair<Vector, Vector> averaged_iterates(std::span<const StepRecord> records, int dim_x) {
  if (records.empty()) throw std::invalid_argument("cannot average an empty run");
  const Vector& first = records.front().midpoint ? *records.front().midpoint : records.front().z;
  RunningAverage avg(static_cast<int>(first.size()));
  for (const StepRecord& r : records) avg.add(r.midpoint ? *r.midpoint : r.z);
  const Vector mean = avg.mean();
  return {mean.head(dim_x), mean.tail(mean.size() - dim_x)};
}

Vector RunningAverage::mean() const {
  if (count_ == 0) throw std::invalid_argument("cannot average an empty run");
  return sum_ / static_cast<double>(count_);
}

}  // namespace dmm
