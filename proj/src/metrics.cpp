#include "dmm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dmm/error.hpp"

namespace dmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_step(double alpha, double rule) {
  return std::abs(alpha - rule) <= 1e-12 * rule;
}

double pow6(double v) { return v * v * v * v * v * v; }

}  // namespace

void BoundTracker::observe(long index, double empirical, double theoretical) {
  BoundReport& r = report_;
  ++r.checked;
  const bool ok = empirical <= theoretical + kBoundSlack * std::abs(theoretical);
  double margin;
  if (theoretical != 0.0) {
    margin = (theoretical - empirical) / std::abs(theoretical);
  } else {
    margin = empirical <= 0.0 ? 0.0 : -kInf;
  }
  if (std::isnan(margin)) margin = -kInf;
  if (r.checked == 1 || margin < r.worst_margin) {
    r.worst_margin = margin;
    r.worst_index = index;
    r.theoretical = theoretical;
    r.empirical = empirical;
  }
  if (!ok) r.satisfied = false;
}

void BoundTracker::flag_precondition(const std::string& why) {
  report_.precondition_ok = false;
  if (!report_.note.empty()) report_.note += "; ";
  report_.note += "precondition violated: " + why;
}

double distance_to_saddle(const SaddleProblem& problem, const Vector& z) {
  if (z.size() != problem.dim()) throw std::invalid_argument("dimension mismatch");
  return (z - problem.saddle()).norm();
}

bool RestrictionSetH::contains(const Vector& z) const {
  return (z - center).squaredNorm() <= radius_sq * (1.0 + kBoundSlack);
}

DomainSet RestrictionSetH::as_ball() const { return DomainSet::Ball(center, std::sqrt(radius_sq)); }

RestrictionSetH make_restriction_h(const SaddleProblem& problem, const Vector& z1) {
  const double G = problem.constants().G;
  if (std::isinf(G)) throw PreconditionError("the set H needs a finite gradient bound G");
  RestrictionSetH h;
  h.center = problem.saddle();
  h.B = std::max((z1 - h.center).squaredNorm(), G);
  h.radius_sq = 10.0 * h.B;
  return h;
}

double theorem1_rhs(double D, double G, double L, int tau_max, long T) {
  return 10.0 * D * D * std::sqrt(G * L * bound_tau(tau_max) / static_cast<double>(T));
}

double theorem2_rhs(double B, double G, double L, int tau_max, long T) {
  return 44.0 * B * std::sqrt(G * L * bound_tau(tau_max) / static_cast<double>(T));
}

double theorem3_envelope(double mu, double L, int tau_max, long k, double r1) {
  if (tau_max < 1) throw PreconditionError("the linear-rate envelope needs tau_max >= 1");
  const double tau = tau_max;
  const double c = std::pow(mu, 4) / (3072.0 * pow6(L) * tau * tau);
  return std::exp(static_cast<double>(k - 1) / (6.0 * tau) * std::log1p(-c)) * r1;
}

BoundReport check_theorem1(const SaddleProblem& problem, const RunSummary& run) {
  if (!problem.bounded()) throw PreconditionError("Theorem1 needs bounded domains X and Y");
  const ProblemConstants& c = problem.constants();
  if (run.horizon < 1 || static_cast<double>(run.horizon) < c.L) {
    throw PreconditionError("Theorem1 needs T >= L");
  }
  BoundTracker t("Theorem1");
  const double gap = duality_gap(problem, run.average_x, run.average_y);
  t.observe(run.horizon, gap, theorem1_rhs(c.D, c.G, c.L, run.tau_max, run.horizon));
  if (run.tau_max >= 1) {
    if (!same_step(run.alpha, stepsize_theorem1(c.G, c.L, run.tau_max, run.horizon))) {
      t.flag_precondition("step size differs from the DEG rule sqrt(1/(24 G L tau_max T))");
    }
  } else if (run.alpha > 1.0 / (2.0 * c.L)) {
    t.flag_precondition("alpha > 1/(2L)");
  }
  return t.report();
}

BoundReport check_theorem2(const SaddleProblem& problem, const RunSummary& run) {
  const ProblemConstants& c = problem.constants();
  const RestrictionSetH h = make_restriction_h(problem, run.z1);
  if (run.horizon < 1) throw PreconditionError("Theorem2 needs T >= 1");
  BoundTracker t("Theorem2");
  const double gap = duality_gap(problem, run.average_x, run.average_y, h.as_ball());
  t.observe(run.horizon, gap, theorem2_rhs(h.B, c.G, c.L, run.tau_max, run.horizon));
  const double rule = stepsize_theorem2(c.G, c.L, bound_tau(run.tau_max), run.horizon);
  if (!same_step(run.alpha, rule)) {
    t.flag_precondition("step size differs from the DGDA rule 1/(2 sqrt(L G tau_max T))");
  }
  return t.report();
}

BoundReport check_theorem3(const SaddleProblem& problem, double alpha, int tau_max,
                           std::span<const double> r) {
  if (tau_max < 1) throw PreconditionError("Theorem3 needs tau_max >= 1");
  if (!(problem.mu() > 0.0)) throw PreconditionError("Theorem3 needs an SC-SC instance");
  Theorem3Monitor m(problem.constants().mu, problem.constants().L, tau_max);
  for (std::size_t i = 0; i < r.size(); ++i) m.observe(static_cast<long>(i) + 1, r[i]);
  BoundReport rep = m.report();
  const double rule = stepsize_theorem3(problem.constants().mu, problem.constants().L, tau_max);
  if (!same_step(alpha, rule)) {
    rep.precondition_ok = false;
    rep.note = "precondition violated: step size differs from mu^3/(1536 L^6 tau_max^2)";
  }
  return rep;
}

BoundReport check_recursion_lemma8(std::span<const double> v, double p, double q, int d_max) {
  Lemma8Monitor m(p, q, d_max);
  for (double value : v) m.observe(value);
  return m.report();
}

void WindowMax::push(double value) {
  values_.push_back(value);
  if (static_cast<int>(values_.size()) > width_) values_.pop_front();
}

double WindowMax::max() const {
  double best = -kInf;
  for (double v : values_) best = std::max(best, v);
  return best;
}

Lemma8Monitor::Lemma8Monitor(double p, double q, int d_max) : tracker_("Lemma8") {
  if (p < 0.0 || q < 0.0 || d_max < 0) {
    throw std::invalid_argument("Lemma8 needs p, q >= 0 and d_max >= 0");
  }
  if (!(p + q < 1.0)) throw PreconditionError("Lemma8 needs p + q < 1");
  log_rho_ = std::log(p + q) / (1.0 + d_max);
  rho_ = std::exp(log_rho_);
}

void Lemma8Monitor::observe(double v) {
  if (index_ == 0) v0_ = v;
  tracker_.observe(index_, v, std::exp(static_cast<double>(index_) * log_rho_) * v0_);
  ++index_;
}

Theorem3Monitor::Theorem3Monitor(double mu, double L, int tau_max) : tracker_("Theorem3") {
  if (tau_max < 1) throw PreconditionError("Theorem3 needs tau_max >= 1");
  const double tau = tau_max;
  log_factor_ = std::log1p(-std::pow(mu, 4) / (3072.0 * pow6(L) * tau * tau));
  exponent_scale_ = 1.0 / (6.0 * tau);
}

void Theorem3Monitor::observe(long k, double r) {
  if (k == 1) r1_ = r;
  const double envelope = std::exp(static_cast<double>(k - 1) * exponent_scale_ * log_factor_) * r1_;
  tracker_.observe(k, r, envelope);
}

struct TrajectoryAudit::Impl {
  const SaddleProblem* problem;
  Algorithm algorithm;
  double alpha;
  long horizon;
  int tau_max;
  Vector saddle;

  std::optional<BoundTracker> lemma3;
  std::optional<BoundTracker> lemma4;
  std::optional<BoundTracker> lemma5;
  std::optional<BoundTracker> lemma7;
  std::optional<BoundTracker> recursion;
  std::optional<Lemma8Monitor> lemma8;
  std::optional<Theorem3Monitor> theorem3;
  std::optional<RestrictionSetH> h;
  bool theorem1 = false;
  bool theorem2 = false;
  bool left_certified_region = false;
  std::vector<std::string> skipped;

  // SC-SC bookkeeping.
  double lemma7_scale = 0.0;
  double recursion_contraction = 0.0;
  double recursion_coupling = 0.0;
  WindowMax r_window{1};
  WindowMax r_sq_window{1};
  double prev_r = 0.0;

  void observe_r(long k, double r) {
    if (recursion && k > 1) {
      const double rhs = recursion_contraction * prev_r * prev_r + recursion_coupling * r_sq_window.max();
      recursion->observe(k, r * r, rhs);
    }
    if (lemma8) lemma8->observe(r * r);
    if (theorem3) theorem3->observe(k, r);
    prev_r = r;
  }
};

TrajectoryAudit::TrajectoryAudit(const SaddleProblem& problem, Algorithm algorithm, double alpha,
                                 long horizon, int tau_max, const Vector& z1)
    : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.problem = &problem;
  s.algorithm = algorithm;
  s.alpha = alpha;
  s.horizon = horizon;
  s.tau_max = tau_max;
  s.saddle = problem.saddle();
  const ProblemConstants& c = problem.constants();
  const int tau = bound_tau(tau_max);
  const bool finite_g = std::isfinite(c.G);

  if (algorithm == Algorithm::kDeg) {
    if (finite_g && problem.bounded()) {
      s.lemma3.emplace("Lemma3");
      if (alpha > 1.0 / (2.0 * c.L)) s.lemma3->flag_precondition("alpha > 1/(2L)");
      if (static_cast<double>(horizon) >= c.L) {
        s.theorem1 = true;
      } else {
        s.skipped.push_back("Theorem1 (T < L)");
      }
    }
    return;
  }

  if (finite_g) {
    s.lemma4.emplace("Lemma4");
    if (problem.mu() == 0.0) {
      s.h = make_restriction_h(problem, z1);
      s.lemma5.emplace("Lemma5");
      const double limit =
          1.0 / (2.0 * std::sqrt(c.L * c.G * tau * static_cast<double>(horizon)));
      if (alpha > limit * (1.0 + 1e-12)) {
        s.lemma5->flag_precondition("alpha > 1/(2 sqrt(L G tau_max T))");
      }
      s.theorem2 = true;
    }
  }
  if (problem.mu() > 0.0 && !problem.domain_x().bounded() && !problem.domain_y().bounded()) {
    if (tau_max < 1) {
      s.skipped.push_back("SC-SC bounds (tau_max = 0)");
      return;
    }
    const double mu = c.mu;
    const double L = c.L;
    s.lemma7.emplace("Lemma7");
    s.lemma7_scale = 2.0 * alpha * L * tau_max * (4.0 * L * L / mu + 4.0 * L);
    s.recursion.emplace("SCSC-recursion");
    s.recursion_contraction = 1.0 - alpha * mu;
    s.recursion_coupling = alpha * alpha * 768.0 * pow6(L) / (mu * mu) * tau_max * tau_max;
    if (alpha > mu / (8.0 * L * L)) s.recursion->flag_precondition("alpha > mu/(8 L^2)");
    s.r_window = WindowMax(2 * tau_max + 1);
    s.r_sq_window = WindowMax(2 * tau_max + 1);
    const double p = s.recursion_contraction;
    const double q = s.recursion_coupling;
    if (p >= 0.0 && p + q < 1.0) {
      s.lemma8.emplace(p, q, 2 * tau_max);
    } else {
      s.skipped.push_back("Lemma8 (p + q >= 1)");
    }
    s.theorem3.emplace(mu, L, tau_max);
  }
}

TrajectoryAudit::~TrajectoryAudit() = default;
TrajectoryAudit::TrajectoryAudit(TrajectoryAudit&&) noexcept = default;
TrajectoryAudit& TrajectoryAudit::operator=(TrajectoryAudit&&) noexcept = default;

const std::optional<RestrictionSetH>& TrajectoryAudit::restriction() const { return impl_->h; }

void TrajectoryAudit::observe(const StepRecord& step) {
  Impl& s = *impl_;
  const SaddleProblem& p = *s.problem;
  const ProblemConstants& c = p.constants();
  const int tau = bound_tau(s.tau_max);
  if (s.lemma3) {
    s.lemma3->observe(step.k, step.max_error(), 6.0 * s.alpha * c.G * c.L * tau);
  }
  if (s.lemma4) {
    s.lemma4->observe(step.k, step.max_error(), 2.0 * s.alpha * c.L * c.G * tau);
    if (!s.left_certified_region && p.bounded() &&
        (!p.domain_x().contains(p.x_part(step.z), 1e-9) ||
         !p.domain_y().contains(p.y_part(step.z), 1e-9))) {
      s.left_certified_region = true;
      const std::string why = "iterates left the domain on which G is certified";
      s.lemma4->flag_precondition(why);
      if (s.lemma5) s.lemma5->flag_precondition(why);
    }
  }
  if (s.lemma5 && step.k <= s.horizon) {
    s.lemma5->observe(step.k, (step.z - s.saddle).squaredNorm(), s.h->radius_sq);
  }
  if (s.lemma7 || s.recursion || s.theorem3 || s.lemma8) {
    const double r = (step.z - s.saddle).norm();
    s.r_window.push(r);
    if (s.lemma7) s.lemma7->observe(step.k, step.max_error(), s.lemma7_scale * s.r_window.max());
    s.observe_r(step.k, r);
    s.r_sq_window.push(r * r);
  }
}

std::vector<BoundReport> TrajectoryAudit::finish(const Vector& z_last, const RunSummary& summary,
                                                 bool diverged) {
  Impl& s = *impl_;
  const SaddleProblem& p = *s.problem;
  std::vector<BoundReport> out;
  if (s.recursion || s.theorem3 || s.lemma8) {
    if (z_last.allFinite()) s.observe_r(summary.horizon + 1, (z_last - s.saddle).norm());
  }
  if (s.lemma3) out.push_back(s.lemma3->report());
  if (s.theorem1 && !diverged) out.push_back(check_theorem1(p, summary));
  if (s.lemma4) out.push_back(s.lemma4->report());
  if (s.lemma5) out.push_back(s.lemma5->report());
  if (s.theorem2 && !diverged) {
    BoundReport rep;
    try {
      rep = check_theorem2(p, summary);
    } catch (const std::invalid_argument&) {
      // The averaged point escaped H, which Lemma 5 rules out under its
      // preconditions; report it as a failed check.
      rep.name = "Theorem2";
      rep.satisfied = false;
      rep.empirical = kInf;
      rep.worst_margin = -kInf;
      rep.checked = 1;
      rep.note = "averaged iterate lies outside H";
    }
    if (s.lemma5 && !s.lemma5->report().precondition_ok) {
      rep.precondition_ok = false;
      if (!rep.note.empty()) rep.note += "; ";
      rep.note += s.lemma5->report().note;
    }
    out.push_back(rep);
  }
  if (s.lemma7) out.push_back(s.lemma7->report());
  if (s.recursion) out.push_back(s.recursion->report());
  if (s.lemma8) out.push_back(s.lemma8->report());
  if (s.theorem3) {
    BoundReport rep = s.theorem3->report();
    const ProblemConstants& c = p.constants();
    if (!same_step(s.alpha, stepsize_theorem3(c.mu, c.L, s.tau_max))) {
      rep.precondition_ok = false;
      rep.note = "precondition violated: step size differs from mu^3/(1536 L^6 tau_max^2)";
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace dmm
