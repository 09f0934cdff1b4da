#include "dmm/harness.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>
#include <variant>

#include "dmm/delays.hpp"
#include "dmm/error.hpp"

namespace dmm {

namespace {

DelaySchedule make_schedule(const std::string& spec, std::uint64_t seed) {
  DelaySchedule s = DelaySchedule::Parse(spec, 0);
  if (s.kind() == DelayKind::kUniformRandom) {
    return DelaySchedule::UniformRandom(s.tau_max(), s.seed() + seed);
  }
  return s;
}

Vector resolve_z1(const RunConfig& config, const SaddleProblem& problem) {
  if (config.z1 == "default") return default_initial_point(problem);
  const auto values = parse_number_list(config.z1, "z1");
  if (static_cast<int>(values.size()) != problem.dim()) {
    throw ConfigError("z1", "expected " + std::to_string(problem.dim()) + " values");
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v(i));
  }
  return out;
}

// Gap used for the trajectory column and the final summary.
class GapEvaluator {
 public:
  GapEvaluator(const SaddleProblem& problem, Algorithm algorithm,
               const std::optional<RestrictionSetH>& h)
      : problem_(problem) {
    if (algorithm == Algorithm::kDgda && problem.mu() == 0.0) {
      if (h) restriction_ = h->as_ball();
      enabled_ = h.has_value();
    } else {
      enabled_ = problem.bounded() || problem.mu() > 0.0;
    }
  }

  std::optional<double> operator()(const Vector& xbar, const Vector& ybar) const {
    if (!enabled_) return std::nullopt;
    try {
      return duality_gap(problem_, xbar, ybar, restriction_);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

 private:
  const SaddleProblem& problem_;
  std::optional<DomainSet> restriction_;
  bool enabled_ = false;
};

}  // namespace

std::string to_string(RunStatus status) {
  return status == RunStatus::kCompleted ? "completed" : "diverged";
}

bool RunRecord::operator==(const RunRecord& o) const {
  return config == o.config && resolved == o.resolved && rows == o.rows && status == o.status &&
         iterations == o.iterations && final_iterate == o.final_iterate &&
         average_x == o.average_x && average_y == o.average_y && final_gap == o.final_gap &&
         bounds == o.bounds;
}

bool bounds_ok(const RunRecord& record) {
  for (const BoundReport& b : record.bounds) {
    if (b.precondition_ok && !b.satisfied) return false;
  }
  return true;
}

double resolve_step(const RunConfig& config, const SaddleProblem& problem, int tau_max) {
  const ProblemConstants& c = problem.constants();
  // Zero-delay runs use the tau_max = 1 rule.
  const int tau = bound_tau(tau_max);
  if (config.step == "thm1") return stepsize_theorem1(c.G, c.L, tau, config.T);
  if (config.step == "thm2") return stepsize_theorem2(c.G, c.L, tau, config.T);
  if (config.step == "thm3") return stepsize_theorem3(c.mu, c.L, tau);
  return std::stod(config.step);
}

RunRecord run(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  validate(config);
  const SaddleProblem problem = make_problem(config);
  DelaySchedule main_schedule = make_schedule(config.delay, config.seed);
  DelaySchedule mid_schedule = make_schedule(config.delay_mid.value_or(config.delay), config.seed);
  const bool deg = config.algorithm == Algorithm::kDeg;
  const int tau_max =
      deg ? std::max(main_schedule.tau_max(), mid_schedule.tau_max()) : main_schedule.tau_max();
  const double alpha = resolve_step(config, problem, tau_max);
  const Vector z1 = resolve_z1(config, problem);

  RunRecord record;
  record.config = to_key_values(config);
  const ProblemConstants& c = problem.constants();
  record.resolved = {
      {"problem", problem.describe()},
      {"z1", join(z1)},
      {"alpha", format_double(alpha)},
      {"tau_max", std::to_string(tau_max)},
      {"delay", main_schedule.describe()},
      {"G", format_double(c.G)},
      {"G_raw", format_double(c.G_raw)},
      {"L", format_double(c.L)},
      {"L_raw", format_double(c.L_raw)},
      {"mu", format_double(c.mu)},
      {"D", format_double(c.D)},
      {"averaged", deg ? "midpoints" : "iterates"},
  };
  if (deg) record.resolved.emplace_back("delay_mid", mid_schedule.describe());

  std::variant<DgdaSolver, DegSolver> solver =
      deg ? std::variant<DgdaSolver, DegSolver>(
                std::in_place_type<DegSolver>, problem, std::move(main_schedule),
                std::move(mid_schedule), alpha, z1)
          : std::variant<DgdaSolver, DegSolver>(std::in_place_type<DgdaSolver>, problem,
                                                std::move(main_schedule), alpha, z1);

  TrajectoryAudit audit(problem, config.algorithm, alpha, config.T, tau_max, z1);
  const GapEvaluator gap(problem, config.algorithm, audit.restriction());
  RunningAverage average(problem.dim());
  const Vector saddle = problem.saddle();

  for (long k = 1; k <= config.T; ++k) {
    const StepRecord step = std::visit([](auto& s) { return s.step(); }, solver);
    audit.observe(step);
    average.add(step.midpoint ? *step.midpoint : step.z);
    record.iterations = k;
    const bool log_row = (k - 1) % config.stride == 0 || step.diverged;
    if (log_row) {
      TrajectoryRow row;
      row.k = k;
      row.z = step.z;
      row.r = (step.z - saddle).norm();
      row.e_norm = step.max_error();
      row.errors = step.error_norms;
      row.tau = step.tau;
      row.tau_mid = step.tau_mid;
      const Vector mean = average.mean();
      row.gap = gap(problem.x_part(mean), problem.y_part(mean));
      record.rows.push_back(std::move(row));
    }
    if (step.diverged) {
      record.status = RunStatus::kDiverged;
      TrajectoryRow last;
      last.k = k + 1;
      last.z = std::visit([](auto& s) -> Vector { return s.iterate(); }, solver);
      last.r = (last.z - saddle).norm();
      last.flagged = true;
      record.rows.push_back(std::move(last));
      break;
    }
  }

  record.final_iterate = std::visit([](auto& s) -> Vector { return s.iterate(); }, solver);
  const Vector mean = average.mean();
  record.average_x = problem.x_part(mean);
  record.average_y = problem.y_part(mean);
  const bool diverged = record.status == RunStatus::kDiverged;
  if (!diverged) record.final_gap = gap(record.average_x, record.average_y);

  RunSummary summary;
  summary.algorithm = config.algorithm;
  summary.alpha = alpha;
  summary.horizon = record.iterations;
  summary.tau_max = tau_max;
  summary.z1 = z1;
  summary.average_x = record.average_x;
  summary.average_y = record.average_y;
  record.bounds = audit.finish(record.final_iterate, summary, diverged);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

long theorem3_horizon(double mu, double L, int tau_max, double fraction) {
  if (tau_max < 1) throw PreconditionError("the envelope needs tau_max >= 1");
  const double tau = tau_max;
  const double log_factor = std::log1p(-std::pow(mu, 4) / (3072.0 * std::pow(L, 6) * tau * tau));
  // envelope(k) = exp((k - 1) / (6 tau) * log_factor) r_1 < fraction r_1
  const double needed = std::log(fraction) / log_factor * 6.0 * tau;
  long k_minus_1 = static_cast<long>(std::floor(needed)) + 1;
  while (k_minus_1 > 1 &&
         theorem3_envelope(mu, L, tau_max, k_minus_1, 1.0) < fraction) {
    --k_minus_1;
  }
  while (theorem3_envelope(mu, L, tau_max, k_minus_1 + 1, 1.0) >= fraction) ++k_minus_1;
  return k_minus_1;  // T with k = T + 1 the first index below the fraction
}

RunConfig canned_config(const std::string& name, std::optional<long> T,
                        std::optional<int> tau_max, std::uint64_t seed) {
  RunConfig c;
  c.seed = seed;
  c.name = name;
  if (name == "thm1") {
    c.problem = "bilinear";
    c.dim = 2;
    c.domain = "ball:1";
    c.algorithm = Algorithm::kDeg;
    c.delay = "rand:" + std::to_string(tau_max.value_or(1));
    c.step = "thm1";
    c.T = T.value_or(1000);
    c.stride = 10;
  } else if (name == "thm2") {
    c.problem = "bilinear";
    c.dim = 2;
    c.domain = "ball:1";
    c.algorithm = Algorithm::kDgda;
    c.delay = "rand:" + std::to_string(tau_max.value_or(2));
    c.step = "thm2";
    c.T = T.value_or(2000);
    c.stride = 10;
  } else if (name == "thm3") {
    c.problem = "quadratic_scsc";
    c.dim = 1;
    c.mu = 1.0;
    c.matrix = "identity";
    c.algorithm = Algorithm::kDgda;
    const int tau = tau_max.value_or(1);
    c.delay = "rand:" + std::to_string(tau);
    c.step = "thm3";
    if (T) {
      c.T = *T;
    } else {
      const SaddleProblem p = make_problem(c);
      c.T = theorem3_horizon(p.constants().mu, p.constants().L, tau);
    }
    c.stride = std::max(1L, c.T / 1000);
  } else if (name == "fig1-delayed" || name == "fig1-undelayed") {
    c.problem = "bilinear";
    c.dim = 2;
    c.domain = "all";
    c.algorithm = Algorithm::kDeg;
    c.delay = name == "fig1-delayed" ? "const:1" : "zero";
    c.step = "0.2";
    c.T = T.value_or(2000);
    c.z1 = "0.5,0.5,0.5,0.5";
  } else {
    throw ConfigError("experiment", "unknown canned experiment '" + name + "'");
  }
  return c;
}

Fig1Result reproduce_fig1(long T) {
  Fig1Result out;
  out.delayed = run(canned_config("fig1-delayed", T));
  out.undelayed = run(canned_config("fig1-undelayed", T));
  auto series_of = [](const RunRecord& r, const std::string& label) {
    Series s;
    s.label = label;
    for (const TrajectoryRow& row : r.rows) s.points.emplace_back(static_cast<double>(row.k), row.r);
    return s;
  };
  out.series.push_back(series_of(out.delayed, "DEG, delay 1"));
  out.series.push_back(series_of(out.undelayed, "DEG, no delay"));
  return out;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "T") return SweepAxis::kT;
  if (name == "tau_max" || name == "tau-max") return SweepAxis::kTauMax;
  if (name == "alpha" || name == "step") return SweepAxis::kAlpha;
  throw ConfigError("axis", "expected T, tau_max or alpha");
}

RunConfig with_axis_value(const RunConfig& base, SweepAxis axis, const std::string& value) {
  RunConfig c = base;
  switch (axis) {
    case SweepAxis::kT:
      apply_setting(c, "T", value);
      break;
    case SweepAxis::kAlpha:
      apply_setting(c, "step", value);
      break;
    case SweepAxis::kTauMax: {
      auto retarget = [&](const std::string& spec, const char* field) {
        const DelaySchedule s = DelaySchedule::Parse(spec);
        switch (s.kind()) {
          case DelayKind::kUniformRandom: {
            const auto second = spec.find(':', 5);
            return "rand:" + value + (second == std::string::npos ? "" : spec.substr(second));
          }
          case DelayKind::kConstant:
          case DelayKind::kZero:
            return "const:" + value;
          case DelayKind::kCyclic:
            break;
        }
        throw ConfigError(field, "tau_max sweeps need a const or rand schedule");
      };
      apply_setting(c, "delay", retarget(base.delay, "delay"));
      if (base.delay_mid) apply_setting(c, "delay_mid", retarget(*base.delay_mid, "delay_mid"));
      break;
    }
  }
  return c;
}

std::vector<SweepCell> sweep(const RunConfig& base, SweepAxis axis,
                             const std::vector<std::string>& values, int replicates) {
  if (values.empty()) throw ConfigError("values", "sweep needs at least one value");
  if (replicates < 1) throw ConfigError("replicates", "must be >= 1");

  std::vector<RunConfig> configs;
  for (const std::string& v : values) configs.push_back(with_axis_value(base, axis, v));
  for (const RunConfig& c : configs) validate(c);

  std::vector<std::future<SweepCell>> futures;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      SweepCell cell;
      cell.value = values[i];
      cell.replicates = replicates;
      double gap_sum = 0.0;
      double theo_sum = 0.0;
      int gap_count = 0;
      int theo_count = 0;
      for (int j = 0; j < replicates; ++j) {
        RunConfig c = configs[i];
        c.seed = base.seed + static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(replicates) +
                 static_cast<std::uint64_t>(j);
        const RunRecord r = run(c);
        const SaddleProblem problem = make_problem(c);
        if (r.status == RunStatus::kDiverged) ++cell.diverged;
        cell.mean_final_r += distance_to_saddle(problem, r.final_iterate);
        if (r.final_gap) {
          gap_sum += *r.final_gap;
          ++gap_count;
        }
        for (const BoundReport& b : r.bounds) {
          if (b.name == "Theorem1" || b.name == "Theorem2") {
            cell.bound_name = b.name;
            theo_sum += b.theoretical;
            ++theo_count;
          }
        }
        cell.bounds_ok = cell.bounds_ok && bounds_ok(r);
      }
      cell.mean_final_r /= replicates;
      if (gap_count) cell.mean_gap = gap_sum / gap_count;
      if (theo_count) cell.mean_theoretical = theo_sum / theo_count;
      return cell;
    }));
  }
  std::vector<SweepCell> cells;
  for (auto& f : futures) cells.push_back(f.get());
  return cells;
}

}  // namespace dmm
