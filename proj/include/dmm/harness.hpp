#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dmm/config.hpp"
#include "dmm/metrics.hpp"

namespace dmm {

enum class RunStatus { kCompleted, kDiverged };

std::string to_string(RunStatus status);

// One logged iteration. Row k carries z_k and the delay errors of the step
// taken from it; `gap` is the gap of the ergodic average over steps 1..k.
// A diverged run ends with a `flagged` row holding the offending iterate.
struct TrajectoryRow {
  long k = 0;
  Vector z;
  double r = 0.0;
  std::optional<double> e_norm;
  std::vector<double> errors;
  std::optional<int> tau;
  std::optional<int> tau_mid;
  std::optional<double> gap;
  bool flagged = false;

  bool operator==(const TrajectoryRow&) const = default;
};

struct RunRecord {
  std::vector<std::pair<std::string, std::string>> config;    // echo of the input keys
  std::vector<std::pair<std::string, std::string>> resolved;  // z1, alpha, constants, ...
  std::vector<TrajectoryRow> rows;
  RunStatus status = RunStatus::kCompleted;
  long iterations = 0;
  Vector final_iterate;
  Vector average_x;
  Vector average_y;
  std::optional<double> final_gap;
  std::vector<BoundReport> bounds;
  // Not serialized: the JSON output must be byte-identical across reruns.
  double wall_seconds = 0.0;

  bool operator==(const RunRecord& other) const;
};

// True when every bound whose preconditions hold is satisfied.
bool bounds_ok(const RunRecord& record);

// Step size named by the config, evaluated for the given problem.
double resolve_step(const RunConfig& config, const SaddleProblem& problem, int tau_max);

// Executes one run in memory. Throws ConfigError / PreconditionError.
RunRecord run(const RunConfig& config);

// Writes the CSV and JSON outputs the config asks for under `out_dir`;
// returns the paths written.
std::vector<std::string> write_outputs(const RunRecord& record, const RunConfig& config,
                                       const std::string& out_dir);

// Canned experiments: "thm1", "thm2", "thm3", "fig1-delayed", "fig1-undelayed".
// `T` and `tau_max` override the defaults when given.
RunConfig canned_config(const std::string& name, std::optional<long> T = std::nullopt,
                        std::optional<int> tau_max = std::nullopt, std::uint64_t seed = 0);

// Smallest horizon T such that the linear-rate envelope at k = T + 1 is
// below `fraction` of r_1.
long theorem3_horizon(double mu, double L, int tau_max, double fraction = 0.5);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Fig1Result {
  RunRecord delayed;
  RunRecord undelayed;
  std::vector<Series> series;  // |z_k - z*| against k for both runs
};

// Paired DEG runs on <x, y> (dim 2, unconstrained, alpha = 0.2) with unit
// delay and with no delay.
Fig1Result reproduce_fig1(long T = 2000);

enum class SweepAxis { kT, kTauMax, kAlpha };

SweepAxis parse_sweep_axis(const std::string& name);

struct SweepCell {
  std::string value;
  int replicates = 0;
  int diverged = 0;
  double mean_final_r = 0.0;
  std::optional<double> mean_gap;
  std::string bound_name;
  std::optional<double> mean_theoretical;
  bool bounds_ok = true;
};

// Applies one axis value to a copy of `base`.
RunConfig with_axis_value(const RunConfig& base, SweepAxis axis, const std::string& value);

// One cell per value, `replicates` runs per cell. Replicate j of cell i uses
// seed base.seed + i * replicates + j. Cells run concurrently.
std::vector<SweepCell> sweep(const RunConfig& base, SweepAxis axis,
                             const std::vector<std::string>& values, int replicates = 1);

}  // namespace dmm
