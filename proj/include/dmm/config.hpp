#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dmm/algorithms.hpp"
#include "dmm/problems.hpp"

namespace dmm {

// One experiment. The text form is one `key = value` per line; `#` starts a
// comment. Keys (defaults in brackets):
//
//   name       output file stem                                   [run]
//   problem    bilinear | quadratic_cc | quadratic_scsc           [bilinear]
//   dim        dimension of x and y (identity/diag couplings)     [2]
//   domain     all | ball:R | box:HW, centered at the origin      [all]
//   mu         strong convexity modulus (quadratic_scsc)          [1]
//   matrix     identity | diag:a,b,... | rows:a,b;c,d             [identity]
//   algorithm  dgda | deg                                         [dgda]
//   delay      zero | const:t | cycle:t1,t2,.. | rand:t[:seed=s]  [zero]
//   delay_mid  DEG endpoint schedule; defaults to `delay`         []
//   step       positive number, or thm1 | thm2 | thm3             [0.1]
//   T          iterations                                         [100]
//   z1         default | comma-separated stacked [x; y]           [default]
//   seed       added to the seed of random delay schedules        [0]
//   stride     log every stride-th iteration                      [1]
//   out_dir    output directory                                   [out]
//   csv, json  write trajectory CSV / record JSON (true | false)  [true]
struct RunConfig {
  std::string name = "run";
  std::string problem = "bilinear";
  int dim = 2;
  std::string domain = "all";
  double mu = 1.0;
  std::string matrix = "identity";
  Algorithm algorithm = Algorithm::kDgda;
  std::string delay = "zero";
  std::optional<std::string> delay_mid;
  std::string step = "0.1";
  long T = 100;
  std::string z1 = "default";
  std::uint64_t seed = 0;
  long stride = 1;
  std::string out_dir = "out";
  bool write_csv = true;
  bool write_json = true;
};

const std::vector<std::string>& config_keys();

// Sets one key; throws ConfigError naming the key on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Per-key parsing only; cross-field checks happen in validate() so that CLI
// overrides can be applied first.

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Ordered key-value echo; parse_config of the joined lines reproduces `config`.
std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& config);

// Cross-field checks (T >= 1, stride >= 1, rule compatible with algorithm and
// instance class, ...). Throws ConfigError.
void validate(const RunConfig& config);

SaddleProblem make_problem(const RunConfig& config);
DomainSet parse_domain(std::string_view spec, int dim);
Matrix parse_matrix(std::string_view spec, int dim);
std::vector<double> parse_number_list(std::string_view text, std::string_view field);

// All-ones direction scaled into each domain: center + hw/2 for boxes,
// center + r/2 * 1/sqrt(d) for balls, all ones when unconstrained.
Vector default_initial_point(const SaddleProblem& problem);

std::string format_double(double value);

}  // namespace dmm
