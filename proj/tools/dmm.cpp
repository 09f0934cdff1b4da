// Command-line front end for the delayed saddle-point toolkit.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmm/config.hpp"
#include "dmm/error.hpp"
#include "dmm/harness.hpp"
#include "dmm/output.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBound = 2;

std::string resolve_out_dir(const std::optional<std::string>& flag, const std::string& fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DMM_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

void print_bounds(const dmm::RunRecord& record) {
  for (const dmm::BoundReport& b : record.bounds) {
    const char* verdict = !b.precondition_ok ? "SKIP" : (b.satisfied ? "ok" : "FAIL");
    std::cout << "  " << verdict << "  " << b.name << "  empirical=" << dmm::format_double(b.empirical)
              << "  bound=" << dmm::format_double(b.theoretical) << "  checked=" << b.checked;
    if (!b.note.empty()) std::cout << "  (" << b.note << ")";
    std::cout << '\n';
  }
}

void print_summary(const dmm::RunRecord& record, const std::string& name) {
  std::cout << name << ": " << dmm::to_string(record.status) << " after " << record.iterations
            << " iterations";
  if (!record.rows.empty()) {
    std::cout << ", final r=" << dmm::format_double(record.rows.back().r);
  }
  if (record.final_gap) std::cout << ", gap=" << dmm::format_double(*record.final_gap);
  std::cout << '\n';
  print_bounds(record);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(item);
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  if (!item.empty() || !out.empty()) out.push_back(item);
  return out;
}

// Config keys double as flags: `--T 500`, `--delay rand:3`, ...
struct Overrides {
  std::map<std::string, std::string> by_flag;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    for (const std::string& key : dmm::config_keys()) {
      if (key == "out_dir") continue;
      app->add_option("--" + key, by_flag[key], "override config key '" + key + "'");
    }
    app->add_option("--set", sets, "override any key, as key=value");
  }

  void apply(dmm::RunConfig& config, CLI::App* app) const {
    for (const auto& [key, value] : by_flag) {
      if (app->count("--" + key) > 0) dmm::apply_setting(config, key, value);
    }
    for (const std::string& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw dmm::ConfigError("set", "expected key=value, got '" + kv + "'");
      dmm::apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
};

int cmd_run(const std::string& path, const std::optional<std::string>& out, const Overrides& ov,
            CLI::App* app) {
  dmm::RunConfig config = dmm::load_config(path);
  ov.apply(config, app);
  dmm::validate(config);
  const dmm::RunRecord record = dmm::run(config);
  const std::string dir = resolve_out_dir(out, config.out_dir);
  for (const std::string& p : dmm::write_outputs(record, config, dir)) std::cout << "wrote " << p << '\n';
  print_summary(record, config.name);
  return dmm::bounds_ok(record) ? kExitOk : kExitBound;
}

int cmd_fig1(const std::optional<std::string>& out, long T) {
  const dmm::Fig1Result res = dmm::reproduce_fig1(T);
  const std::string dir = resolve_out_dir(out, "out");
  const auto delayed_cfg = dmm::canned_config("fig1-delayed", T);
  const auto undelayed_cfg = dmm::canned_config("fig1-undelayed", T);
  dmm::write_outputs(res.delayed, delayed_cfg, dir);
  dmm::write_outputs(res.undelayed, undelayed_cfg, dir);
  const std::string svg = (std::filesystem::path(dir) / "fig1.svg").string();
  dmm::emit_svg(res.series, svg, "DEG on <x, y>, step 0.2: distance to the saddle");
  print_summary(res.delayed, "fig1-delayed");
  print_summary(res.undelayed, "fig1-undelayed");
  std::cout << "wrote " << svg << '\n';
  return kExitOk;
}

int cmd_check(const std::string& which, std::optional<long> T, std::optional<int> tau,
              std::uint64_t seed, const std::optional<std::string>& out) {
  const dmm::RunConfig config = dmm::canned_config(which, T, tau, seed);
  const dmm::RunRecord record = dmm::run(config);
  dmm::write_outputs(record, config, resolve_out_dir(out, "out"));
  print_summary(record, which);
  return dmm::bounds_ok(record) ? kExitOk : kExitBound;
}

int cmd_sweep(const std::string& path, const std::string& axis, const std::string& values,
              int replicates, const std::optional<std::string>& out, const Overrides& ov,
              CLI::App* app) {
  dmm::RunConfig config = dmm::load_config(path);
  ov.apply(config, app);
  const std::vector<std::string> list = split_list(values);
  const auto cells = dmm::sweep(config, dmm::parse_sweep_axis(axis), list, replicates);
  const std::string table = dmm::sweep_table_csv(axis, cells);
  const std::string file =
      (std::filesystem::path(resolve_out_dir(out, config.out_dir)) / (config.name + "_sweep_" + axis + ".csv"))
          .string();
  dmm::write_file(file, table);
  std::cout << table << "wrote " << file << '\n';
  for (const dmm::SweepCell& c : cells) {
    if (!c.bounds_ok) return kExitBound;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delayed gradient descent-ascent and extra-gradient experiments"};
  app.require_subcommand(1);

  std::optional<std::string> out;

  auto* run_cmd = app.add_subcommand("run", "execute one experiment config");
  std::string run_path;
  run_cmd->add_option("config", run_path, "key=value config file")->required();
  run_cmd->add_option("--out", out, "output directory");
  Overrides run_over;
  run_over.attach(run_cmd);

  auto* fig_cmd = app.add_subcommand("reproduce-fig1", "delayed vs undelayed extra-gradient on <x, y>");
  long fig_T = 2000;
  fig_cmd->add_option("--out", out, "output directory");
  fig_cmd->add_option("--T", fig_T, "iterations per run")->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check-bounds", "run a canned bound check");
  std::string which;
  std::optional<long> check_T;
  std::optional<int> check_tau;
  std::uint64_t seed = 0;
  check_cmd->add_option("experiment", which, "thm1 | thm2 | thm3")
      ->required()
      ->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
  check_cmd->add_option("--T", check_T, "iterations");
  check_cmd->add_option("--tau-max", check_tau, "maximum delay");
  check_cmd->add_option("--seed", seed, "seed offset for random delays");
  check_cmd->add_option("--out", out, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "vary one axis of a config");
  std::string sweep_path;
  std::string axis;
  std::string values;
  int replicates = 1;
  sweep_cmd->add_option("config", sweep_path, "key=value config file")->required();
  sweep_cmd->add_option("--axis", axis, "T | tau_max | alpha")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();
  sweep_cmd->add_option("--replicates", replicates, "runs per value");
  sweep_cmd->add_option("--out", out, "output directory");
  Overrides sweep_over;
  sweep_over.attach(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(run_path, out, run_over, run_cmd);
    if (*fig_cmd) return cmd_fig1(out, fig_T);
    if (*check_cmd) return cmd_check(which, check_T, check_tau, seed, out);
    if (*sweep_cmd) return cmd_sweep(sweep_path, axis, values, replicates, out, sweep_over, sweep_cmd);
  } catch (const dmm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dmm::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
