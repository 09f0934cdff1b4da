#include "dmm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dmm/delays.hpp"
#include "dmm/error.hpp"

namespace dmm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view field) {
  const std::string s(trim(text));
  if (s.empty()) throw ConfigError(std::string(field), "expected a number");
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(std::string(field), "expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ConfigError(std::string(field), "expected a number, got '" + s + "'");
  return value;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view field) {
  text = trim(text);
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field), "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view field) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(field), "expected true or false");
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view field) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), field));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError(std::string(field), "expected a list of numbers");
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "name",  "problem", "dim", "domain", "mu",     "matrix",  "algorithm", "delay", "delay_mid",
      "step",  "T",       "z1",  "seed",   "stride", "out_dir", "csv",       "json"};
  return keys;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  const std::string k(trim(key));
  if (k == "name") {
    if (value.empty()) throw ConfigError(k, "must not be empty");
    c.name = value;
  } else if (k == "problem") {
    if (value != "bilinear" && value != "quadratic_cc" && value != "quadratic_scsc") {
      throw ConfigError(k, "expected bilinear, quadratic_cc or quadratic_scsc");
    }
    c.problem = value;
  } else if (k == "dim") {
    c.dim = parse_integer<int>(value, k);
  } else if (k == "domain") {
    c.domain = value;
  } else if (k == "mu") {
    c.mu = parse_double(value, k);
  } else if (k == "matrix") {
    c.matrix = value;
  } else if (k == "algorithm") {
    if (value == "dgda") {
      c.algorithm = Algorithm::kDgda;
    } else if (value == "deg") {
      c.algorithm = Algorithm::kDeg;
    } else {
      throw ConfigError(k, "expected dgda or deg");
    }
  } else if (k == "delay" || k == "delay_mid") {
    try {
      (void)DelaySchedule::Parse(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(k, e.what());
    }
    if (k == "delay") {
      c.delay = value;
    } else {
      c.delay_mid = std::string(value);
    }
  } else if (k == "step") {
    if (value != "thm1" && value != "thm2" && value != "thm3") {
      const double alpha = parse_double(value, k);
      if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError(k, "must be > 0");
    }
    c.step = value;
  } else if (k == "T") {
    c.T = parse_integer<long>(value, k);
  } else if (k == "z1") {
    if (value != "default") (void)parse_number_list(value, k);
    c.z1 = value;
  } else if (k == "seed") {
    c.seed = parse_integer<std::uint64_t>(value, k);
  } else if (k == "stride") {
    c.stride = parse_integer<long>(value, k);
  } else if (k == "out_dir") {
    c.out_dir = value;
  } else if (k == "csv") {
    c.write_csv = parse_bool(value, k);
  } else if (k == "json") {
    c.write_json = parse_bool(value, k);
  } else {
    throw ConfigError(k, "unknown key");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> to_key_values(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("name", c.name);
  kv.emplace_back("problem", c.problem);
  kv.emplace_back("dim", std::to_string(c.dim));
  kv.emplace_back("domain", c.domain);
  kv.emplace_back("mu", format_double(c.mu));
  kv.emplace_back("matrix", c.matrix);
  kv.emplace_back("algorithm", c.algorithm == Algorithm::kDeg ? "deg" : "dgda");
  kv.emplace_back("delay", c.delay);
  if (c.delay_mid) kv.emplace_back("delay_mid", *c.delay_mid);
  kv.emplace_back("step", c.step);
  kv.emplace_back("T", std::to_string(c.T));
  kv.emplace_back("z1", c.z1);
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("stride", std::to_string(c.stride));
  kv.emplace_back("out_dir", c.out_dir);
  kv.emplace_back("csv", c.write_csv ? "true" : "false");
  kv.emplace_back("json", c.write_json ? "true" : "false");
  return kv;
}

DomainSet parse_domain(std::string_view spec, int dim) {
  spec = trim(spec);
  if (spec == "all") return DomainSet::All(dim);
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  if (colon == std::string_view::npos || (head != "ball" && head != "box")) {
    throw ConfigError("domain", "expected all, ball:R or box:HW");
  }
  const double size = parse_double(spec.substr(colon + 1), "domain");
  if (!(size > 0.0) || !std::isfinite(size)) throw ConfigError("domain", "size must be > 0");
  return head == "ball" ? DomainSet::Ball(dim, size) : DomainSet::Box(dim, size);
}

Matrix parse_matrix(std::string_view spec, int dim) {
  spec = trim(spec);
  if (spec == "identity") return Matrix::Identity(dim, dim);
  if (spec.substr(0, 5) == "diag:") {
    const auto d = parse_number_list(spec.substr(5), "matrix");
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return a;
  }
  if (spec.substr(0, 5) == "rows:") {
    std::vector<std::vector<double>> rows;
    std::string_view rest = spec.substr(5);
    while (true) {
      const auto semi = rest.find(';');
      rows.push_back(parse_number_list(rest.substr(0, semi), "matrix"));
      if (semi == std::string_view::npos) break;
      rest = rest.substr(semi + 1);
    }
    const std::size_t cols = rows.front().size();
    Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw ConfigError("matrix", "rows have different lengths");
      for (std::size_t j = 0; j < cols; ++j) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    return a;
  }
  throw ConfigError("matrix", "expected identity, diag:... or rows:...");
}

void validate(const RunConfig& c) {
  if (c.T < 1) throw ConfigError("T", "must be >= 1");
  if (c.stride < 1) throw ConfigError("stride", "must be >= 1");
  if (c.dim < 1) throw ConfigError("dim", "must be >= 1");
  if (c.problem == "bilinear" && c.matrix != "identity") {
    throw ConfigError("matrix", "bilinear uses the identity coupling; use quadratic_cc");
  }
  if (c.problem == "quadratic_cc" && c.domain == "all") {
    throw ConfigError("domain", "quadratic_cc needs a bounded domain");
  }
  if (c.problem == "quadratic_scsc" && !(c.mu > 0.0)) throw ConfigError("mu", "must be > 0");
  if (c.algorithm == Algorithm::kDgda && c.delay_mid) {
    throw ConfigError("delay_mid", "only used by deg");
  }
  if (c.step == "thm1" && c.algorithm != Algorithm::kDeg) {
    throw ConfigError("step", "rule thm1 is the DEG rule; use algorithm = deg");
  }
  if (c.step == "thm2" && (c.algorithm != Algorithm::kDgda || c.problem == "quadratic_scsc")) {
    throw ConfigError("step", "rule thm2 applies to DGDA on convex-concave instances");
  }
  if (c.step == "thm3" && (c.algorithm != Algorithm::kDgda || c.problem != "quadratic_scsc")) {
    throw ConfigError("step", "rule thm3 applies to DGDA on quadratic_scsc");
  }
  if (c.step == "thm1" && c.domain == "all") {
    throw ConfigError("step", "rule thm1 needs bounded domains");
  }
  if ((c.step == "thm2") && c.domain == "all") {
    throw ConfigError("step", "rule thm2 needs finite G; declare a bounded domain");
  }
}

SaddleProblem make_problem(const RunConfig& c) {
  const Matrix a = parse_matrix(c.matrix, c.dim);
  try {
    if (c.problem == "bilinear") return SaddleProblem::Bilinear(c.dim, parse_domain(c.domain, c.dim));
    const auto dx = static_cast<int>(a.rows());
    const auto dy = static_cast<int>(a.cols());
    if (c.problem == "quadratic_cc") {
      return SaddleProblem::QuadraticCC(a, parse_domain(c.domain, dx), parse_domain(c.domain, dy));
    }
    return SaddleProblem::QuadraticSCSC(c.mu, a, parse_domain(c.domain, dx),
                                        parse_domain(c.domain, dy));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("problem", e.what());
  }
}

Vector default_initial_point(const SaddleProblem& problem) {
  auto inside = [](const DomainSet& d) -> Vector {
    switch (d.kind()) {
      case DomainKind::kBox:
        return d.center() + 0.5 * d.half_widths();
      case DomainKind::kBall:
        return d.center() +
               Vector::Constant(d.dim(), 0.5 * d.radius() / std::sqrt(static_cast<double>(d.dim())));
      case DomainKind::kAll:
        break;
    }
    return Vector::Ones(d.dim());
  };
  return problem.stack(inside(problem.domain_x()), inside(problem.domain_y()));
}

}  // namespace dmm
