#include "dmm/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dmm {

using Json = nlohmann::ordered_json;

namespace {

// JSON has no inf/nan; those are written as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double to_double(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("unexpected numeric string '" + s + "'");
  }
  return j.get<double>();
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v(i)));
  return arr;
}

Vector vector_from(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(j[i]);
  return v;
}

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return to_double(j);
}

Json pairs_json(const std::vector<std::pair<std::string, std::string>>& kv) {
  Json obj = Json::object();
  for (const auto& [k, v] : kv) obj[k] = v;
  return obj;
}

std::vector<std::pair<std::string, std::string>> pairs_from(const Json& j) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& [k, v] : j.items()) kv.emplace_back(k, v.get<std::string>());
  return kv;
}

std::string csv_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string to_csv(const RunRecord& record) {
  std::ostringstream out;
  const Eigen::Index d = record.final_iterate.size();
  out << 'k';
  for (Eigen::Index i = 0; i < d; ++i) out << ",z_" << i;
  out << ",r,e_norm,gap\n";
  for (const TrajectoryRow& row : record.rows) {
    out << row.k;
    for (Eigen::Index i = 0; i < row.z.size(); ++i) out << ',' << format_double(row.z(i));
    out << ',' << format_double(row.r) << ',' << csv_number(row.e_norm) << ','
        << csv_number(row.gap) << '\n';
  }
  return out.str();
}

void emit_csv(const RunRecord& record, const std::string& path) { write_file(path, to_csv(record)); }

Json to_json(const BoundReport& b) {
  Json j;
  j["name"] = b.name;
  j["theoretical"] = number(b.theoretical);
  j["empirical"] = number(b.empirical);
  j["satisfied"] = b.satisfied;
  j["worst_margin"] = number(b.worst_margin);
  j["worst_index"] = b.worst_index;
  j["checked"] = b.checked;
  j["precondition_ok"] = b.precondition_ok;
  j["note"] = b.note;
  return j;
}

BoundReport bound_from_json(const Json& j) {
  BoundReport b;
  b.name = j.at("name").get<std::string>();
  b.theoretical = to_double(j.at("theoretical"));
  b.empirical = to_double(j.at("empirical"));
  b.satisfied = j.at("satisfied").get<bool>();
  b.worst_margin = to_double(j.at("worst_margin"));
  b.worst_index = j.at("worst_index").get<long>();
  b.checked = j.at("checked").get<long>();
  b.precondition_ok = j.at("precondition_ok").get<bool>();
  b.note = j.at("note").get<std::string>();
  return b;
}

Json to_json(const RunRecord& r) {
  Json j;
  j["config"] = pairs_json(r.config);
  j["resolved"] = pairs_json(r.resolved);
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["final_iterate"] = vector_json(r.final_iterate);
  j["average_x"] = vector_json(r.average_x);
  j["average_y"] = vector_json(r.average_y);
  j["final_gap"] = optional_number(r.final_gap);
  Json bounds = Json::array();
  for (const BoundReport& b : r.bounds) bounds.push_back(to_json(b));
  j["bounds"] = std::move(bounds);
  Json rows = Json::array();
  for (const TrajectoryRow& row : r.rows) {
    Json jr;
    jr["k"] = row.k;
    jr["z"] = vector_json(row.z);
    jr["r"] = number(row.r);
    jr["e_norm"] = optional_number(row.e_norm);
    Json errors = Json::array();
    for (double e : row.errors) errors.push_back(number(e));
    jr["errors"] = std::move(errors);
    jr["tau"] = row.tau ? Json(*row.tau) : Json(nullptr);
    jr["tau_mid"] = row.tau_mid ? Json(*row.tau_mid) : Json(nullptr);
    jr["gap"] = optional_number(row.gap);
    jr["flagged"] = row.flagged;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

RunRecord record_from_json(const Json& j) {
  RunRecord r;
  r.config = pairs_from(j.at("config"));
  r.resolved = pairs_from(j.at("resolved"));
  const std::string status = j.at("status").get<std::string>();
  if (status != "completed" && status != "diverged") {
    throw std::invalid_argument("unknown run status '" + status + "'");
  }
  r.status = status == "completed" ? RunStatus::kCompleted : RunStatus::kDiverged;
  r.iterations = j.at("iterations").get<long>();
  r.final_iterate = vector_from(j.at("final_iterate"));
  r.average_x = vector_from(j.at("average_x"));
  r.average_y = vector_from(j.at("average_y"));
  r.final_gap = optional_from(j.at("final_gap"));
  for (const Json& b : j.at("bounds")) r.bounds.push_back(bound_from_json(b));
  for (const Json& jr : j.at("rows")) {
    TrajectoryRow row;
    row.k = jr.at("k").get<long>();
    row.z = vector_from(jr.at("z"));
    row.r = to_double(jr.at("r"));
    row.e_norm = optional_from(jr.at("e_norm"));
    for (const Json& e : jr.at("errors")) row.errors.push_back(to_double(e));
    if (!jr.at("tau").is_null()) row.tau = jr.at("tau").get<int>();
    if (!jr.at("tau_mid").is_null()) row.tau_mid = jr.at("tau_mid").get<int>();
    row.gap = optional_from(jr.at("gap"));
    row.flagged = jr.at("flagged").get<bool>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

void emit_json(const RunRecord& record, const std::string& path) {
  write_file(path, to_json(record).dump(1) + "\n");
}

std::string to_svg(const std::vector<Series>& series, const std::string& title) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 180.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  static const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || y <= 0.0) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 1.0;
    ymax = 10.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  const double lo = std::floor(std::log10(ymin));
  double hi = std::ceil(std::log10(ymax));
  if (hi == lo) hi = lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kTop + (hi - std::log10(y)) / (hi - lo) * plot_h; };

  std::ostringstream out;
  out.precision(6);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
  }
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\"/>\n</g>\n";

  const int decades = static_cast<int>(hi - lo);
  const int step = std::max(1, decades / 10);
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); e += step) {
    const double y = py(std::pow(10.0, e));
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e
        << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << static_cast<long>(std::llround(xv)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">k</text>\n</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % (sizeof kColors / sizeof *kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y) || y <= 0.0) continue;
      out << (first ? "" : " ") << px(x) << ',' << py(y);
      first = false;
    }
    out << "\"/>\n";
    const double ly = kTop + 20.0 + 20.0 * static_cast<double>(i);
    out << "<line x1=\"" << kLeft + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + plot_w + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(series[i].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg(const std::vector<Series>& series, const std::string& path, const std::string& title) {
  write_file(path, to_svg(series, title));
}

std::string sweep_table_csv(const std::string& axis, const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << axis << ",replicates,diverged,mean_final_r,mean_gap,bound,mean_theoretical,bounds_ok\n";
  for (const SweepCell& c : cells) {
    out << c.value << ',' << c.replicates << ',' << c.diverged << ','
        << format_double(c.mean_final_r) << ',' << csv_number(c.mean_gap) << ',' << c.bound_name
        << ',' << csv_number(c.mean_theoretical) << ',' << (c.bounds_ok ? "true" : "false")
        << '\n';
  }
  return out.str();
}

std::vector<std::string> write_outputs(const RunRecord& record, const RunConfig& config,
                                       const std::string& out_dir) {
  std::vector<std::string> written;
  const std::filesystem::path dir(out_dir);
  if (config.write_csv) {
    const std::string path = (dir / (config.name + ".csv")).string();
    emit_csv(record, path);
    written.push_back(path);
  }
  if (config.write_json) {
    const std::string path = (dir / (config.name + ".json")).string();
    emit_json(record, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace dmm
