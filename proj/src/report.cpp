#include "divgnn/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "divgnn/errors.hpp"

namespace divgnn {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static double parse_double(const std::string& s, const std::string& where) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    throw format_error(where + ": bad number '" + s + "'");
  return v;
}

Report make_report(std::string dataset, std::string model, std::string metric,
                   std::vector<std::pair<std::string, std::string>> config,
                   std::vector<double> fold_values) {
  if (fold_values.empty()) throw input_error("report with no fold values");
  Report r;
  r.dataset = std::move(dataset);
  r.model = std::move(model);
  r.metric = std::move(metric);
  r.config = std::move(config);
  r.fold_values = std::move(fold_values);
  double s = 0.0;
  for (double v : r.fold_values) s += v;
  r.mean = s / double(r.fold_values.size());
  double q = 0.0;
  for (double v : r.fold_values) q += (v - r.mean) * (v - r.mean);
  r.stddev = std::sqrt(q / double(r.fold_values.size()));
  return r;
}

std::string format_display(const std::string& metric, double mean, double stddev) {
  char buf[64];
  if (metric == "mae")
    std::snprintf(buf, sizeof buf, "%.4f±%.4f", mean, stddev);
  else
    std::snprintf(buf, sizeof buf, "%.2f±%.2f", mean * 100.0, stddev * 100.0);
  return buf;
}

std::string serialize_report(const Report& r, bool include_timing) {
  std::ostringstream out;
  out << "divgnn report v1\n";
  out << "dataset=" << r.dataset << "\n";
  out << "model=" << r.model << "\n";
  out << "metric=" << r.metric << "\n";
  for (const auto& [k, v] : r.config) out << "config." << k << "=" << v << "\n";
  out << "fold_values=";
  for (std::size_t i = 0; i < r.fold_values.size(); ++i) {
    if (i) out << ",";
    out << fmt_double(r.fold_values[i]);
  }
  out << "\n";
  out << "mean=" << fmt_double(r.mean) << "\n";
  out << "std=" << fmt_double(r.stddev) << "\n";
  out << "display=" << format_display(r.metric, r.mean, r.stddev) << "\n";
  if (include_timing) out << "wall_seconds=" << fmt_double(r.wall_seconds) << "\n";
  return out.str();
}

void export_report(const Report& r, const std::string& path, bool include_timing) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << serialize_report(r, include_timing);
  if (!out) throw io_error("write failed: " + path);
}

Report parse_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "divgnn report v1")
    throw format_error(path + ": not a report file");
  Report r;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw format_error(path + ": bad line '" + line + "'");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "dataset") r.dataset = val;
    else if (key == "model") r.model = val;
    else if (key == "metric") r.metric = val;
    else if (key.rfind("config.", 0) == 0) r.config.emplace_back(key.substr(7), val);
    else if (key == "fold_values") {
      std::istringstream iss(val);
      std::string tok;
      while (std::getline(iss, tok, ','))
        r.fold_values.push_back(parse_double(tok, path));
    } else if (key == "mean") r.mean = parse_double(val, path);
    else if (key == "std") r.stddev = parse_double(val, path);
    else if (key == "wall_seconds") r.wall_seconds = parse_double(val, path);
    else if (key == "display") { /* derived field, recomputable */ }
    else throw format_error(path + ": unknown key '" + key + "'");
  }
  if (r.fold_values.empty()) throw format_error(path + ": no fold values");
  return r;
}

bool reports_equal(const Report& a, const Report& b) {
  return a.dataset == b.dataset && a.model == b.model && a.metric == b.metric &&
         a.config == b.config && a.fold_values == b.fold_values &&
         a.mean == b.mean && a.stddev == b.stddev;
}

}  // namespace divgnn
