#pragma once

#include <string>
#include <utility>
#include <vector>

namespace divgnn {

// Cross-validation result plus the configuration that produced it.
// wall_seconds is kept out of the serialized file by default so reruns with
// the same config and seed write byte-identical reports.
struct Report {
  std::string dataset;
  std::string model;
  std::string metric;  // accuracy | mae | auc
  std::vector<std::pair<std::string, std::string>> config;  // ordered snapshot
  std::vector<double> fold_values;
  double mean = 0.0;
  double stddev = 0.0;  // population std over folds
  double wall_seconds = 0.0;
};

// %.17g rendering: round-trips to the same double through strtod
std::string fmt_double(double v);

// Computes mean/std; empty fold list -> input_error.
Report make_report(std::string dataset, std::string model, std::string metric,
                   std::vector<std::pair<std::string, std::string>> config,
                   std::vector<double> fold_values);

// "91.52±6.34" for accuracy/auc (percent, 2 dp), raw 4 dp for mae
std::string format_display(const std::string& metric, double mean, double stddev);

std::string serialize_report(const Report& r, bool include_timing = false);
void export_report(const Report& r, const std::string& path, bool include_timing = false);
Report parse_report(const std::string& path);

bool reports_equal(const Report& a, const Report& b);

}  // namespace divgnn
