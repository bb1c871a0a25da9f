#include "divgnn/stats.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "divgnn/errors.hpp"
#include "divgnn/report.hpp"

namespace divgnn {

int heterophily_bin(double share, int bins) {
  if (bins < 1) throw input_error("--bins must be positive");
  if (share < 0.0 || share > 1.0)
    throw input_error("heterophily share outside [0, 1]");
  int b = int(std::floor(share * double(bins)));
  return b >= bins ? bins - 1 : b;
}

namespace {

double graph_hetero_share(const Graph& g) {
  if (g.edges.empty()) return 0.0;
  EdgeSplit s = split_homo_hetero(g);
  return double(s.hetero_edges.size()) / double(g.edges.size());
}

}  // namespace

DatasetStats compute_stats(const Dataset& d, std::string dataset_name, int bins) {
  if (d.graphs.empty()) throw input_error("dataset has no graphs");
  if (bins < 1) throw input_error("--bins must be positive");

  DatasetStats s;
  s.dataset = std::move(dataset_name);
  s.graph_count = int(d.graphs.size());
  s.category_count = d.category_count;
  s.bins = bins;

  long long nodes = 0;
  for (const auto& g : d.graphs) nodes += g.num_nodes;
  s.avg_nodes = double(nodes) / double(d.graphs.size());
  s.gamma = pooled_heterophily_ratio(d);
  s.gamma_graph_mean = dataset_heterophily_ratio(d);

  if (d.task_kind == TaskKind::classification) {
    s.class_count = d.class_count;
    for (int c = 0; c < d.class_count; ++c) s.classes.push_back(c);
  } else {
    s.class_count = 0;
    s.classes.push_back(-1);
  }
  s.class_sizes.assign(s.classes.size(), 0);
  s.histograms.assign(s.classes.size(), std::vector<int>(std::size_t(bins), 0));

  for (const auto& g : d.graphs) {
    std::size_t slot = 0;
    if (d.task_kind == TaskKind::classification) {
      if (g.label < 0 || g.label >= d.class_count)
        throw input_error("graph " + g.graph_id + " has an out-of-range class label");
      slot = std::size_t(g.label);
    }
    s.class_sizes[slot] += 1;
    s.histograms[slot][std::size_t(heterophily_bin(graph_hetero_share(g), bins))] += 1;
  }
  return s;
}

void write_stats_csv(const DatasetStats& s, std::ostream& out) {
  out << "record,class,bin_lo,bin_hi,value\n";
  out << "graph_count,,,," << s.graph_count << "\n";
  out << "avg_nodes,,,," << fmt_double(s.avg_nodes) << "\n";
  out << "gamma,,,," << fmt_double(s.gamma) << "\n";
  out << "gamma_graph_mean,,,," << fmt_double(s.gamma_graph_mean) << "\n";
  out << "category_count,,,," << s.category_count << "\n";
  out << "class_count,,,," << s.class_count << "\n";
  for (std::size_t i = 0; i < s.classes.size(); ++i) {
    out << "class_size,";
    if (s.classes[i] >= 0) out << s.classes[i];
    out << ",,," << s.class_sizes[i] << "\n";
  }
  for (std::size_t i = 0; i < s.classes.size(); ++i)
    for (int b = 0; b < s.bins; ++b) {
      out << "hist,";
      if (s.classes[i] >= 0) out << s.classes[i];
      out << "," << fmt_double(double(b) / double(s.bins)) << ","
          << fmt_double(double(b + 1) / double(s.bins)) << ","
          << s.histograms[i][std::size_t(b)] << "\n";
    }
}

std::string format_stats_text(const DatasetStats& s) {
  std::ostringstream os;
  char buf[64];
  os << "dataset: " << s.dataset << "\n";
  os << "graphs: " << s.graph_count << "\n";
  std::snprintf(buf, sizeof(buf), "%.4f", s.avg_nodes);
  os << "avg nodes: " << buf << "\n";
  os << "node categories: " << s.category_count << "\n";
  if (s.class_count > 0) {
    os << "classes: " << s.class_count << " (sizes:";
    for (std::size_t i = 0; i < s.class_sizes.size(); ++i)
      os << " " << s.class_sizes[i];
    os << ")\n";
  } else {
    os << "task: regression\n";
  }
  std::snprintf(buf, sizeof(buf), "%.4f", s.gamma);
  os << "gamma: " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.4f", s.gamma_graph_mean);
  os << "gamma graph mean: " << buf << "\n";
  return os.str();
}

}  // namespace divgnn
