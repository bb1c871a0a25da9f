#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "divgnn/graph.hpp"

namespace divgnn {

// Corpus-level summary plus per-class histograms of the per-graph
// heterophilic edge share. `gamma` pools edges over the whole corpus;
// `gamma_graph_mean` averages the per-graph shares instead. The pooled value
// is the one comparable against the published dataset tables.
struct DatasetStats {
  std::string dataset;
  int graph_count = 0;
  double avg_nodes = 0.0;
  double gamma = 0.0;
  double gamma_graph_mean = 0.0;
  int category_count = 0;
  int class_count = 0;  // 0 for regression corpora
  int bins = 20;
  std::vector<int> classes;      // dense class ids; {-1} = all graphs
  std::vector<int> class_sizes;  // graphs per entry of `classes`
  std::vector<std::vector<int>> histograms;  // [class][bin] graph counts
};

// Shares in [0, 1] map to bins of width 1/bins; the last bin is closed so a
// share of exactly 1 lands in it.
int heterophily_bin(double share, int bins);

DatasetStats compute_stats(const Dataset& d, std::string dataset_name, int bins = 20);

// record,class,bin_lo,bin_hi,value rows; scalar records leave the class and
// bin columns empty.
void write_stats_csv(const DatasetStats& s, std::ostream& out);

std::string format_stats_text(const DatasetStats& s);

}  // namespace divgnn
