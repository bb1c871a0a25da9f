#pragma once

#include <string>
#include <utility>
#include <vector>

#include "divgnn/matrix.hpp"

namespace divgnn {

// Undirected graph with categorical node labels. Edges are stored once as
// (min, max) pairs; no self-loops, no duplicates.
struct Graph {
  int num_nodes = 0;
  std::vector<int> node_category;           // size num_nodes, values in [0, k)
  std::vector<std::pair<int, int>> edges;   // normalized unordered pairs
  int label = -1;                           // dense class id (classification)
  double target = 0.0;                      // raw numeric label (regression)
  std::string graph_id;
};

struct EdgeSplit {
  std::vector<std::pair<int, int>> homo_edges;
  std::vector<std::pair<int, int>> hetero_edges;
  std::vector<int> hetero_nodes;  // ascending; nodes with homophily ratio < 1
};

enum class TaskKind { classification, regression };

struct Dataset {
  std::vector<Graph> graphs;
  int category_count = 0;  // k = 1 + max category id
  int class_count = 0;     // classification only
  TaskKind task_kind = TaskKind::classification;
  // raw label value -> dense id mappings, kept for report readability
  std::vector<long> node_label_vocab;
  std::vector<long> class_vocab;
};

// Throws input_error if a structural invariant is broken (bad endpoint,
// self-loop, duplicate edge, category id < 0).
void validate_graph(const Graph& g);

std::vector<std::vector<int>> adjacency_lists(const Graph& g);
Matrix adjacency_matrix(const Graph& g);

// Fraction of v's neighbors sharing v's category; 1 for degree-0 nodes.
double node_homophily_ratio(const Graph& g, int v);

EdgeSplit split_homo_hetero(const Graph& g);

// Mean over graphs of the per-graph heterophilic edge fraction.
// Graphs with no edges contribute 0.
double dataset_heterophily_ratio(const Dataset& d);

// Pooled variant: heterophilic edge share over all edges of the dataset.
// This is the statistic that matches the published MUTAG/MSRC tables; the
// stats command reports both.
double pooled_heterophily_ratio(const Dataset& d);

Matrix one_hot_features(const Graph& g, int k);

}  // namespace divgnn
