#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "divgnn/graph.hpp"

namespace divgnn {

struct ComplexityRow {
  int nodes = 0;
  long long edges = 0;
  double conv_seconds = 0.0;  // one forward+backward, eigendecomposition excluded
  double eig_seconds = 0.0;   // normalized Laplacian eigendecomposition alone
};

// Uniform random simple graph with exactly `edges` edges and `categories`
// uniformly drawn node categories.
Graph random_graph(int nodes, long long edges, int categories, std::uint64_t seed);

// Times the full divgnn forward+backward pass on random graphs of a fixed
// node count across an edge-count sweep. Per-graph spectral factorization is
// timed separately since it is computed once per graph, not per pass.
// Each timing is the median of `reps` runs.
std::vector<ComplexityRow> run_complexity(int nodes,
                                          const std::vector<long long>& edge_counts,
                                          int reps, std::uint64_t seed);

void write_complexity_csv(const std::vector<ComplexityRow>& rows, std::ostream& out);

// Least-squares slope of log(y) against log(x); all coordinates must be > 0.
double loglog_slope(const std::vector<std::pair<double, double>>& pts);

double conv_edge_slope(const std::vector<ComplexityRow>& rows);

}  // namespace divgnn
