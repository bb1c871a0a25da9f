#include "divgnn/complexity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

#include "divgnn/errors.hpp"
#include "divgnn/model.hpp"
#include "divgnn/report.hpp"
#include "divgnn/rng.hpp"
#include "divgnn/spectral.hpp"

namespace divgnn {

Graph random_graph(int nodes, long long edges, int categories, std::uint64_t seed) {
  if (nodes < 2) throw input_error("random graph needs at least 2 nodes");
  if (categories < 1) throw input_error("random graph needs at least 1 category");
  long long max_edges = (long long)(nodes) * (nodes - 1) / 2;
  if (edges < 0 || edges > max_edges)
    throw input_error("edge count outside [0, n(n-1)/2]");

  Rng rng(seed);
  Graph g;
  g.num_nodes = nodes;
  g.graph_id = "synthetic";
  for (int v = 0; v < nodes; ++v)
    g.node_category.push_back(int(rng.below(std::uint64_t(categories))));
  g.label = int(rng.below(2));

  std::set<std::pair<int, int>> seen;
  while ((long long)seen.size() < edges) {
    int a = int(rng.below(std::uint64_t(nodes)));
    int b = int(rng.below(std::uint64_t(nodes)));
    if (a == b) continue;
    seen.emplace(std::min(a, b), std::max(a, b));
  }
  g.edges.assign(seen.begin(), seen.end());
  validate_graph(g);
  return g;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<ComplexityRow> run_complexity(int nodes,
                                          const std::vector<long long>& edge_counts,
                                          int reps, std::uint64_t seed) {
  if (reps < 1) throw input_error("--reps must be positive");
  const int categories = 5;

  ModelConfig mc;
  mc.kind = ModelKind::divgnn;
  // replication would change the edge count under measurement
  mc.replication = false;
  mc.validate();

  std::vector<ComplexityRow> rows;
  for (std::size_t ei = 0; ei < edge_counts.size(); ++ei) {
    Dataset d;
    d.category_count = categories;
    d.class_count = 2;
    d.task_kind = TaskKind::classification;
    d.graphs.push_back(
        random_graph(nodes, edge_counts[ei], categories, derive_seed(seed, ei)));

    std::vector<double> eig_times;
    Matrix adj = adjacency_matrix(d.graphs[0]);
    Matrix lap = normalized_laplacian(adj);
    for (int r = 0; r < reps; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      EigenPair ep = sym_eigendecompose(lap);
      eig_times.push_back(seconds_since(t0));
      if (ep.lambda.empty()) throw numeric_error("empty spectrum");
    }

    CacheBundle cb = build_caches(d, mc);
    Rng rng(derive_seed(seed, 0xC0DE + ei));
    ParamStore P = build_params(mc, cb.info, rng);

    // warm-up pass keeps one-time allocation effects out of the timings
    {
      ad::Value loss = model_loss(model_forward(cb.graphs[0], P, mc, cb.info),
                                  cb.graphs[0], cb.info);
      ad::backward(loss);
      P.zero_grads();
    }
    std::vector<double> conv_times;
    for (int r = 0; r < reps; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      ad::Value loss = model_loss(model_forward(cb.graphs[0], P, mc, cb.info),
                                  cb.graphs[0], cb.info);
      ad::backward(loss);
      conv_times.push_back(seconds_since(t0));
      P.zero_grads();
    }

    ComplexityRow row;
    row.nodes = nodes;
    row.edges = edge_counts[ei];
    row.conv_seconds = median(conv_times);
    row.eig_seconds = median(eig_times);
    rows.push_back(row);
  }
  return rows;
}

void write_complexity_csv(const std::vector<ComplexityRow>& rows, std::ostream& out) {
  out << "nodes,edges,conv_seconds,eig_seconds\n";
  for (const auto& r : rows)
    out << r.nodes << "," << r.edges << "," << fmt_double(r.conv_seconds) << ","
        << fmt_double(r.eig_seconds) << "\n";
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw input_error("slope needs at least two points");
  double sx = 0, sy = 0;
  for (auto [x, y] : pts) {
    if (x <= 0.0 || y <= 0.0) throw input_error("log-log slope needs positive data");
    sx += std::log(x);
    sy += std::log(y);
  }
  double mx = sx / double(pts.size()), my = sy / double(pts.size());
  double num = 0, den = 0;
  for (auto [x, y] : pts) {
    double dx = std::log(x) - mx;
    num += dx * (std::log(y) - my);
    den += dx * dx;
  }
  if (den == 0.0) throw input_error("log-log slope needs distinct x values");
  return num / den;
}

double conv_edge_slope(const std::vector<ComplexityRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    pts.emplace_back(double(r.edges), r.conv_seconds);
  return loglog_slope(pts);
}

}  // namespace divgnn
