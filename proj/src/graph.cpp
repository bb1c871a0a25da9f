#include "divgnn/graph.hpp"

#include <algorithm>
#include <set>

#include "divgnn/errors.hpp"

namespace divgnn {

void validate_graph(const Graph& g) {
  if ((int)g.node_category.size() != g.num_nodes)
    throw input_error("graph " + g.graph_id + ": category list size != num_nodes");
  for (int c : g.node_category)
    if (c < 0) throw input_error("graph " + g.graph_id + ": negative category id");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.num_nodes || v >= g.num_nodes)
      throw input_error("graph " + g.graph_id + ": edge endpoint out of range");
    if (u == v) throw input_error("graph " + g.graph_id + ": self-loop");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw input_error("graph " + g.graph_id + ": duplicate edge");
  }
}

std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.num_nodes);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

Matrix adjacency_matrix(const Graph& g) {
  Matrix m(g.num_nodes, g.num_nodes);
  for (auto [u, v] : g.edges) {
    m(u, v) = 1.0;
    m(v, u) = 1.0;
  }
  return m;
}

double node_homophily_ratio(const Graph& g, int v) {
  if (v < 0 || v >= g.num_nodes) throw input_error("node index out of range");
  int deg = 0, same = 0;
  for (auto [a, b] : g.edges) {
    int u = -1;
    if (a == v) u = b;
    else if (b == v) u = a;
    else continue;
    ++deg;
    if (g.node_category[u] == g.node_category[v]) ++same;
  }
  if (deg == 0) return 1.0;  // vacuously homophilic, excluded from V^hetero
  return double(same) / double(deg);
}

EdgeSplit split_homo_hetero(const Graph& g) {
  EdgeSplit s;
  std::vector<int> deg(g.num_nodes, 0), same(g.num_nodes, 0);
  for (auto e : g.edges) {
    auto [u, v] = e;
    ++deg[u];
    ++deg[v];
    if (g.node_category[u] == g.node_category[v]) {
      s.homo_edges.push_back(e);
      ++same[u];
      ++same[v];
    } else {
      s.hetero_edges.push_back(e);
    }
  }
  for (int v = 0; v < g.num_nodes; ++v)
    if (deg[v] > 0 && same[v] < deg[v]) s.hetero_nodes.push_back(v);
  return s;
}

double dataset_heterophily_ratio(const Dataset& d) {
  if (d.graphs.empty()) throw input_error("heterophily ratio of an empty dataset");
  double acc = 0.0;
  for (const Graph& g : d.graphs) {
    if (g.edges.empty()) continue;  // contributes 0
    int het = 0;
    for (auto [u, v] : g.edges)
      if (g.node_category[u] != g.node_category[v]) ++het;
    acc += double(het) / double(g.edges.size());
  }
  return acc / double(d.graphs.size());
}

double pooled_heterophily_ratio(const Dataset& d) {
  if (d.graphs.empty()) throw input_error("heterophily ratio of an empty dataset");
  long long het = 0, tot = 0;
  for (const Graph& g : d.graphs) {
    tot += (long long)g.edges.size();
    for (auto [u, v] : g.edges)
      if (g.node_category[u] != g.node_category[v]) ++het;
  }
  if (tot == 0) return 0.0;
  return double(het) / double(tot);
}

Matrix one_hot_features(const Graph& g, int k) {
  Matrix x(g.num_nodes, k);
  for (int v = 0; v < g.num_nodes; ++v) {
    int c = g.node_category[v];
    if (c < 0 || c >= k) throw input_error("graph " + g.graph_id + ": category id >= k");
    x(v, c) = 1.0;
  }
  return x;
}

}  // namespace divgnn
