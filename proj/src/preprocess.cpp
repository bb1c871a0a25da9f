#include "divgnn/preprocess.hpp"

#include <algorithm>

#include "divgnn/errors.hpp"

namespace divgnn {

ReplicationResult replicate_nodes(const Graph& g) {
  ReplicationResult r;
  r.modified = g;
  auto adj = adjacency_lists(g);
  int next = g.num_nodes;
  for (int v = 0; v < g.num_nodes; ++v) {
    const auto& nbrs = adj[v];
    if (nbrs.size() < 2) continue;  // neighbor-number criterion
    int c = g.node_category[nbrs[0]];
    bool unanimous = true;
    for (int u : nbrs)
      if (g.node_category[u] != c) { unanimous = false; break; }
    if (!unanimous) continue;       // neighborhood-purity criterion
    if (c == g.node_category[v]) continue;  // label-difference criterion
    int vp = next++;
    r.modified.num_nodes += 1;
    r.modified.node_category.push_back(c);
    for (int u : nbrs)
      r.modified.edges.emplace_back(std::min(u, vp), std::max(u, vp));
    r.replica_of[vp] = v;
    r.new_label[vp] = c;
  }
  return r;
}

CategoryBlocks reorder_by_category(const Graph& g, int k) {
  for (int c : g.node_category)
    if (c >= k) throw input_error("graph " + g.graph_id + ": category id >= k");

  std::vector<int> order(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.node_category[a] != g.node_category[b])
      return g.node_category[a] < g.node_category[b];
    return a < b;
  });

  CategoryBlocks cb;
  cb.permutation.assign(g.num_nodes, -1);
  for (int pos = 0; pos < g.num_nodes; ++pos) cb.permutation[order[pos]] = pos;

  cb.block_node_ids.assign(k, {});
  for (int pos = 0; pos < g.num_nodes; ++pos)
    cb.block_node_ids[g.node_category[order[pos]]].push_back(order[pos]);

  // position of each node inside its block
  std::vector<int> in_block(g.num_nodes, -1);
  for (int c = 0; c < k; ++c)
    for (std::size_t i = 0; i < cb.block_node_ids[c].size(); ++i)
      in_block[cb.block_node_ids[c][i]] = (int)i;

  cb.blocks.reserve(k);
  for (int c = 0; c < k; ++c)
    cb.blocks.emplace_back(cb.block_node_ids[c].size(), cb.block_node_ids[c].size());
  for (auto [u, v] : g.edges) {
    int cu = g.node_category[u], cv = g.node_category[v];
    if (cu != cv) continue;  // heterophilic edges stay out of every block
    cb.blocks[cu](in_block[u], in_block[v]) = 1.0;
    cb.blocks[cu](in_block[v], in_block[u]) = 1.0;
  }
  return cb;
}

CategoryBlocks preprocess_for_intranet(const Graph& g, int k, bool enable_replication) {
  if (!enable_replication) return reorder_by_category(g, k);
  return reorder_by_category(replicate_nodes(g).modified, k);
}

}  // namespace divgnn
