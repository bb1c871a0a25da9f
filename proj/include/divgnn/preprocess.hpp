#pragma once

#include <map>
#include <vector>

#include "divgnn/graph.hpp"

namespace divgnn {

struct ReplicationResult {
  Graph modified;
  std::map<int, int> replica_of;  // new node index -> original node index
  std::map<int, int> new_label;   // new node index -> assigned category
};

struct CategoryBlocks {
  std::vector<int> permutation;               // old index -> new index
  std::vector<Matrix> blocks;                 // per-category homophilic adjacency
  std::vector<std::vector<int>> block_node_ids;  // per-category member nodes (post-replication ids)
};

// Appends a replica v' for every original node v that has at least two
// neighbors, all sharing one category c* different from v's own. The replica
// gets category c* and copies of v's edges. Conditions are evaluated against
// the original graph only; replicas never trigger further replication.
ReplicationResult replicate_nodes(const Graph& g);

// Stable sort of nodes by (category, node index); blocks are the dense
// adjacencies induced by homophilic edges within each of the k categories.
// Replicas carry indices past the original count, so they land after the
// originals inside their block.
CategoryBlocks reorder_by_category(const Graph& g, int k);

CategoryBlocks preprocess_for_intranet(const Graph& g, int k, bool enable_replication);

}  // namespace divgnn
