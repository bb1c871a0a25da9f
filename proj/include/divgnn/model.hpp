#pragma once

#include <string>
#include <vector>

#include "divgnn/autodiff.hpp"
#include "divgnn/graph.hpp"
#include "divgnn/optim.hpp"
#include "divgnn/preprocess.hpp"
#include "divgnn/spectral.hpp"

namespace divgnn {

enum class ModelKind {
  divgnn,
  intranet,
  internet,
  gcn,
  gcn_wo_hetero,
  hetero_gcn_fused,
  hetero_ego_fused,
};

enum class ReadoutKind { category, sum, mean, max, virtual_node };

ModelKind parse_model_kind(const std::string& s);
std::string to_string(ModelKind k);
ReadoutKind parse_readout_kind(const std::string& s);
std::string to_string(ReadoutKind k);

bool model_has_intranet(ModelKind k);
bool model_has_internet(ModelKind k);

struct ModelConfig {
  ModelKind kind = ModelKind::divgnn;
  ReadoutKind readout = ReadoutKind::category;
  bool replication = true;
  int hidden = 64;      // conv width h
  int embed_dim = 64;   // branch/fused embedding width d
  int d_prime = 16;     // per-category readout width d'
  int conv_layers = 2;
  int id_width = 0;     // identity feature width; 0 derives it from the data
  bool internet_activation = true;   // sigma between heterophilic conv layers
  HighPassParams hp;
  bool internet_on_hetero_subgraph = false;
  bool virtual_every_layer = false;

  void validate() const;
};

struct DataInfo {
  int category_count = 0;
  int class_count = 0;  // 1 for regression
  bool regression = false;
  int id_width = 0;  // resolved identity width
};

// Parameter-independent per-graph state, shared across folds and seeds.
struct GraphCache {
  const Graph* g = nullptr;
  int label = -1;
  double target = 0.0;
  CategoryBlocks blocks;
  std::vector<Matrix> block_adj_norm;  // normalized adjacency per category block
  std::vector<Matrix> block_x0;        // identity features padded to id_width
  Matrix onehot;                       // n x k
  EigenPair eig;                       // of the normalized Laplacian
  Matrix lambda_col;                   // eigenvalues as an n x 1 matrix
  Matrix norm_adj;                     // full-graph normalized adjacency
  Matrix norm_adj_wo_hetero;           // heterophilic edges removed
  Matrix mean_agg;                     // D^-1 A, zero rows for isolated nodes
};

struct CacheBundle {
  std::vector<GraphCache> graphs;
  DataInfo info;
};

// Builds exactly the caches the configured model kind needs. Raises
// capacity_error (naming graph and category) when a block exceeds a
// user-pinned id_width.
CacheBundle build_caches(const Dataset& d, const ModelConfig& mc);

// Deterministic parameter construction; the rng consumption order is fixed
// by the config alone.
ParamStore build_params(const ModelConfig& mc, const DataInfo& info, Rng& rng);

// Per-category node embeddings after the homophilic convolution stack; empty
// categories yield an empty Value (nullptr).
std::vector<ad::Value> intranet_forward(const GraphCache& c, ParamStore& P,
                                        const ModelConfig& mc);

// Per-category sum + shared MLP, concatenated in category order, then the
// final MLP. Empty categories contribute MLP1(0).
ad::Value category_readout(const std::vector<ad::Value>& block_embs, ParamStore& P,
                           int k);

ad::Value internet_forward(const GraphCache& c, ParamStore& P, const ModelConfig& mc);

// (v - mean) / (popstd + 1e-5) across the coordinates of a 1 x d row
ad::Value standardize(const ad::Value& v);

// sigmoid(theta) * a + (1 - sigmoid(theta)) * b
ad::Value gated_fuse(const ad::Value& a, const ad::Value& b, const ad::Value& theta);

// sum / mean / max over node embedding rows
ad::Value plain_readout(const ad::Value& node_embs, ReadoutKind mode);

// One aggregate-redistribute update; returns {h_virtual, updated embeddings}
std::pair<ad::Value, ad::Value> virtual_readout(const ad::Value& node_embs, ParamStore& P);

// Full forward pass to logits (1 x class_count) or a 1 x 1 regression output
ad::Value model_forward(const GraphCache& c, ParamStore& P, const ModelConfig& mc,
                        const DataInfo& info);

ad::Value model_loss(const ad::Value& output, const GraphCache& c, const DataInfo& info);

int predict_class(const Matrix& logits);

}  // namespace divgnn
