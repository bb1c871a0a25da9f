#include "divgnn/model.hpp"

#include <algorithm>
#include <cmath>

#include "divgnn/errors.hpp"

namespace divgnn {

ModelKind parse_model_kind(const std::string& s) {
  if (s == "divgnn") return ModelKind::divgnn;
  if (s == "intranet") return ModelKind::intranet;
  if (s == "internet") return ModelKind::internet;
  if (s == "gcn") return ModelKind::gcn;
  if (s == "gcn_wo_hetero") return ModelKind::gcn_wo_hetero;
  if (s == "hetero_gcn_fused") return ModelKind::hetero_gcn_fused;
  if (s == "hetero_ego_fused") return ModelKind::hetero_ego_fused;
  throw input_error("unknown model kind '" + s + "'");
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::divgnn: return "divgnn";
    case ModelKind::intranet: return "intranet";
    case ModelKind::internet: return "internet";
    case ModelKind::gcn: return "gcn";
    case ModelKind::gcn_wo_hetero: return "gcn_wo_hetero";
    case ModelKind::hetero_gcn_fused: return "hetero_gcn_fused";
    case ModelKind::hetero_ego_fused: return "hetero_ego_fused";
  }
  return "?";
}

ReadoutKind parse_readout_kind(const std::string& s) {
  if (s == "category") return ReadoutKind::category;
  if (s == "sum") return ReadoutKind::sum;
  if (s == "mean") return ReadoutKind::mean;
  if (s == "max") return ReadoutKind::max;
  if (s == "virtual") return ReadoutKind::virtual_node;
  throw input_error("unknown readout mode '" + s + "'");
}

std::string to_string(ReadoutKind k) {
  switch (k) {
    case ReadoutKind::category: return "category";
    case ReadoutKind::sum: return "sum";
    case ReadoutKind::mean: return "mean";
    case ReadoutKind::max: return "max";
    case ReadoutKind::virtual_node: return "virtual";
  }
  return "?";
}

bool model_has_intranet(ModelKind k) {
  return k == ModelKind::divgnn || k == ModelKind::intranet ||
         k == ModelKind::hetero_gcn_fused || k == ModelKind::hetero_ego_fused;
}

bool model_has_internet(ModelKind k) {
  return k == ModelKind::divgnn || k == ModelKind::internet;
}

void ModelConfig::validate() const {
  if (hidden <= 0 || embed_dim <= 0 || d_prime <= 0 || conv_layers <= 0)
    throw input_error("model dimensions must be positive");
  if (id_width < 0) throw input_error("id_width must be >= 0");
  if (readout != ReadoutKind::category && !model_has_intranet(kind))
    throw input_error("readout variants apply only to models with a homophilic branch");
  if (kind == ModelKind::hetero_ego_fused && (hidden % 2 != 0 || embed_dim % 2 != 0))
    throw input_error("hetero_ego_fused needs even hidden and embedding widths");
}

namespace {

Matrix identity_padded(int n, int width) {
  Matrix x(n, width);
  for (int i = 0; i < n; ++i) x(i, i) = 1.0;
  return x;
}

Matrix graph_without_hetero_adjacency(const Graph& g) {
  EdgeSplit s = split_homo_hetero(g);
  Matrix m(g.num_nodes, g.num_nodes);
  for (auto [u, v] : s.homo_edges) {
    m(u, v) = 1.0;
    m(v, u) = 1.0;
  }
  return m;
}

Matrix hetero_only_adjacency(const Graph& g) {
  EdgeSplit s = split_homo_hetero(g);
  Matrix m(g.num_nodes, g.num_nodes);
  for (auto [u, v] : s.hetero_edges) {
    m(u, v) = 1.0;
    m(v, u) = 1.0;
  }
  return m;
}

Matrix mean_aggregation_matrix(const Graph& g) {
  Matrix adj = adjacency_matrix(g);
  Matrix m(g.num_nodes, g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) {
    double deg = 0.0;
    for (int j = 0; j < g.num_nodes; ++j) deg += adj(i, j);
    if (deg == 0.0) continue;  // mean over an empty neighborhood is 0
    for (int j = 0; j < g.num_nodes; ++j) m(i, j) = adj(i, j) / deg;
  }
  return m;
}

// conv widths for the one-hot branches: k -> h -> ... -> d
std::vector<std::pair<int, int>> branch_widths(int k, int h, int d, int layers) {
  std::vector<std::pair<int, int>> w;
  int in = k;
  for (int l = 0; l < layers; ++l) {
    int out = (l == layers - 1) ? d : h;
    w.push_back({in, out});
    in = out;
  }
  return w;
}

ad::Value linear(const ad::Value& x, const ad::Value& w, const ad::Value& b) {
  return ad::add(ad::matmul(x, w), b);
}

ad::Value head_forward(const ad::Value& h, ParamStore& P) {
  ad::Value z = ad::relu(linear(h, P.get("head.w0"), P.get("head.b0")));
  return linear(z, P.get("head.w1"), P.get("head.b1"));
}

}  // namespace

CacheBundle build_caches(const Dataset& d, const ModelConfig& mc) {
  mc.validate();
  CacheBundle cb;
  cb.info.category_count = d.category_count;
  cb.info.regression = d.task_kind == TaskKind::regression;
  cb.info.class_count = cb.info.regression ? 1 : d.class_count;

  const int k = d.category_count;
  const bool wants_intra = model_has_intranet(mc.kind);
  const bool wants_inter = model_has_internet(mc.kind);
  const bool wants_onehot = wants_inter || mc.kind == ModelKind::gcn ||
                            mc.kind == ModelKind::gcn_wo_hetero ||
                            mc.kind == ModelKind::hetero_gcn_fused ||
                            mc.kind == ModelKind::hetero_ego_fused;

  cb.graphs.resize(d.graphs.size());
  int max_block = 0;
  for (std::size_t i = 0; i < d.graphs.size(); ++i) {
    const Graph& g = d.graphs[i];
    GraphCache& c = cb.graphs[i];
    c.g = &g;
    c.label = g.label;
    c.target = g.target;
    if (wants_intra) {
      c.blocks = preprocess_for_intranet(g, k, mc.replication);
      c.block_adj_norm.reserve(k);
      for (const Matrix& b : c.blocks.blocks) {
        max_block = std::max<int>(max_block, (int)b.rows);
        c.block_adj_norm.push_back(b.rows > 0 ? normalized_adjacency(b) : Matrix());
      }
    }
    if (wants_onehot) c.onehot = one_hot_features(g, k);
    if (wants_inter) {
      Matrix adj = mc.internet_on_hetero_subgraph ? hetero_only_adjacency(g)
                                                  : adjacency_matrix(g);
      c.eig = sym_eigendecompose(normalized_laplacian(adj));
      c.lambda_col = Matrix(g.num_nodes, 1);
      for (int v = 0; v < g.num_nodes; ++v) c.lambda_col(v, 0) = c.eig.lambda[v];
    }
    if (mc.kind == ModelKind::gcn || mc.kind == ModelKind::hetero_gcn_fused)
      c.norm_adj = normalized_adjacency(adjacency_matrix(g));
    if (mc.kind == ModelKind::gcn_wo_hetero)
      c.norm_adj_wo_hetero = normalized_adjacency(graph_without_hetero_adjacency(g));
    if (mc.kind == ModelKind::hetero_ego_fused)
      c.mean_agg = mean_aggregation_matrix(g);
  }

  if (wants_intra) {
    cb.info.id_width = mc.id_width > 0 ? mc.id_width : std::max(max_block, 1);
    for (GraphCache& c : cb.graphs) {
      c.block_x0.reserve(c.blocks.blocks.size());
      for (int cat = 0; cat < k; ++cat) {
        int n = (int)c.blocks.blocks[cat].rows;
        if (n > cb.info.id_width)
          throw capacity_error(
              "graph " + c.g->graph_id + " category " + std::to_string(cat) +
              " has a block of " + std::to_string(n) + " nodes, above the identity width " +
              std::to_string(cb.info.id_width) + "; raise --id-width to at least " +
              std::to_string(n));
        c.block_x0.push_back(n > 0 ? identity_padded(n, cb.info.id_width) : Matrix());
      }
    }
  }
  return cb;
}

ParamStore build_params(const ModelConfig& mc, const DataInfo& info, Rng& rng) {
  mc.validate();
  ParamStore P;
  const int k = info.category_count;
  const int h = mc.hidden, d = mc.embed_dim, dp = mc.d_prime, L = mc.conv_layers;

  // Width of each branch embedding entering the fuse/head. Sum/mean/max
  // readouts leave the homophilic branch at the conv width, and every other
  // branch has to land there too or the gate cannot mix them.
  const bool plain_pool = mc.readout == ReadoutKind::sum ||
                          mc.readout == ReadoutKind::mean ||
                          mc.readout == ReadoutKind::max;
  const int branch_dim = (model_has_intranet(mc.kind) && plain_pool) ? h : d;
  if (model_has_intranet(mc.kind)) {
    for (int l = 0; l < L; ++l) {
      int in = l == 0 ? info.id_width : h;
      P.add("intra.conv" + std::to_string(l) + ".w", glorot_uniform(rng, in, h));
    }
    switch (mc.readout) {
      case ReadoutKind::category:
        P.add("intra.mlp1.w", glorot_uniform(rng, h, dp));
        P.add("intra.mlp1.b", Matrix(1, dp));
        P.add("intra.mlp2.w0", glorot_uniform(rng, (std::size_t)k * dp, d));
        P.add("intra.mlp2.b0", Matrix(1, d));
        P.add("intra.mlp2.w1", glorot_uniform(rng, d, d));
        P.add("intra.mlp2.b1", Matrix(1, d));
        break;
      case ReadoutKind::virtual_node:
        P.add("vr.w_agg", glorot_uniform(rng, h, d));
        P.add("vr.b", Matrix(1, d));
        P.add("vr.w_redist", glorot_uniform(rng, d, h));
        break;
      default:
        break;
    }
  }
  if (model_has_internet(mc.kind)) {
    for (int l = 0; l < L; ++l) {
      auto [in, out] = branch_widths(k, h, branch_dim, L)[l];
      P.add("inter.conv" + std::to_string(l) + ".w", glorot_uniform(rng, in, out));
    }
    if (mc.hp.learnable) {
      P.add("inter.hp.p", Matrix(1, 1, mc.hp.p));
      P.add("inter.hp.e", Matrix(1, 1, mc.hp.e));
      if (mc.hp.a_independent) P.add("inter.hp.a", Matrix(1, 1, mc.hp.a));
    }
  }
  if (mc.kind == ModelKind::gcn || mc.kind == ModelKind::gcn_wo_hetero ||
      mc.kind == ModelKind::hetero_gcn_fused) {
    for (int l = 0; l < L; ++l) {
      auto [in, out] = branch_widths(k, h, branch_dim, L)[l];
      P.add("gcnb.conv" + std::to_string(l) + ".w", glorot_uniform(rng, in, out));
    }
  }
  if (mc.kind == ModelKind::hetero_ego_fused) {
    for (int l = 0; l < L; ++l) {
      auto [in, out] = branch_widths(k, h, branch_dim, L)[l];
      P.add("ego.conv" + std::to_string(l) + ".self", glorot_uniform(rng, in, out / 2));
      P.add("ego.conv" + std::to_string(l) + ".nbr", glorot_uniform(rng, in, out / 2));
    }
  }
  const bool two_branch = mc.kind == ModelKind::divgnn ||
                          mc.kind == ModelKind::hetero_gcn_fused ||
                          mc.kind == ModelKind::hetero_ego_fused;
  if (two_branch) P.add("fuse.theta", Matrix(1, branch_dim));

  const int out = info.regression ? 1 : info.class_count;
  P.add("head.w0", glorot_uniform(rng, branch_dim, branch_dim));
  P.add("head.b0", Matrix(1, branch_dim));
  P.add("head.w1", glorot_uniform(rng, branch_dim, out));
  P.add("head.b1", Matrix(1, out));
  return P;
}

std::vector<ad::Value> intranet_forward(const GraphCache& c, ParamStore& P,
                                        const ModelConfig& mc) {
  const int k = (int)c.blocks.blocks.size();
  std::vector<ad::Value> embs(k);
  const bool per_layer_virtual =
      mc.readout == ReadoutKind::virtual_node && mc.virtual_every_layer;
  for (int cat = 0; cat < k; ++cat) {
    int n = (int)c.blocks.blocks[cat].rows;
    if (n == 0) continue;
    ad::Value x = ad::constant(c.block_x0[cat]);
    ad::Value a = ad::constant(c.block_adj_norm[cat]);
    for (int l = 0; l < mc.conv_layers; ++l) {
      ad::Value w = P.get("intra.conv" + std::to_string(l) + ".w");
      x = ad::relu(ad::matmul(a, ad::matmul(x, w)));
      if (per_layer_virtual && l + 1 < mc.conv_layers)
        x = virtual_readout(x, P).second;
    }
    embs[cat] = x;
  }
  return embs;
}

ad::Value category_readout(const std::vector<ad::Value>& block_embs, ParamStore& P,
                           int k) {
  if ((int)block_embs.size() != k)
    throw input_error("category_readout: embedding list size != k");
  ad::Value w1 = P.get("intra.mlp1.w");
  ad::Value b1 = P.get("intra.mlp1.b");
  std::size_t h = w1->val.rows;
  std::vector<ad::Value> slices;
  slices.reserve(k);
  for (int cat = 0; cat < k; ++cat) {
    ad::Value s =
        block_embs[cat] ? ad::col_sum(block_embs[cat]) : ad::constant(Matrix(1, h));
    slices.push_back(linear(s, w1, b1));
  }
  ad::Value cc = ad::concat_cols(slices);
  ad::Value z = ad::relu(linear(cc, P.get("intra.mlp2.w0"), P.get("intra.mlp2.b0")));
  return linear(z, P.get("intra.mlp2.w1"), P.get("intra.mlp2.b1"));
}

ad::Value internet_forward(const GraphCache& c, ParamStore& P, const ModelConfig& mc) {
  ad::Value p, e, a;
  if (mc.hp.learnable) {
    p = P.get("inter.hp.p");
    e = P.get("inter.hp.e");
    a = mc.hp.a_independent ? P.get("inter.hp.a") : e;
  } else {
    p = ad::scalar(mc.hp.p);
    e = ad::scalar(mc.hp.e);
    a = mc.hp.a_independent ? ad::scalar(mc.hp.a) : e;
  }
  ad::Value lam = ad::constant(c.lambda_col);
  // f = p * (e * lambda + 1 - 2a); a aliases e unless configured independent
  ad::Value f =
      ad::mul(p, ad::add(ad::mul(e, lam), ad::add_const(ad::scale_const(a, -2.0), 1.0)));
  ad::Value kernel = ad::u_diag_ut(c.eig.U, f);
  ad::Value x = ad::constant(c.onehot);
  for (int l = 0; l < mc.conv_layers; ++l) {
    ad::Value w = P.get("inter.conv" + std::to_string(l) + ".w");
    x = ad::matmul(kernel, ad::matmul(x, w));
    if (mc.internet_activation) x = ad::relu(x);
  }
  return ad::col_sum(x);
}

ad::Value standardize(const ad::Value& v) {
  if (v->val.rows != 1 || v->val.cols < 1)
    throw input_error("standardize expects a 1 x d row");
  double inv_d = 1.0 / double(v->val.cols);
  ad::Value mean = ad::scale_const(ad::sum_all(v), inv_d);
  ad::Value centered = ad::sub(v, mean);
  ad::Value var = ad::scale_const(ad::sum_all(ad::mul(centered, centered)), inv_d);
  ad::Value denom = ad::add_const(ad::sqrt_v(var), 1e-5);
  return ad::div(centered, denom);
}

ad::Value gated_fuse(const ad::Value& a, const ad::Value& b, const ad::Value& theta) {
  if (!a->val.same_shape(b->val) || !a->val.same_shape(theta->val))
    throw input_error("gated_fuse: dimension mismatch");
  ad::Value g = ad::sigmoid(theta);
  ad::Value one_minus_g = ad::add_const(ad::scale_const(g, -1.0), 1.0);
  return ad::add(ad::mul(g, a), ad::mul(one_minus_g, b));
}

ad::Value plain_readout(const ad::Value& node_embs, ReadoutKind mode) {
  if (node_embs->val.rows == 0) throw input_error("readout of an empty node set");
  switch (mode) {
    case ReadoutKind::sum: return ad::col_sum(node_embs);
    case ReadoutKind::mean: return ad::col_mean(node_embs);
    case ReadoutKind::max: return ad::col_max(node_embs);
    default: throw input_error("plain_readout handles sum/mean/max only");
  }
}

std::pair<ad::Value, ad::Value> virtual_readout(const ad::Value& node_embs,
                                                ParamStore& P) {
  if (node_embs->val.rows == 0) throw input_error("readout of an empty node set");
  ad::Value pooled = ad::col_sum(node_embs);
  ad::Value h_virtual =
      ad::relu(linear(pooled, P.get("vr.w_agg"), P.get("vr.b")));
  ad::Value updated =
      ad::add(node_embs, ad::matmul(h_virtual, P.get("vr.w_redist")));
  return {h_virtual, updated};
}

namespace {

// homophilic-branch embedding under the configured readout
ad::Value intranet_branch(const GraphCache& c, ParamStore& P, const ModelConfig& mc,
                          const DataInfo& info) {
  std::vector<ad::Value> embs = intranet_forward(c, P, mc);
  if (mc.readout == ReadoutKind::category)
    return category_readout(embs, P, info.category_count);
  std::vector<ad::Value> nonempty;
  for (const auto& e : embs)
    if (e) nonempty.push_back(e);
  if (nonempty.empty()) throw input_error("graph with no nodes");
  if (mc.readout == ReadoutKind::virtual_node) {
    if (mc.virtual_every_layer) {
      // one virtual embedding per category subgraph, summed
      ad::Value acc;
      for (const auto& e : nonempty) {
        ad::Value hv = virtual_readout(e, P).first;
        acc = acc ? ad::add(acc, hv) : hv;
      }
      return acc;
    }
    return virtual_readout(ad::concat_rows(nonempty), P).first;
  }
  return plain_readout(ad::concat_rows(nonempty), mc.readout);
}

ad::Value gcn_branch(const GraphCache& c, ParamStore& P, const ModelConfig& mc,
                     const Matrix& prop) {
  ad::Value a = ad::constant(prop);
  ad::Value x = ad::constant(c.onehot);
  for (int l = 0; l < mc.conv_layers; ++l) {
    ad::Value w = P.get("gcnb.conv" + std::to_string(l) + ".w");
    x = ad::relu(ad::matmul(a, ad::matmul(x, w)));
  }
  return ad::col_sum(x);
}

ad::Value ego_branch(const GraphCache& c, ParamStore& P, const ModelConfig& mc) {
  ad::Value m = ad::constant(c.mean_agg);
  ad::Value x = ad::constant(c.onehot);
  for (int l = 0; l < mc.conv_layers; ++l) {
    ad::Value ws = P.get("ego.conv" + std::to_string(l) + ".self");
    ad::Value wn = P.get("ego.conv" + std::to_string(l) + ".nbr");
    ad::Value self_part = ad::matmul(x, ws);
    ad::Value nbr_part = ad::matmul(m, ad::matmul(x, wn));
    x = ad::relu(ad::concat_cols({self_part, nbr_part}));
  }
  return ad::col_sum(x);
}

}  // namespace

ad::Value model_forward(const GraphCache& c, ParamStore& P, const ModelConfig& mc,
                        const DataInfo& info) {
  ad::Value h;
  switch (mc.kind) {
    case ModelKind::divgnn: {
      ad::Value hh = intranet_branch(c, P, mc, info);
      ad::Value he = internet_forward(c, P, mc);
      h = gated_fuse(standardize(hh), standardize(he), P.get("fuse.theta"));
      break;
    }
    case ModelKind::intranet:
      h = standardize(intranet_branch(c, P, mc, info));
      break;
    case ModelKind::internet:
      h = standardize(internet_forward(c, P, mc));
      break;
    case ModelKind::gcn:
      h = gcn_branch(c, P, mc, c.norm_adj);
      break;
    case ModelKind::gcn_wo_hetero:
      h = gcn_branch(c, P, mc, c.norm_adj_wo_hetero);
      break;
    case ModelKind::hetero_gcn_fused: {
      ad::Value hh = intranet_branch(c, P, mc, info);
      ad::Value hg = gcn_branch(c, P, mc, c.norm_adj);
      h = gated_fuse(standardize(hh), standardize(hg), P.get("fuse.theta"));
      break;
    }
    case ModelKind::hetero_ego_fused: {
      ad::Value hh = intranet_branch(c, P, mc, info);
      ad::Value he = ego_branch(c, P, mc);
      h = gated_fuse(standardize(hh), standardize(he), P.get("fuse.theta"));
      break;
    }
  }
  return head_forward(h, P);
}

ad::Value model_loss(const ad::Value& output, const GraphCache& c, const DataInfo& info) {
  if (info.regression) return ad::l1_loss(output, c.target);
  return ad::cross_entropy_logits(output, c.label);
}

int predict_class(const Matrix& logits) {
  int best = 0;
  for (std::size_t j = 1; j < logits.cols; ++j)
    if (logits(0, j) > logits(0, best)) best = (int)j;
  return best;
}

}  // namespace divgnn
