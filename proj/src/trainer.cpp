#include "divgnn/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <thread>
#include <tuple>

#include "divgnn/errors.hpp"
#include "divgnn/gradcheck.hpp"

namespace divgnn {

void ExperimentConfig::validate() const {
  model.validate();
  train.validate();
  if (folds < 2) throw input_error("--folds must be at least 2");
  if (workers < 1) throw input_error("--workers must be positive");
  if (metric != "auto" && metric != "accuracy" && metric != "mae" && metric != "auc")
    throw input_error("unknown metric '" + metric + "'");
  if (dataset.empty()) throw input_error("dataset name is empty");
}

std::string ExperimentConfig::resolved_metric(const DataInfo& info) const {
  if (metric == "auto") return info.regression ? "mae" : "accuracy";
  if (metric == "mae" && !info.regression)
    throw input_error("mae metric requires a regression dataset");
  if ((metric == "accuracy" || metric == "auc") && info.regression)
    throw input_error(metric + " metric requires a classification dataset");
  if (metric == "auc" && info.class_count != 2)
    throw input_error("auc metric requires exactly two classes");
  return metric;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::snapshot() const {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("batch_size", std::to_string(train.batch_size));
  kv.emplace_back("conv_layers", std::to_string(model.conv_layers));
  kv.emplace_back("d_prime", std::to_string(model.d_prime));
  kv.emplace_back("embed_dim", std::to_string(model.embed_dim));
  kv.emplace_back("epochs", std::to_string(train.epochs));
  kv.emplace_back("folds", std::to_string(folds));
  kv.emplace_back("hidden", std::to_string(model.hidden));
  kv.emplace_back("hp_a", fmt_double(model.hp.a_value()));
  kv.emplace_back("hp_a_independent", b(model.hp.a_independent));
  kv.emplace_back("hp_e", fmt_double(model.hp.e));
  kv.emplace_back("hp_learnable", b(model.hp.learnable));
  kv.emplace_back("hp_p", fmt_double(model.hp.p));
  kv.emplace_back("id_width", std::to_string(model.id_width));
  kv.emplace_back("internet_activation", b(model.internet_activation));
  kv.emplace_back("internet_on_hetero_subgraph", b(model.internet_on_hetero_subgraph));
  kv.emplace_back("lr", fmt_double(train.lr));
  kv.emplace_back("lr_halve_every", std::to_string(train.lr_halve_every));
  kv.emplace_back("readout", to_string(model.readout));
  kv.emplace_back("replication", model.replication ? "on" : "off");
  kv.emplace_back("seed", std::to_string(train.seed));
  kv.emplace_back("virtual_every_layer", b(model.virtual_every_layer));
  return kv;
}

double accuracy_metric(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw input_error("accuracy needs matching non-empty prediction and truth lists");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++hit;
  return double(hit) / double(pred.size());
}

double mae_metric(const std::vector<double>& pred, const std::vector<double>& truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw input_error("mae needs matching non-empty prediction and truth lists");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - truth[i]);
  return s / double(pred.size());
}

double auc_metric(const std::vector<double>& score, const std::vector<int>& truth) {
  if (score.size() != truth.size() || score.empty())
    throw input_error("auc needs matching non-empty score and truth lists");
  std::size_t n_pos = 0;
  for (int t : truth) {
    if (t != 0 && t != 1) throw input_error("auc truth labels must be 0 or 1");
    n_pos += std::size_t(t);
  }
  std::size_t n_neg = truth.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw input_error("auc needs both classes present");
  std::vector<std::size_t> order(score.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  // average ranks across tie groups, 1-based
  std::vector<double> rank(score.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && score[order[j + 1]] == score[order[i]]) ++j;
    double avg = 0.5 * double(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg;
    i = j + 1;
  }
  double pos_rank_sum = 0.0;
  for (std::size_t t = 0; t < truth.size(); ++t)
    if (truth[t] == 1) pos_rank_sum += rank[t];
  double np = double(n_pos), nn = double(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double train_eval_fold(const CacheBundle& cb, const ModelConfig& mc,
                       const TrainConfig& tc, const std::string& metric,
                       const std::vector<int>& train_idx,
                       const std::vector<int>& test_idx, std::uint64_t run_seed) {
  if (train_idx.empty() || test_idx.empty())
    throw input_error("fold has an empty train or test side");
  Rng rng(run_seed);
  ParamStore P = build_params(mc, cb.info, rng);

  std::vector<int> order = train_idx;
  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    rng.shuffle(order);
    double lr = lr_at(tc, epoch);
    for (std::size_t start = 0; start < order.size(); start += std::size_t(tc.batch_size)) {
      std::size_t end = std::min(order.size(), start + std::size_t(tc.batch_size));
      double inv = 1.0 / double(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const GraphCache& c = cb.graphs[std::size_t(order[i])];
        ad::Value out = model_forward(c, P, mc, cb.info);
        ad::Value loss = model_loss(out, c, cb.info);
        ad::backward(loss, inv);
      }
      P.note_backward();
      P.adam_step(lr);
    }
  }

  if (metric == "accuracy") {
    std::vector<int> pred, truth;
    for (int gi : test_idx) {
      const GraphCache& c = cb.graphs[std::size_t(gi)];
      pred.push_back(predict_class(model_forward(c, P, mc, cb.info)->val));
      truth.push_back(c.label);
    }
    return accuracy_metric(pred, truth);
  }
  if (metric == "mae") {
    std::vector<double> pred, truth;
    for (int gi : test_idx) {
      const GraphCache& c = cb.graphs[std::size_t(gi)];
      pred.push_back(model_forward(c, P, mc, cb.info)->val(0, 0));
      truth.push_back(c.target);
    }
    return mae_metric(pred, truth);
  }
  if (metric == "auc") {
    std::vector<double> score;
    std::vector<int> truth;
    for (int gi : test_idx) {
      const GraphCache& c = cb.graphs[std::size_t(gi)];
      Matrix logits = model_forward(c, P, mc, cb.info)->val;
      score.push_back(logits(0, 1) - logits(0, 0));
      truth.push_back(c.label);
    }
    return auc_metric(score, truth);
  }
  throw input_error("unknown metric '" + metric + "'");
}

namespace {

constexpr std::uint64_t kFoldTag = 0xF01D0000ULL;

// Runs jobs [0, n) over `workers` threads; worker errors surface in job order.
void run_jobs(int n, int workers, const std::function<void(int)>& job) {
  std::vector<std::exception_ptr> errs;
  errs.resize(std::size_t(n));
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) {
      try {
        job(i);
      } catch (...) {
        errs[std::size_t(i)] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<int> next{0};
    auto body = [&]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= n) break;
        try {
          job(i);
        } catch (...) {
          errs[std::size_t(i)] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Report run_cv(const Dataset& d, const ExperimentConfig& cfg, const FoldPlan& plan,
              std::uint64_t train_seed) {
  cfg.validate();
  if (plan.k_folds != cfg.folds)
    throw input_error("fold plan does not match --folds");
  auto t0 = std::chrono::steady_clock::now();

  CacheBundle cb = build_caches(d, cfg.model);
  std::string metric = cfg.resolved_metric(cb.info);

  std::vector<double> values(std::size_t(plan.k_folds), 0.0);
  run_jobs(plan.k_folds, cfg.workers, [&](int f) {
    values[std::size_t(f)] = train_eval_fold(
        cb, cfg.model, cfg.train, metric, fold_train_indices(plan, f),
        fold_test_indices(plan, f), derive_seed(train_seed, kFoldTag + std::uint64_t(f)));
  });

  Report r = make_report(cfg.dataset, to_string(cfg.model.kind), metric,
                         cfg.snapshot(), values);
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<std::string> ablation_grid(const std::string& name) {
  if (name == "branches") return {"divgnn", "intranet", "internet"};
  if (name == "replication") return {"divgnn", "divgnn/replication=off"};
  if (name == "readouts")
    return {"divgnn/category", "divgnn/sum", "divgnn/mean", "divgnn/max",
            "divgnn/virtual"};
  if (name == "baselines") return {"divgnn", "gcn", "gcn_wo_hetero"};
  if (name == "fusion") return {"divgnn", "hetero_gcn_fused", "hetero_ego_fused"};
  throw input_error("unknown ablation grid '" + name + "'");
}

namespace {

ModelConfig variant_config(const ModelConfig& base, const std::string& spec) {
  ModelConfig mc = base;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t slash = spec.find('/', pos);
    if (slash == std::string::npos) slash = spec.size();
    parts.push_back(spec.substr(pos, slash - pos));
    pos = slash + 1;
  }
  if (parts.empty() || parts[0].empty())
    throw input_error("empty ablation variant spec");
  mc.kind = parse_model_kind(parts[0]);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& t = parts[i];
    if (t == "replication=on")
      mc.replication = true;
    else if (t == "replication=off")
      mc.replication = false;
    else
      mc.readout = parse_readout_kind(t);
  }
  mc.validate();
  return mc;
}

}  // namespace

AblationTable run_ablation(const Dataset& d, const ExperimentConfig& base,
                           const std::vector<std::string>& variants,
                           const std::vector<std::uint64_t>& seeds) {
  base.validate();
  if (variants.empty()) throw input_error("ablation needs at least one variant");
  if (seeds.empty()) throw input_error("ablation needs at least one seed");

  FoldPlan plan = stratified_kfold(d, base.folds, base.train.seed, &std::cerr);

  struct VariantState {
    std::string label;
    ModelConfig mc;
    CacheBundle cb;
    std::string metric;
  };
  std::vector<VariantState> vs;
  for (const auto& spec : variants) {
    VariantState s;
    s.label = spec;
    s.mc = variant_config(base.model, spec);
    s.cb = build_caches(d, s.mc);
    s.metric = base.resolved_metric(s.cb.info);
    vs.push_back(std::move(s));
  }

  AblationTable table;
  table.metric = vs.front().metric;
  int k = plan.k_folds;
  int jobs_per_variant = int(seeds.size()) * k;
  table.rows.resize(vs.size() * std::size_t(jobs_per_variant));
  run_jobs(int(table.rows.size()), base.workers, [&](int j) {
    int vi = j / jobs_per_variant;
    int si = (j % jobs_per_variant) / k;
    int f = j % k;
    const VariantState& s = vs[std::size_t(vi)];
    double v = train_eval_fold(s.cb, s.mc, base.train, s.metric,
                               fold_train_indices(plan, f), fold_test_indices(plan, f),
                               derive_seed(seeds[std::size_t(si)],
                                           kFoldTag + std::uint64_t(f)));
    table.rows[std::size_t(j)] = {s.label, seeds[std::size_t(si)], f, v};
  });

  for (const auto& s : vs) {
    double sum = 0.0, n = 0.0;
    for (const auto& row : table.rows)
      if (row.variant == s.label) {
        sum += row.value;
        n += 1.0;
      }
    double mean = sum / n, sq = 0.0;
    for (const auto& row : table.rows)
      if (row.variant == s.label) sq += (row.value - mean) * (row.value - mean);
    table.summary.emplace_back(s.label, mean, std::sqrt(sq / n));
  }
  return table;
}

void write_ablation_csv(const AblationTable& t, std::ostream& out) {
  out << "# metric=" << t.metric << "\n";
  out << "variant,seed,fold,value\n";
  for (const auto& r : t.rows)
    out << r.variant << "," << r.seed << "," << r.fold << "," << fmt_double(r.value)
        << "\n";
  for (const auto& [label, mean, sd] : t.summary) {
    out << label << ",all,mean," << fmt_double(mean) << "\n";
    out << label << ",all,std," << fmt_double(sd) << "\n";
  }
}

Dataset gradcheck_fixture() {
  Dataset d;
  d.category_count = 3;
  d.class_count = 2;
  d.task_kind = TaskKind::classification;
  d.node_label_vocab = {0, 1, 2};
  d.class_vocab = {0, 1};

  Graph g1;
  g1.graph_id = "fixture0";
  g1.num_nodes = 7;
  g1.node_category = {0, 1, 2, 0, 1, 0, 2};
  g1.label = 0;
  g1.target = 0.0;
  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {0, 1}, {0, 3}, {1, 2}, {1, 3}, {1, 4}, {2, 4}, {2, 6}, {3, 4}, {4, 5}, {5, 6}})
    g1.edges.emplace_back(a, b);

  Graph g2;
  g2.graph_id = "fixture1";
  g2.num_nodes = 5;
  g2.node_category = {1, 0, 1, 2, 2};
  g2.label = 1;
  g2.target = 1.0;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 4}, {2, 3}, {3, 4}})
    g2.edges.emplace_back(a, b);

  d.graphs = {g1, g2};
  for (const auto& g : d.graphs) validate_graph(g);
  return d;
}

std::map<std::string, double> model_gradcheck_errors(ModelKind kind, std::uint64_t seed) {
  Dataset d = gradcheck_fixture();
  ModelConfig mc;
  mc.kind = kind;
  mc.hidden = 8;
  mc.embed_dim = 8;
  mc.d_prime = 4;
  mc.conv_layers = 2;
  mc.validate();
  CacheBundle cb = build_caches(d, mc);
  Rng rng(seed);
  ParamStore P = build_params(mc, cb.info, rng);
  auto f = [&]() -> ad::Value {
    ad::Value l0 = model_loss(model_forward(cb.graphs[0], P, mc, cb.info),
                              cb.graphs[0], cb.info);
    ad::Value l1 = model_loss(model_forward(cb.graphs[1], P, mc, cb.info),
                              cb.graphs[1], cb.info);
    return ad::add(l0, l1);
  };
  return finite_diff_gradcheck_by_param(f, P);
}

}  // namespace divgnn
