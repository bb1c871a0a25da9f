#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "divgnn/folds.hpp"
#include "divgnn/model.hpp"
#include "divgnn/report.hpp"

namespace divgnn {

struct ExperimentConfig {
  std::string dataset = "MUTAG";
  std::string data_dir = "data";
  ModelConfig model;
  TrainConfig train;
  int folds = 10;
  int workers = 1;
  std::string metric = "auto";  // auto | accuracy | mae | auc
  std::string out_path;

  void validate() const;
  std::string resolved_metric(const DataInfo& info) const;
  // ordered key/value snapshot; identical configs serialize identically
  std::vector<std::pair<std::string, std::string>> snapshot() const;
};

double accuracy_metric(const std::vector<int>& pred, const std::vector<int>& truth);
double mae_metric(const std::vector<double>& pred, const std::vector<double>& truth);
// rank-based ROC-AUC for binary labels; scores are class-1 score margins
double auc_metric(const std::vector<double>& score, const std::vector<int>& truth);

// Trains on train_idx, evaluates the final-epoch model on test_idx.
double train_eval_fold(const CacheBundle& cb, const ModelConfig& mc,
                       const TrainConfig& tc, const std::string& metric,
                       const std::vector<int>& train_idx,
                       const std::vector<int>& test_idx, std::uint64_t run_seed);

// Full cross-validation for one model variant. Folds may run on parallel
// workers; per-fold seeds depend only on (train_seed, fold), so the result is
// identical at any worker count.
Report run_cv(const Dataset& d, const ExperimentConfig& cfg, const FoldPlan& plan,
              std::uint64_t train_seed);

struct AblationRow {
  std::string variant;
  std::uint64_t seed;
  int fold;
  double value;
};

struct AblationTable {
  std::vector<AblationRow> rows;
  // variant -> (mean, std) over all seed x fold values
  std::vector<std::tuple<std::string, double, double>> summary;
  std::string metric;
};

// Named variant lists: branches, replication, readouts, baselines, fusion.
std::vector<std::string> ablation_grid(const std::string& name);

// Runs each variant over a common fold plan and every seed in `seeds`.
// A variant spec is "model" or "model/readout" or "model/replication=off".
AblationTable run_ablation(const Dataset& d, const ExperimentConfig& base,
                           const std::vector<std::string>& variants,
                           const std::vector<std::uint64_t>& seeds);

void write_ablation_csv(const AblationTable& t, std::ostream& out);

// Builds the two in-memory fixture graphs used by the gradient checks.
Dataset gradcheck_fixture();

// End-to-end finite-difference errors per parameter group for one model kind
// on the fixture graphs.
std::map<std::string, double> model_gradcheck_errors(ModelKind kind, std::uint64_t seed);

}  // namespace divgnn
