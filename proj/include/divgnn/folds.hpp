#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "divgnn/graph.hpp"

namespace divgnn {

struct FoldPlan {
  std::vector<int> fold_assignment;  // per-graph fold index in [0, k_folds)
  std::uint64_t seed = 0;
  int k_folds = 0;
};

// Deterministic stratified k-fold split. Fold sizes differ by at most 1 and,
// for classification with every class populated by >= k_folds graphs,
// per-class counts across folds differ by at most 1. Falls back to an
// unstratified split (with a warning on `warn`) when a class is too small;
// regression tasks are always unstratified.
FoldPlan stratified_kfold(const Dataset& d, int k_folds, std::uint64_t seed,
                          std::ostream* warn = nullptr);

std::vector<int> fold_train_indices(const FoldPlan& p, int fold);
std::vector<int> fold_test_indices(const FoldPlan& p, int fold);

}  // namespace divgnn
