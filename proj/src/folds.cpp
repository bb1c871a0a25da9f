#include "divgnn/folds.hpp"

#include <algorithm>
#include <ostream>

#include "divgnn/errors.hpp"
#include "divgnn/rng.hpp"

namespace divgnn {

FoldPlan stratified_kfold(const Dataset& d, int k_folds, std::uint64_t seed,
                          std::ostream* warn) {
  const int n = (int)d.graphs.size();
  if (k_folds < 2) throw input_error("k_folds must be >= 2");
  if (k_folds > n) throw input_error("k_folds exceeds the number of graphs");

  FoldPlan plan;
  plan.seed = seed;
  plan.k_folds = k_folds;
  plan.fold_assignment.assign(n, -1);
  Rng rng(derive_seed(seed, 0xf01d5ULL));

  bool stratify = d.task_kind == TaskKind::classification;
  std::vector<std::vector<int>> by_class;
  if (stratify) {
    by_class.resize(d.class_count);
    for (int i = 0; i < n; ++i) by_class[d.graphs[i].label].push_back(i);
    for (const auto& members : by_class)
      if ((int)members.size() < k_folds) {
        stratify = false;
        if (warn)
          *warn << "warning: a class has fewer than " << k_folds
                << " graphs; falling back to an unstratified split\n";
        break;
      }
  }

  if (!stratify) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (int i = 0; i < n; ++i) plan.fold_assignment[order[i]] = i % k_folds;
    return plan;
  }

  // Per class: give every fold floor(n_c / k) members, then hand the
  // remainder one-per-fold to the folds with the smallest total load
  // (ties by fold index). Keeps total fold sizes within 1 of each other
  // and per-class counts within 1.
  std::vector<int> load(k_folds, 0);
  for (int c = 0; c < d.class_count; ++c) {
    std::vector<int> members = by_class[c];
    rng.shuffle(members);
    const int base = (int)members.size() / k_folds;
    const int rem = (int)members.size() % k_folds;
    std::size_t next = 0;
    for (int f = 0; f < k_folds; ++f)
      for (int t = 0; t < base; ++t) {
        plan.fold_assignment[members[next++]] = f;
        ++load[f];
      }
    std::vector<int> folds_by_load(k_folds);
    for (int f = 0; f < k_folds; ++f) folds_by_load[f] = f;
    std::stable_sort(folds_by_load.begin(), folds_by_load.end(),
                     [&](int x, int y) { return load[x] < load[y]; });
    for (int r = 0; r < rem; ++r) {
      int f = folds_by_load[r];
      plan.fold_assignment[members[next++]] = f;
      ++load[f];
    }
  }
  return plan;
}

std::vector<int> fold_train_indices(const FoldPlan& p, int fold) {
  std::vector<int> out;
  for (int i = 0; i < (int)p.fold_assignment.size(); ++i)
    if (p.fold_assignment[i] != fold) out.push_back(i);
  return out;
}

std::vector<int> fold_test_indices(const FoldPlan& p, int fold) {
  std::vector<int> out;
  for (int i = 0; i < (int)p.fold_assignment.size(); ++i)
    if (p.fold_assignment[i] == fold) out.push_back(i);
  return out;
}

}  // namespace divgnn
