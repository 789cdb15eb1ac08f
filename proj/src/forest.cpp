#include "cct/forest.hpp"

#include <cmath>
#include <numeric>

namespace cct {

int default_feature_subsample(std::size_t p, Task task) {
  double raw = task == Task::Classification
                   ? std::sqrt(static_cast<double>(p))
                   : static_cast<double>(p) / 3.0;
  int k = static_cast<int>(std::ceil(raw));
  return std::max(1, std::min(k, static_cast<int>(p)));
}

RandomForest fit_forest(const std::vector<Sample> &train,
                        std::span<const std::size_t> train_idx, std::size_t B,
                        int max_depth, std::uint64_t seed, Task task) {
  if (train_idx.empty()) throw std::invalid_argument("fit_forest: no samples");
  if (B < 1) throw std::invalid_argument("fit_forest: B must be >= 1");
  const std::size_t n = train_idx.size();
  const std::size_t p = train[train_idx[0]].features.size();
  const int subsample = default_feature_subsample(p, task);

  std::vector<DecisionTree> trees;
  trees.reserve(B);
  for (std::size_t b = 0; b < B; ++b) {
    Rng boot(derive_seed(seed, 2 * b));
    Rng node_rng(derive_seed(seed, 2 * b + 1));
    std::vector<std::size_t> bag(n);
    for (std::size_t i = 0; i < n; ++i) bag[i] = train_idx[boot.uniform_int(n)];
    trees.push_back(fit_tree(train, bag, max_depth, subsample, node_rng, task));
  }
  return RandomForest(std::move(trees), task, p, subsample, max_depth, seed);
}

RandomForest fit_forest(const std::vector<Sample> &train, std::size_t B,
                        int max_depth, std::uint64_t seed, Task task) {
  std::vector<std::size_t> idx(train.size());
  std::iota(idx.begin(), idx.end(), 0);
  return fit_forest(train, idx, B, max_depth, seed, task);
}

double aggregate_predictions(std::span<const double> tree_preds, Task task) {
  if (task == Task::Classification) {
    std::size_t pos = 0;
    for (double v : tree_preds)
      if (v > 0) ++pos;
    return 2 * pos > tree_preds.size() ? +1.0 : -1.0;  // ties -> -1
  }
  double sum = 0.0;
  for (double v : tree_preds) sum += v;
  return sum / static_cast<double>(tree_preds.size());
}

double RandomForest::predict(std::span<const double> x) const {
  auto preds = per_tree_predictions(x);
  return aggregate_predictions(preds, task_);
}

std::vector<double> RandomForest::per_tree_predictions(std::span<const double> x) const {
  std::vector<double> out(trees_.size());
  for (std::size_t i = 0; i < trees_.size(); ++i) out[i] = trees_[i].predict(x);
  return out;
}

double RandomForest::vote_fraction_positive(std::span<const double> x) const {
  std::size_t pos = 0;
  for (const auto &t : trees_)
    if (t.predict(x) > 0) ++pos;
  return static_cast<double>(pos) / static_cast<double>(trees_.size());
}

}  // namespace cct
