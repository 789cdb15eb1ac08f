#pragma once

#include <span>
#include <vector>

#include "cct/tree.hpp"

namespace cct {

/// Bagged ensemble of shallow CART trees. The tree order is fixed at fit time;
/// index i refers to trees()[i] for the lifetime of the artifact (the policy's
/// action set depends on it).
class RandomForest {
public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, Task task, std::size_t feature_count,
               int feature_subsample, int max_depth, std::uint64_t seed)
      : trees_(std::move(trees)), task_(task), feature_count_(feature_count),
        feature_subsample_(feature_subsample), max_depth_(max_depth), seed_(seed) {}

  std::size_t size() const { return trees_.size(); }
  const std::vector<DecisionTree> &trees() const { return trees_; }
  Task task() const { return task_; }
  std::size_t feature_count() const { return feature_count_; }
  int feature_subsample() const { return feature_subsample_; }
  int max_depth() const { return max_depth_; }
  std::uint64_t seed() const { return seed_; }

  /// Majority vote (ties -> -1) or mean, per task.
  double predict(std::span<const double> x) const;

  /// Prediction of every tree, position i = trees()[i].
  std::vector<double> per_tree_predictions(std::span<const double> x) const;

  /// Fraction of trees voting +1 (classification only); serves the supervised
  /// baseline's probability-style labeling.
  double vote_fraction_positive(std::span<const double> x) const;

private:
  std::vector<DecisionTree> trees_;
  Task task_ = Task::Classification;
  std::size_t feature_count_ = 0;
  int feature_subsample_ = 0;
  int max_depth_ = 1;
  std::uint64_t seed_ = 0;
};

/// Default per-node feature subsample size: ceil(sqrt(p)) for classification,
/// ceil(p/3) for regression.
int default_feature_subsample(std::size_t p, Task task);

/// Fit B trees on bootstrap resamples (n draws with replacement each) with
/// per-node feature subsampling. Deterministic for a fixed seed; each tree
/// consumes an independent derived seed stream.
RandomForest fit_forest(const std::vector<Sample> &train,
                        std::span<const std::size_t> train_idx, std::size_t B,
                        int max_depth, std::uint64_t seed, Task task);

RandomForest fit_forest(const std::vector<Sample> &train, std::size_t B,
                        int max_depth, std::uint64_t seed, Task task);

/// Aggregate a per-tree prediction vector the same way predict() does.
double aggregate_predictions(std::span<const double> tree_preds, Task task);

}  // namespace cct
