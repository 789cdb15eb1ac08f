#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cct/common.hpp"
#include "cct/dataset.hpp"

namespace cct {

/// Node of a CART tree, stored in a flat array addressed by index.
/// Leaves carry the training statistics needed later by the supervised
/// baseline (sample count, impurity, positive-vote fraction).
struct TreeNode {
  bool is_leaf = true;
  int feature = -1;          // internal nodes
  double threshold = 0.0;    // internal nodes; <= goes left
  int left = -1, right = -1;
  double prediction = 0.0;   // leaves: majority class or mean target
  std::size_t n_samples = 0;
  double impurity = 0.0;
  double pos_fraction = 0.0;  // leaves, classification: fraction of +1 samples
};

/// One traversed rule: feature[j] <= threshold, and which way the sample went.
struct PathStep {
  int feature;
  double threshold;
  bool went_left;
};

struct DecisionPath {
  std::vector<PathStep> steps;
  double prediction = 0.0;
  std::string to_text() const;
};

struct SplitChoice {
  int feature;
  double threshold;
  double gain;
};

class DecisionTree {
public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, int max_depth, Task task)
      : nodes_(std::move(nodes)), max_depth_(max_depth), task_(task) {}

  double predict(std::span<const double> x) const;
  DecisionPath decision_path(std::span<const double> x) const;
  const TreeNode &leaf_for(std::span<const double> x) const;

  const std::vector<TreeNode> &nodes() const { return nodes_; }
  int max_depth() const { return max_depth_; }
  Task task() const { return task_; }
  int depth() const;  // observed depth (internal nodes on longest path)

private:
  std::vector<TreeNode> nodes_;
  int max_depth_ = 1;
  Task task_ = Task::Classification;
};

/// Gini impurity (classification, labels in {-1,+1}) or population variance
/// (regression). Errors on an empty target list.
double impurity(std::span<const double> targets, Task task);

/// Best axis-aligned split over the candidate features: maximizes the
/// size-weighted impurity decrease, thresholds at midpoints of consecutive
/// distinct sorted values, ties broken by (lowest feature, lowest threshold).
/// Empty result means no split has positive gain.
std::optional<SplitChoice> best_split(const std::vector<Sample> &samples,
                                      std::span<const std::size_t> sample_idx,
                                      std::span<const int> candidate_features,
                                      Task task);

/// Greedy recursive CART induction with a hard depth cap. When
/// `feature_subsample` is positive and < p, each node draws a fresh uniform
/// feature subset of that size from `rng`.
DecisionTree fit_tree(const std::vector<Sample> &samples,
                      std::span<const std::size_t> sample_idx, int max_depth,
                      int feature_subsample, Rng &rng, Task task);

DecisionTree fit_tree(const std::vector<Sample> &samples, int max_depth,
                      int feature_subsample, Rng &rng, Task task);

}  // namespace cct
