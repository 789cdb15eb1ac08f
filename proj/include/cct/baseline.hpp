#pragma once

#include <span>
#include <vector>

#include "cct/bandit.hpp"

namespace cct {

/// Supervised baseline: per-sample tree-index labels plus cross-entropy
/// training of the same network architecture.

/// Among the trees predicting y correctly, pick the one whose leaf vote
/// fraction for y is highest (ties -> lowest index). When no tree is correct
/// the label is a uniform draw over all B trees.
int label_classification(const RandomForest &rf, std::span<const double> x_raw,
                         double y, Rng &rng);

/// argmin of the squared error against the target; ties -> lowest index.
int label_regression(const RandomForest &rf, std::span<const double> x_raw, double y);

/// Labels for every row of a raw-feature sample list, split-index order.
std::vector<int> label_samples(const RandomForest &rf, const Dataset &ds,
                               const std::vector<std::size_t> &indices,
                               std::uint64_t seed);

/// Mean cross-entropy of the eval-mode policy against the labels (reporting).
double cross_entropy(const PolicyNet &net, const BanditView &view,
                     const std::vector<int> &labels);

/// Train the same architecture with cross-entropy on tree-index labels; same
/// optimizer, schedule, dropout, and early stopping on the validation
/// predictive metric (argmax recommendation).
std::pair<PolicyNet, TrainReport> train_supervised(const RandomForest &rf,
                                                   const BanditView &train,
                                                   const std::vector<int> &train_labels,
                                                   const BanditView &validation,
                                                   const TrainConfig &cfg);

}  // namespace cct
