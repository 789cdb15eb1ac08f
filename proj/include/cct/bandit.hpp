#pragma once

#include <span>
#include <vector>

#include "cct/dataset.hpp"
#include "cct/forest.hpp"
#include "cct/policy.hpp"

namespace cct {

/// Eq.-style rewards: exact match (+1/-1) for classification; for regression
/// the chosen tree's squared error min-max normalized against the forest's
/// best and worst squared error on that sample, mapped to [-1, +1].
double reward_classification(double predicted, double y);
double reward_regression(double chosen_sq_err, std::span<const double> all_sq_errs);

/// Contexts for the policy (standardized features), raw targets, and the
/// precomputed per-tree predictions of every sample. Rows follow the split's
/// index order, not the dataset's.
struct BanditView {
  std::vector<std::vector<double>> contexts;    // standardized, for the net
  std::vector<double> targets;
  std::vector<std::vector<double>> tree_preds;  // per sample: B predictions
  Task task = Task::Classification;
};

BanditView make_bandit_view(const Dataset &ds, const std::vector<std::size_t> &indices,
                            const FeatureStats &stats, const RandomForest &rf);

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 2000;
  double entropy_coeff = 1e-4;
  std::size_t early_stop_patience = 100;
  std::uint64_t seed = 0;
  double initial_lr = 1e-3;
  std::size_t hidden1 = 64, hidden2 = 64;
  double dropout_rate = 0.2;
};

struct EpochStats {
  std::size_t epoch = 0;
  double mean_reward = 0.0;
  double val_metric = 0.0;  // accuracy (higher better) or rmse (lower better)
  double lr = 0.0;
  std::vector<std::size_t> selection_histogram;  // argmax counts on validation
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;
  double best_val_metric = 0.0;
};

/// Reward of action `a` for sample row `i` of a view.
double episode_reward(const BanditView &view, std::size_t i, int action);

/// One Algorithm-1 step over a minibatch: sample actions from train-mode
/// forward passes, compute rewards, take a single ADAM step on the
/// REINFORCE+entropy loss. Returns the batch mean reward.
double policy_update(PolicyNet &net, AdamState &adam, const BanditView &view,
                     std::span<const std::size_t> batch_rows, double lr,
                     double entropy_coeff, Rng &rng);

/// Full REINFORCE training loop with per-epoch cosine learning rate,
/// validation via argmax recommendation, and patience-based early stopping.
/// Returns the best-validation checkpoint.
std::pair<PolicyNet, TrainReport> train_policy(const RandomForest &rf,
                                               const BanditView &train,
                                               const BanditView &validation,
                                               const TrainConfig &cfg);

/// argmax of the eval-mode action distribution; ties -> lowest index.
int recommend_tree(const PolicyNet &net, std::span<const double> x_std);

struct ContextualPrediction {
  double prediction = 0.0;
  int tree_index = 0;
  DecisionPath path;
};

/// The CCT/CRT predictor: standardize for the net, recommend a tree, predict
/// with that tree on the raw features, and return its decision path.
ContextualPrediction predict_contextual(const PolicyNet &net, const RandomForest &rf,
                                        const FeatureStats &stats,
                                        std::span<const double> x_raw);

/// Validation metric of the contextual predictor over a view: accuracy for
/// classification, RMSE for regression.
double contextual_metric(const PolicyNet &net, const BanditView &view);

}  // namespace cct
