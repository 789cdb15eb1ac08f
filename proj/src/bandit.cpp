#include "cct/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cct {

double reward_classification(double predicted, double y) {
  return predicted == y ? +1.0 : -1.0;
}

double reward_regression(double chosen_sq_err, std::span<const double> all_sq_errs) {
  auto [mn_it, mx_it] = std::minmax_element(all_sq_errs.begin(), all_sq_errs.end());
  double mn = *mn_it, mx = *mx_it;
  if (mx <= mn) return +1.0;  // all trees tie; any action is optimal
  double d = (chosen_sq_err - mn) / (mx - mn);
  return 1.0 - 2.0 * d;
}

BanditView make_bandit_view(const Dataset &ds, const std::vector<std::size_t> &indices,
                            const FeatureStats &stats, const RandomForest &rf) {
  BanditView v;
  v.task = ds.task;
  v.contexts.reserve(indices.size());
  v.targets.reserve(indices.size());
  v.tree_preds.reserve(indices.size());
  for (auto i : indices) {
    const auto &s = ds.samples[i];
    v.contexts.push_back(standardize_row(s.features, stats));
    v.targets.push_back(s.target);
    v.tree_preds.push_back(rf.per_tree_predictions(s.features));
  }
  return v;
}

double episode_reward(const BanditView &view, std::size_t i, int action) {
  const auto &preds = view.tree_preds[i];
  if (view.task == Task::Classification)
    return reward_classification(preds[static_cast<std::size_t>(action)], view.targets[i]);
  std::vector<double> sq(preds.size());
  for (std::size_t b = 0; b < preds.size(); ++b) {
    double e = preds[b] - view.targets[i];
    sq[b] = e * e;
  }
  return reward_regression(sq[static_cast<std::size_t>(action)], sq);
}

double policy_update(PolicyNet &net, AdamState &adam, const BanditView &view,
                     std::span<const std::size_t> batch_rows, double lr,
                     double entropy_coeff, Rng &rng) {
  if (batch_rows.empty()) throw std::invalid_argument("policy_update: empty batch");
  std::vector<Episode> episodes;
  episodes.reserve(batch_rows.size());
  double reward_sum = 0.0;
  for (auto row : batch_rows) {
    Episode e;
    e.cache = net.forward(view.contexts[row], PolicyMode::Train, rng);
    e.action = sample_action(e.cache.probs, rng);
    e.reward = episode_reward(view, row, e.action);
    reward_sum += e.reward;
    episodes.push_back(std::move(e));
  }
  PolicyGradients grads = grad_batch(net, episodes, entropy_coeff);
  adam_step(net, grads, adam, lr);
  return reward_sum / static_cast<double>(batch_rows.size());
}

int recommend_tree(const PolicyNet &net, std::span<const double> x_std) {
  ForwardCache c = net.forward(x_std);
  int best = 0;
  for (std::size_t k = 1; k < c.probs.size(); ++k)
    if (c.probs[k] > c.probs[static_cast<std::size_t>(best)])
      best = static_cast<int>(k);
  return best;
}

double contextual_metric(const PolicyNet &net, const BanditView &view) {
  double acc = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < view.contexts.size(); ++i) {
    int t = recommend_tree(net, view.contexts[i]);
    double pred = view.tree_preds[i][static_cast<std::size_t>(t)];
    if (view.task == Task::Classification) {
      acc += pred == view.targets[i] ? 1.0 : 0.0;
    } else {
      double e = pred - view.targets[i];
      sq += e * e;
    }
  }
  double n = static_cast<double>(view.contexts.size());
  return view.task == Task::Classification ? acc / n : std::sqrt(sq / n);
}

std::pair<PolicyNet, TrainReport> train_policy(const RandomForest &rf,
                                               const BanditView &train,
                                               const BanditView &validation,
                                               const TrainConfig &cfg) {
  if (train.contexts.empty() || validation.contexts.empty())
    throw std::invalid_argument("train_policy: empty split");
  const std::size_t p = train.contexts[0].size();
  const std::size_t B = rf.size();
  if (train.tree_preds[0].size() != B)
    throw std::invalid_argument("train_policy: view/forest size mismatch");

  PolicyNet net(p, cfg.hidden1, cfg.hidden2, B, cfg.dropout_rate,
                derive_seed(cfg.seed, 11));
  AdamState adam = make_adam_state(net);
  Rng rng(derive_seed(cfg.seed, 13));
  LrSchedule schedule{cfg.initial_lr, cfg.max_epochs, 0.0};

  const bool higher_better = train.task == Task::Classification;
  TrainReport report;
  PolicyNet best_net = net;
  double best_metric = higher_better ? -1.0 : std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train.contexts.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double lr = lr_at(schedule, epoch);
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng.uniform_int(i)]);

    double reward_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(start + cfg.batch_size, order.size());
      std::span<const std::size_t> batch(order.data() + start, end - start);
      reward_sum += policy_update(net, adam, train, batch, lr, cfg.entropy_coeff, rng);
      ++batches;
    }

    EpochStats es;
    es.epoch = epoch;
    es.mean_reward = reward_sum / static_cast<double>(batches);
    es.lr = lr;
    es.selection_histogram.assign(B, 0);
    double acc = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < validation.contexts.size(); ++i) {
      int t = recommend_tree(net, validation.contexts[i]);
      ++es.selection_histogram[static_cast<std::size_t>(t)];
      double pred = validation.tree_preds[i][static_cast<std::size_t>(t)];
      if (validation.task == Task::Classification) {
        acc += pred == validation.targets[i] ? 1.0 : 0.0;
      } else {
        double e = pred - validation.targets[i];
        sq += e * e;
      }
    }
    double vn = static_cast<double>(validation.contexts.size());
    es.val_metric = validation.task == Task::Classification ? acc / vn
                                                            : std::sqrt(sq / vn);
    report.epochs.push_back(es);

    bool improved = higher_better ? es.val_metric > best_metric
                                  : es.val_metric < best_metric;
    if (improved) {
      best_metric = es.val_metric;
      best_net = net;
      report.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.early_stop_patience) {
      break;
    }
  }
  report.best_val_metric = best_metric;
  return {std::move(best_net), std::move(report)};
}

ContextualPrediction predict_contextual(const PolicyNet &net, const RandomForest &rf,
                                        const FeatureStats &stats,
                                        std::span<const double> x_raw) {
  std::vector<double> raw(x_raw.begin(), x_raw.end());
  std::vector<double> x_std = standardize_row(raw, stats);
  ContextualPrediction out;
  out.tree_index = recommend_tree(net, x_std);
  const DecisionTree &tree = rf.trees()[static_cast<std::size_t>(out.tree_index)];
  out.path = tree.decision_path(raw);
  out.prediction = out.path.prediction;
  return out;
}

}  // namespace cct
