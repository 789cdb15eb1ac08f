#include "cct/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cct {

int label_classification(const RandomForest &rf, std::span<const double> x_raw,
                         double y, Rng &rng) {
  int best = -1;
  double best_frac = -1.0;
  for (std::size_t i = 0; i < rf.size(); ++i) {
    const TreeNode &leaf = rf.trees()[i].leaf_for(x_raw);
    if (leaf.prediction != y) continue;
    double frac = y > 0 ? leaf.pos_fraction : 1.0 - leaf.pos_fraction;
    if (frac > best_frac) {
      best_frac = frac;
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) return best;
  return static_cast<int>(rng.uniform_int(rf.size()));
}

int label_regression(const RandomForest &rf, std::span<const double> x_raw, double y) {
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rf.size(); ++i) {
    double e = rf.trees()[i].predict(x_raw) - y;
    double sq = e * e;
    if (sq < best_err) {
      best_err = sq;
      best = static_cast<int>(i);
    }
  }
  return best;
}

std::vector<int> label_samples(const RandomForest &rf, const Dataset &ds,
                               const std::vector<std::size_t> &indices,
                               std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5B));
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (auto i : indices) {
    const auto &s = ds.samples[i];
    labels.push_back(rf.task() == Task::Classification
                         ? label_classification(rf, s.features, s.target, rng)
                         : label_regression(rf, s.features, s.target));
  }
  return labels;
}

double cross_entropy(const PolicyNet &net, const BanditView &view,
                     const std::vector<int> &labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < view.contexts.size(); ++i) {
    ForwardCache c = net.forward(view.contexts[i]);
    sum -= c.log_probs[static_cast<std::size_t>(labels[i])];
  }
  return sum / static_cast<double>(view.contexts.size());
}

std::pair<PolicyNet, TrainReport> train_supervised(const RandomForest &rf,
                                                   const BanditView &train,
                                                   const std::vector<int> &train_labels,
                                                   const BanditView &validation,
                                                   const TrainConfig &cfg) {
  if (train.contexts.size() != train_labels.size())
    throw std::invalid_argument("train_supervised: label count mismatch");
  const std::size_t p = train.contexts[0].size();
  const std::size_t B = rf.size();

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

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::size_t end = std::min(start + cfg.batch_size, order.size());
      std::vector<ForwardCache> caches;
      std::vector<const ForwardCache *> cache_ptrs;
      std::vector<int> labels;
      caches.reserve(end - start);
      for (std::size_t k = start; k < end; ++k) {
        std::size_t row = order[k];
        caches.push_back(net.forward(train.contexts[row], PolicyMode::Train, rng));
        labels.push_back(train_labels[row]);
        loss_sum -= caches.back().log_probs[static_cast<std::size_t>(labels.back())];
      }
      for (const auto &c : caches) cache_ptrs.push_back(&c);
      PolicyGradients grads = grad_cross_entropy(net, cache_ptrs, labels);
      adam_step(net, grads, adam, lr);
      ++batches;
    }

    EpochStats es;
    es.epoch = epoch;
    es.mean_reward = -loss_sum / static_cast<double>(order.size());  // -CE, for the curve
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

}  // namespace cct
