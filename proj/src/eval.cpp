#include "cct/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cct {

double accuracy(std::span<const double> preds, std::span<const double> targets) {
  if (preds.size() != targets.size())
    throw std::invalid_argument("accuracy: length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == targets[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double rmse(std::span<const double> preds, std::span<const double> targets) {
  if (preds.size() != targets.size())
    throw std::invalid_argument("rmse: length mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    double e = preds[i] - targets[i];
    sq += e * e;
  }
  return std::sqrt(sq / static_cast<double>(preds.size()));
}

std::vector<std::size_t> selection_histogram(const PolicyNet &net, const BanditView &view) {
  std::vector<std::size_t> counts(net.output_dim(), 0);
  for (const auto &x : view.contexts)
    ++counts[static_cast<std::size_t>(recommend_tree(net, x))];
  return counts;
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

double metric_of(const BanditView &view, std::span<const double> preds) {
  return view.task == Task::Classification ? accuracy(preds, view.targets)
                                           : rmse(preds, view.targets);
}

ModelResult seeded_result(const std::string &name, const std::vector<double> &metrics) {
  ModelResult r;
  r.model = name;
  r.metric_mean = mean_of(metrics);
  r.metric_std = std_of(metrics);
  r.has_std = true;
  r.seeds = metrics.size();
  return r;
}

}  // namespace

ComparisonReport compare_models(const std::string &dataset_name,
                                const BanditView &test,
                                const std::vector<PolicyNet> &contextual_nets,
                                const DecisionTree &cart,
                                const std::vector<PolicyNet> &supervised_nets,
                                const RandomForest &rf, const Dataset &ds,
                                const std::vector<std::size_t> &test_indices) {
  ComparisonReport rep;
  rep.dataset = dataset_name;
  rep.metric_name = test.task == Task::Classification ? "accuracy" : "rmse";

  auto net_metrics = [&](const std::vector<PolicyNet> &nets) {
    std::vector<double> out;
    for (const auto &net : nets) {
      std::vector<double> preds(test.contexts.size());
      for (std::size_t i = 0; i < test.contexts.size(); ++i) {
        int t = recommend_tree(net, test.contexts[i]);
        preds[i] = test.tree_preds[i][static_cast<std::size_t>(t)];
      }
      out.push_back(metric_of(test, preds));
    }
    return out;
  };

  if (!contextual_nets.empty())
    rep.rows.push_back(seeded_result("contextual", net_metrics(contextual_nets)));

  {
    std::vector<double> preds(test_indices.size());
    for (std::size_t i = 0; i < test_indices.size(); ++i)
      preds[i] = cart.predict(ds.samples[test_indices[i]].features);
    ModelResult r;
    r.model = "cart";
    r.metric_mean = metric_of(test, preds);
    rep.rows.push_back(r);
  }

  if (!supervised_nets.empty())
    rep.rows.push_back(seeded_result("supervised", net_metrics(supervised_nets)));

  {
    std::vector<double> preds(test.contexts.size());
    for (std::size_t i = 0; i < test.contexts.size(); ++i)
      preds[i] = aggregate_predictions(test.tree_preds[i], test.task);
    ModelResult r;
    r.model = "random_forest";
    r.metric_mean = metric_of(test, preds);
    rep.rows.push_back(r);
  }
  return rep;
}

const ModelResult *ComparisonReport::find(const std::string &model) const {
  for (const auto &r : rows)
    if (r.model == model) return &r;
  return nullptr;
}

std::string ComparisonReport::to_csv() const {
  std::ostringstream out;
  out.precision(10);
  out << "model,dataset,metric_mean,metric_std,seeds\n";
  for (const auto &r : rows) {
    out << r.model << ',' << dataset << ',' << r.metric_mean << ',';
    if (r.has_std) out << r.metric_std;
    out << ',' << r.seeds << '\n';
  }
  return out.str();
}

std::string ComparisonReport::to_text() const {
  std::ostringstream out;
  out << dataset << " (" << metric_name << ")\n";
  for (const auto &r : rows) {
    out << "  " << std::left << std::setw(14) << r.model << std::right
        << std::fixed << std::setprecision(4) << r.metric_mean;
    if (r.has_std)
      out << " +/- " << std::setprecision(4) << r.metric_std << "  (" << r.seeds
          << " seeds)";
    out << '\n';
  }
  return out.str();
}

std::string reward_curve_csv(const TrainReport &report) {
  std::ostringstream out;
  out.precision(10);
  out << "epoch,mean_reward,val_metric,lr\n";
  for (const auto &e : report.epochs)
    out << e.epoch << ',' << e.mean_reward << ',' << e.val_metric << ',' << e.lr << '\n';
  return out.str();
}

std::string selection_histogram_csv(std::span<const std::size_t> counts) {
  std::ostringstream out;
  out << "tree_index,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i)
    out << i << ',' << counts[i] << '\n';
  return out.str();
}

}  // namespace cct
