#pragma once

#include <span>
#include <string>
#include <vector>

#include "cct/bandit.hpp"

namespace cct {

double accuracy(std::span<const double> preds, std::span<const double> targets);
double rmse(std::span<const double> preds, std::span<const double> targets);

/// Counts of argmax recommendations over a view; sums to the sample count.
std::vector<std::size_t> selection_histogram(const PolicyNet &net, const BanditView &view);

struct ModelResult {
  std::string model;
  double metric_mean = 0.0;
  double metric_std = 0.0;
  bool has_std = false;  // deterministic models report no std
  std::size_t seeds = 1;
};

struct ComparisonReport {
  std::string dataset;
  std::string metric_name;  // "accuracy" or "rmse"
  std::vector<ModelResult> rows;

  std::string to_csv() const;   // comparison.csv layout
  std::string to_text() const;  // aligned table
  const ModelResult *find(const std::string &model) const;
};

/// Test-split comparison of the contextual model (per policy seed), the CART
/// baseline, the supervised baseline (per seed), and the full forest.
ComparisonReport compare_models(const std::string &dataset_name,
                                const BanditView &test,
                                const std::vector<PolicyNet> &contextual_nets,
                                const DecisionTree &cart,
                                const std::vector<PolicyNet> &supervised_nets,
                                const RandomForest &rf, const Dataset &ds,
                                const std::vector<std::size_t> &test_indices);

std::string reward_curve_csv(const TrainReport &report);
std::string selection_histogram_csv(std::span<const std::size_t> counts);

double mean_of(std::span<const double> v);
double std_of(std::span<const double> v);  // population std
double median_of(std::vector<double> v);

}  // namespace cct
