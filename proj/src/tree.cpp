#include "cct/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cct {

namespace {

constexpr double kGainEps = 1e-12;

struct ClassCounts {
  std::size_t n = 0, pos = 0;
  void add(double y) { ++n; if (y > 0) ++pos; }
  void remove(double y) { --n; if (y > 0) --pos; }
  double gini() const {
    if (n == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(n);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  }
};

struct Moments {
  std::size_t n = 0;
  double sum = 0.0, sum_sq = 0.0;
  void add(double y) { ++n; sum += y; sum_sq += y * y; }
  void remove(double y) { --n; sum -= y; sum_sq -= y * y; }
  double variance() const {
    if (n == 0) return 0.0;
    double m = sum / static_cast<double>(n);
    double v = sum_sq / static_cast<double>(n) - m * m;
    return v > 0.0 ? v : 0.0;
  }
};

}  // namespace

double impurity(std::span<const double> targets, Task task) {
  if (targets.empty()) throw std::invalid_argument("impurity of empty target list");
  if (task == Task::Classification) {
    ClassCounts c;
    for (double y : targets) c.add(y);
    return c.gini();
  }
  Moments m;
  for (double y : targets) m.add(y);
  return m.variance();
}

std::optional<SplitChoice> best_split(const std::vector<Sample> &samples,
                                      std::span<const std::size_t> sample_idx,
                                      std::span<const int> candidate_features,
                                      Task task) {
  const std::size_t n = sample_idx.size();
  if (n < 2) return std::nullopt;

  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = samples[sample_idx[i]].target;
  const double parent = impurity(targets, task);
  if (parent <= 0.0) return std::nullopt;

  std::optional<SplitChoice> best;
  std::vector<std::pair<double, double>> vals(n);  // (feature value, target)

  for (int f : candidate_features) {
    for (std::size_t i = 0; i < n; ++i) {
      const Sample &s = samples[sample_idx[i]];
      vals[i] = {s.features[static_cast<std::size_t>(f)], s.target};
    }
    std::sort(vals.begin(), vals.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    // incremental left/right statistics; scan thresholds between distinct values
    ClassCounts lc, rc;
    Moments lm, rm;
    if (task == Task::Classification)
      for (const auto &[v, y] : vals) rc.add(y);
    else
      for (const auto &[v, y] : vals) rm.add(y);

    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (task == Task::Classification) {
        lc.add(vals[i].second);
        rc.remove(vals[i].second);
      } else {
        lm.add(vals[i].second);
        rm.remove(vals[i].second);
      }
      if (vals[i].first == vals[i + 1].first) continue;
      const double thr = vals[i].first + 0.5 * (vals[i + 1].first - vals[i].first);
      const double nl = static_cast<double>(i + 1);
      const double nr = static_cast<double>(n - i - 1);
      const double child =
          task == Task::Classification
              ? (nl * lc.gini() + nr * rc.gini()) / static_cast<double>(n)
              : (nl * lm.variance() + nr * rm.variance()) / static_cast<double>(n);
      const double gain = parent - child;
      if (gain > kGainEps && (!best || gain > best->gain + kGainEps))
        best = SplitChoice{f, thr, gain};
    }
  }
  return best;
}

namespace {

int make_leaf(std::vector<TreeNode> &nodes, const std::vector<Sample> &samples,
              std::span<const std::size_t> idx, Task task) {
  TreeNode leaf;
  leaf.is_leaf = true;
  leaf.n_samples = idx.size();
  std::vector<double> targets;
  targets.reserve(idx.size());
  for (auto i : idx) targets.push_back(samples[i].target);
  leaf.impurity = impurity(targets, task);
  if (task == Task::Classification) {
    std::size_t pos = 0;
    for (double y : targets)
      if (y > 0) ++pos;
    leaf.pos_fraction = static_cast<double>(pos) / static_cast<double>(idx.size());
    // majority; ties resolve to -1
    leaf.prediction = 2 * pos > idx.size() ? +1.0 : -1.0;
  } else {
    leaf.prediction = std::accumulate(targets.begin(), targets.end(), 0.0) /
                      static_cast<double>(idx.size());
  }
  nodes.push_back(leaf);
  return static_cast<int>(nodes.size() - 1);
}

int grow(std::vector<TreeNode> &nodes, const std::vector<Sample> &samples,
         std::vector<std::size_t> &idx, int depth, int max_depth,
         int feature_subsample, Rng &rng, Task task, std::size_t p) {
  if (depth >= max_depth || idx.size() < 2)
    return make_leaf(nodes, samples, idx, task);

  std::vector<int> candidates;
  if (feature_subsample > 0 && static_cast<std::size_t>(feature_subsample) < p) {
    // partial Fisher-Yates draw without replacement, then sorted so the
    // (lowest feature, lowest threshold) tie-break is well defined
    std::vector<int> all(p);
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < feature_subsample; ++k) {
      std::size_t j = k + rng.uniform_int(p - static_cast<std::size_t>(k));
      std::swap(all[static_cast<std::size_t>(k)], all[j]);
    }
    candidates.assign(all.begin(), all.begin() + feature_subsample);
    std::sort(candidates.begin(), candidates.end());
  } else {
    candidates.resize(p);
    std::iota(candidates.begin(), candidates.end(), 0);
  }

  auto split = best_split(samples, idx, candidates, task);
  if (!split) return make_leaf(nodes, samples, idx, task);

  std::vector<std::size_t> left_idx, right_idx;
  for (auto i : idx) {
    if (samples[i].features[static_cast<std::size_t>(split->feature)] <= split->threshold)
      left_idx.push_back(i);
    else
      right_idx.push_back(i);
  }

  TreeNode node;
  node.is_leaf = false;
  node.feature = split->feature;
  node.threshold = split->threshold;
  node.n_samples = idx.size();
  nodes.push_back(node);
  int self = static_cast<int>(nodes.size() - 1);
  nodes[static_cast<std::size_t>(self)].left =
      grow(nodes, samples, left_idx, depth + 1, max_depth, feature_subsample, rng, task, p);
  nodes[static_cast<std::size_t>(self)].right =
      grow(nodes, samples, right_idx, depth + 1, max_depth, feature_subsample, rng, task, p);
  return self;
}

}  // namespace

DecisionTree fit_tree(const std::vector<Sample> &samples,
                      std::span<const std::size_t> sample_idx, int max_depth,
                      int feature_subsample, Rng &rng, Task task) {
  if (sample_idx.empty()) throw std::invalid_argument("fit_tree: no samples");
  if (max_depth < 1) throw std::invalid_argument("fit_tree: max_depth must be >= 1");
  const std::size_t p = samples[sample_idx[0]].features.size();
  std::vector<TreeNode> nodes;
  std::vector<std::size_t> idx(sample_idx.begin(), sample_idx.end());
  grow(nodes, samples, idx, 0, max_depth, feature_subsample, rng, task, p);
  return DecisionTree(std::move(nodes), max_depth, task);
}

DecisionTree fit_tree(const std::vector<Sample> &samples, int max_depth,
                      int feature_subsample, Rng &rng, Task task) {
  std::vector<std::size_t> idx(samples.size());
  std::iota(idx.begin(), idx.end(), 0);
  return fit_tree(samples, idx, max_depth, feature_subsample, rng, task);
}

double DecisionTree::predict(std::span<const double> x) const {
  return leaf_for(x).prediction;
}

const TreeNode &DecisionTree::leaf_for(std::span<const double> x) const {
  int cur = 0;
  while (!nodes_[static_cast<std::size_t>(cur)].is_leaf) {
    const TreeNode &n = nodes_[static_cast<std::size_t>(cur)];
    cur = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[static_cast<std::size_t>(cur)];
}

DecisionPath DecisionTree::decision_path(std::span<const double> x) const {
  DecisionPath path;
  int cur = 0;
  while (!nodes_[static_cast<std::size_t>(cur)].is_leaf) {
    const TreeNode &n = nodes_[static_cast<std::size_t>(cur)];
    bool left = x[static_cast<std::size_t>(n.feature)] <= n.threshold;
    path.steps.push_back({n.feature, n.threshold, left});
    cur = left ? n.left : n.right;
  }
  path.prediction = nodes_[static_cast<std::size_t>(cur)].prediction;
  return path;
}

std::string DecisionPath::to_text() const {
  std::ostringstream out;
  for (const auto &s : steps) {
    out << "feature[" << s.feature << "] <= " << s.threshold << "  -> "
        << (s.went_left ? "yes" : "no") << '\n';
  }
  out << "prediction: " << prediction << '\n';
  return out.str();
}

int DecisionTree::depth() const {
  // iterative depth over the flat node array
  struct Item { int node; int d; };
  std::vector<Item> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    auto [ni, d] = stack.back();
    stack.pop_back();
    const TreeNode &n = nodes_[static_cast<std::size_t>(ni)];
    if (n.is_leaf) {
      best = std::max(best, d);
    } else {
      stack.push_back({n.left, d + 1});
      stack.push_back({n.right, d + 1});
    }
  }
  return best;
}

}  // namespace cct
