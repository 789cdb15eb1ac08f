#include <doctest.h>

#include "cct/tree.hpp"
#include "oracles.hpp"

using namespace cct;

namespace {

std::vector<Sample> one_d(std::vector<double> xs, std::vector<double> ys) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(Sample{{xs[i]}, ys[i]});
  return out;
}

std::vector<Sample> random_samples(Rng &rng, std::size_t n, std::size_t p, Task task) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    for (std::size_t j = 0; j < p; ++j)
      s.features.push_back(std::round(rng.normal() * 4.0) / 4.0);  // force ties
    s.target = task == Task::Classification ? (rng.uniform() < 0.5 ? -1.0 : 1.0)
                                            : rng.normal();
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("impurity: gini and variance") {
  std::vector<double> pure{1, 1, 1};
  CHECK(impurity(pure, Task::Classification) == doctest::Approx(0.0));
  std::vector<double> split{1, -1};
  CHECK(impurity(split, Task::Classification) == doctest::Approx(0.5));
  std::vector<double> uneven{1, 1, 1, -1};
  CHECK(impurity(uneven, Task::Classification) == doctest::Approx(0.375));
  std::vector<double> reg{0, 2};
  CHECK(impurity(reg, Task::Regression) == doctest::Approx(1.0));
  CHECK_THROWS(impurity(std::vector<double>{}, Task::Classification));
}

TEST_CASE("best_split: hand example, no-gain cases, tie-breaks") {
  auto samples = one_d({1, 2, 3, 4}, {-1, -1, 1, 1});
  std::vector<std::size_t> idx{0, 1, 2, 3};
  std::vector<int> feats{0};
  auto s = best_split(samples, idx, feats, Task::Classification);
  REQUIRE(s.has_value());
  CHECK(s->feature == 0);
  CHECK(s->threshold == doctest::Approx(2.5));
  CHECK(s->gain == doctest::Approx(0.5));

  auto same = one_d({1, 2, 3}, {1, 1, 1});
  CHECK_FALSE(best_split(same, std::vector<std::size_t>{0, 1, 2}, feats,
                         Task::Classification));

  std::vector<Sample> dup = {Sample{{1.0}, -1.0}, Sample{{1.0}, 1.0}};
  CHECK_FALSE(best_split(dup, std::vector<std::size_t>{0, 1}, feats,
                         Task::Classification));

  // identical gain on two features: lowest feature index wins
  std::vector<Sample> two = {Sample{{0, 0}, -1.0}, Sample{{1, 1}, 1.0}};
  std::vector<int> both{0, 1};
  auto t = best_split(two, std::vector<std::size_t>{0, 1}, both, Task::Classification);
  REQUIRE(t.has_value());
  CHECK(t->feature == 0);
}

TEST_CASE("fit_tree: separable 1-D at depth 1") {
  auto samples = one_d({-2, -1, 1, 2}, {-1, -1, 1, 1});
  Rng rng(1);
  DecisionTree t = fit_tree(samples, 1, 0, rng, Task::Classification);
  CHECK(t.depth() == 1);
  for (const auto &s : samples) CHECK(t.predict(s.features) == s.target);
}

TEST_CASE("fit_tree: depth cap holds on random data") {
  Rng rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    auto samples = random_samples(rng, 40 + rng.uniform_int(60), 4,
                                  rep % 2 ? Task::Regression : Task::Classification);
    int cap = 1 + static_cast<int>(rng.uniform_int(4));
    Rng fit_rng(rep);
    DecisionTree t = fit_tree(samples, cap, 0, fit_rng,
                              rep % 2 ? Task::Regression : Task::Classification);
    CHECK(t.depth() <= cap);
  }
}

TEST_CASE("fit_tree: matches the brute-force greedy oracle") {
  Rng rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    Task task = rep % 2 ? Task::Regression : Task::Classification;
    std::size_t n = 5 + rng.uniform_int(26);
    std::size_t p = 1 + rng.uniform_int(3);
    auto samples = random_samples(rng, n, p, task);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;

    Rng fit_rng(rep);
    DecisionTree t = fit_tree(samples, 2, 0, fit_rng, task);
    auto ref = oracle::grow(samples, idx, 0, 2, task);
    for (const auto &s : samples)
      CHECK(t.predict(s.features) == doctest::Approx(oracle::predict(ref.get(), s.features)).epsilon(1e-12));
  }
}

TEST_CASE("fit_tree: leaf statistics match a re-routing of the training set") {
  Rng rng(9);
  auto samples = random_samples(rng, 120, 3, Task::Regression);
  Rng fit_rng(3);
  DecisionTree t = fit_tree(samples, 3, 0, fit_rng, Task::Regression);
  // group samples by leaf and recheck the stored mean
  std::vector<const TreeNode *> leaves;
  std::vector<double> sums, counts;
  for (const auto &s : samples) {
    const TreeNode &leaf = t.leaf_for(s.features);
    std::size_t k = 0;
    for (; k < leaves.size(); ++k)
      if (leaves[k] == &leaf) break;
    if (k == leaves.size()) {
      leaves.push_back(&leaf);
      sums.push_back(0);
      counts.push_back(0);
    }
    sums[k] += s.target;
    counts[k] += 1;
  }
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    CHECK(leaves[k]->n_samples == static_cast<std::size_t>(counts[k]));
    CHECK(leaves[k]->prediction == doctest::Approx(sums[k] / counts[k]));
  }
}

TEST_CASE("fit_tree: identical inputs and seed give structurally identical trees") {
  Rng rng(31);
  auto samples = random_samples(rng, 80, 5, Task::Classification);
  Rng r1(7), r2(7);
  DecisionTree a = fit_tree(samples, 4, 2, r1, Task::Classification);
  DecisionTree b = fit_tree(samples, 4, 2, r2, Task::Classification);
  REQUIRE(a.nodes().size() == b.nodes().size());
  for (std::size_t i = 0; i < a.nodes().size(); ++i) {
    CHECK(a.nodes()[i].is_leaf == b.nodes()[i].is_leaf);
    CHECK(a.nodes()[i].feature == b.nodes()[i].feature);
    CHECK(a.nodes()[i].threshold == b.nodes()[i].threshold);
    CHECK(a.nodes()[i].prediction == b.nodes()[i].prediction);
  }
}

TEST_CASE("predict and decision_path agree; path renders one rule per hop") {
  // fixed stump: x0 <= 2.5 ? -1 : +1
  std::vector<TreeNode> nodes(3);
  nodes[0] = TreeNode{false, 0, 2.5, 1, 2, 0.0, 4, 0.5, 0.0};
  nodes[1] = TreeNode{true, -1, 0.0, -1, -1, -1.0, 2, 0.0, 0.0};
  nodes[2] = TreeNode{true, -1, 0.0, -1, -1, +1.0, 2, 0.0, 1.0};
  DecisionTree t(nodes, 1, Task::Classification);
  std::vector<double> x{3.0};
  CHECK(t.predict(x) == +1.0);
  auto path = t.decision_path(x);
  REQUIRE(path.steps.size() == 1);
  CHECK_FALSE(path.steps[0].went_left);
  CHECK(path.prediction == +1.0);
  CHECK(path.to_text().find("feature[0] <= 2.5") != std::string::npos);

  // single leaf tree: empty rule list
  DecisionTree leaf({TreeNode{true, -1, 0, -1, -1, +1.0, 1, 0.0, 1.0}}, 1,
                    Task::Classification);
  CHECK(leaf.predict(x) == +1.0);
  CHECK(leaf.decision_path(x).steps.empty());
}

TEST_CASE("decision_path replay reproduces predict on random samples") {
  Rng rng(55);
  auto samples = random_samples(rng, 100, 4, Task::Classification);
  Rng fit_rng(4);
  DecisionTree t = fit_tree(samples, 4, 0, fit_rng, Task::Classification);
  for (const auto &s : samples) {
    auto path = t.decision_path(s.features);
    CHECK(path.prediction == t.predict(s.features));
    CHECK(path.steps.size() <= 4);
    // replay the printed rules
    for (const auto &st : path.steps)
      CHECK((s.features[static_cast<std::size_t>(st.feature)] <= st.threshold) ==
            st.went_left);
  }
}
