#include <doctest.h>

#include <cmath>

#include "cct/policy.hpp"
#include "oracles.hpp"

using namespace cct;

namespace {

std::vector<double> random_input(Rng &rng, std::size_t p) {
  std::vector<double> x(p);
  for (auto &v : x) v = rng.normal();
  return x;
}

void zero_params(PolicyNet &net) {
  for (DenseLayer *l : {&net.layer1(), &net.layer2(), &net.layer3()}) {
    std::fill(l->weights.begin(), l->weights.end(), 0.0);
    std::fill(l->bias.begin(), l->bias.end(), 0.0);
  }
}

}  // namespace

TEST_CASE("forward: zero weights give the uniform distribution") {
  PolicyNet net(4, 8, 8, 5, 0.2, 1);
  zero_params(net);
  auto c = net.forward(std::vector<double>{1, 2, 3, 4});
  for (double p : c.probs) CHECK(p == doctest::Approx(0.2));
}

TEST_CASE("forward: simplex property over random inputs") {
  PolicyNet net(6, 16, 16, 10, 0.2, 3);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    auto c = net.forward(random_input(rng, 6));
    double sum = 0.0;
    for (double p : c.probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(std::fabs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("softmax: hand value and shift invariance") {
  // bias-only net with B=2 logits [ln 2, 0]
  PolicyNet net(1, 1, 1, 2, 0.0, 1);
  zero_params(net);
  net.layer3().bias = {std::log(2.0), 0.0};
  auto c = net.forward(std::vector<double>{0.0});
  CHECK(c.probs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(c.probs[1] == doctest::Approx(1.0 / 3.0));

  net.layer3().bias = {std::log(2.0) + 100.0, 100.0};
  auto shifted = net.forward(std::vector<double>{0.0});
  CHECK(std::fabs(shifted.probs[0] - c.probs[0]) < 1e-12);
  CHECK(std::fabs(shifted.probs[1] - c.probs[1]) < 1e-12);
}

TEST_CASE("entropy bounds; uniform attains ln B") {
  std::vector<double> uniform(50, 1.0 / 50.0);
  CHECK(entropy(uniform) == doctest::Approx(std::log(50.0)).epsilon(1e-9));
  std::vector<double> onehot{1.0, 0.0, 0.0};
  CHECK(entropy(onehot) == doctest::Approx(0.0));
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(8);
    double s = 0;
    for (auto &v : p) {
      v = rng.uniform() + 1e-6;
      s += v;
    }
    for (auto &v : p) v /= s;
    double h = entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(8.0) + 1e-12);
  }
}

TEST_CASE("sample_action: degenerate, empirical frequencies, determinism") {
  std::vector<double> onehot(10, 0.0);
  onehot[7] = 1.0;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(sample_action(onehot, rng) == 7);

  std::vector<double> uniform(50, 0.02);
  std::vector<int> counts(50, 0);
  Rng r2(11);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[static_cast<std::size_t>(sample_action(uniform, r2))];
  for (int c : counts) {
    double freq = static_cast<double>(c) / draws;
    CHECK(freq == doctest::Approx(0.02).epsilon(0.25));  // 0.02 +/- 0.005
  }

  Rng a(9), b(9);
  std::vector<double> probs{0.3, 0.3, 0.4};
  for (int i = 0; i < 20; ++i) CHECK(sample_action(probs, a) == sample_action(probs, b));
}

TEST_CASE("grad_batch: zero rewards and zero entropy give zero gradient") {
  PolicyNet net(3, 4, 4, 3, 0.0, 5);
  Rng rng(1);
  std::vector<Episode> eps;
  for (int i = 0; i < 4; ++i) {
    Episode e;
    e.cache = net.forward(random_input(rng, 3), PolicyMode::Train, rng);
    e.action = i % 3;
    e.reward = 0.0;
    eps.push_back(std::move(e));
  }
  auto g = grad_batch(net, eps, 0.0);
  for (double v : oracle::grad_view(g)) CHECK(v == 0.0);
}

TEST_CASE("grad_batch matches finite differences (dropout disabled)") {
  Rng meta(123);
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t p = 1 + meta.uniform_int(5);
    std::size_t h = 2 + meta.uniform_int(7);
    std::size_t B = 2 + meta.uniform_int(3);
    PolicyNet net(p, h, h, B, 0.0, 100 + static_cast<std::uint64_t>(rep));
    Rng rng(rep);
    // Jitter biases so no pre-activation sits exactly on the ReLU kink,
    // where the analytic subgradient and finite differences legitimately differ.
    for (DenseLayer *l : {&net.layer1(), &net.layer2(), &net.layer3()})
      for (auto &b : l->bias) b += 0.05 * rng.normal();
    std::size_t n = 1 + meta.uniform_int(4);
    double beta = rep % 2 ? 1e-2 : 0.0;

    std::vector<std::vector<double>> xs;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<Episode> eps;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(random_input(rng, p));
      Episode e;
      e.cache = net.forward(xs.back(), PolicyMode::Train, rng);
      e.action = static_cast<int>(rng.uniform_int(B));
      e.reward = rng.uniform(-1.0, 1.0);
      actions.push_back(e.action);
      rewards.push_back(e.reward);
      eps.push_back(std::move(e));
    }
    auto analytic = oracle::grad_view(grad_batch(net, eps, beta));

    auto loss = [&]() {
      double L = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto c = net.forward(xs[i]);
        L -= c.log_probs[static_cast<std::size_t>(actions[i])] * rewards[i] +
             beta * entropy(c.probs);
      }
      return L / static_cast<double>(n);
    };
    auto numeric = oracle::finite_diff(net, loss);
    CHECK(oracle::max_rel_error(analytic, numeric) < 1e-4);
  }
}

TEST_CASE("entropy term pushes a saturated policy toward uniform") {
  // bias-only 2-action net with a large logit gap; only the entropy term acts
  PolicyNet net(1, 1, 1, 2, 0.0, 1);
  zero_params(net);
  net.layer3().bias = {4.0, 0.0};
  Rng rng(1);
  Episode e;
  e.cache = net.forward(std::vector<double>{0.0}, PolicyMode::Train, rng);
  e.action = 0;
  e.reward = 0.0;
  auto g = grad_batch(net, {std::move(e)}, 0.1);
  // descending the gradient must shrink the logit gap
  double gap_direction = g.l3.bias[0] - g.l3.bias[1];
  CHECK(gap_direction > 0.0);
}

TEST_CASE("grad_batch rejects stale caches") {
  PolicyNet net(2, 3, 3, 2, 0.0, 9);
  Rng rng(1);
  Episode e;
  e.cache = net.forward(std::vector<double>{0.5, -0.5}, PolicyMode::Train, rng);
  e.action = 0;
  e.reward = 1.0;
  AdamState adam = make_adam_state(net);
  auto g = grad_batch(net, {e}, 0.0);
  adam_step(net, g, adam, 1e-3);
  std::vector<Episode> stale;
  stale.push_back(std::move(e));
  CHECK_THROWS_AS(grad_batch(net, stale, 0.0), std::runtime_error);
}

TEST_CASE("adam: zero gradient leaves parameters; first step is ~ -lr") {
  PolicyNet net(2, 3, 3, 2, 0.0, 4);
  AdamState adam = make_adam_state(net);
  auto before = net.layer1().weights;
  adam_step(net, net.zero_gradients(), adam, 1e-3);
  CHECK(net.layer1().weights == before);
  CHECK(adam.t == 1);

  // unit gradient on a single parameter
  auto g = net.zero_gradients();
  g.l1.weights[0] = 1.0;
  double w0 = net.layer1().weights[0];
  AdamState fresh = make_adam_state(net);
  adam_step(net, g, fresh, 0.01);
  CHECK(net.layer1().weights[0] ==
        doctest::Approx(w0 - 0.01 * 1.0 / (1.0 + 1e-8)).epsilon(1e-10));
}

TEST_CASE("adam: determinism") {
  auto run = [] {
    PolicyNet net(3, 4, 4, 3, 0.0, 6);
    AdamState adam = make_adam_state(net);
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
      Episode e;
      e.cache = net.forward(std::vector<double>{0.1, 0.2, 0.3}, PolicyMode::Train, rng);
      e.action = i % 3;
      e.reward = i % 2 ? 1.0 : -1.0;
      adam_step(net, grad_batch(net, {std::move(e)}, 1e-4), adam, 1e-3);
    }
    return net.layer2().weights;
  };
  CHECK(run() == run());
}

TEST_CASE("cosine schedule endpoints and midpoint") {
  LrSchedule s{1e-3, 100, 0.0};
  CHECK(lr_at(s, 0) == doctest::Approx(1e-3));
  CHECK(lr_at(s, 100) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(lr_at(s, 50) == doctest::Approx(5e-4));
  CHECK_THROWS_AS(lr_at(s, 101), std::out_of_range);
  // non-increasing
  double prev = lr_at(s, 0);
  for (std::size_t e = 1; e <= 100; ++e) {
    double cur = lr_at(s, e);
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("dropout: train mode masks with inverted scaling, eval mode is clean") {
  PolicyNet net(4, 64, 64, 3, 0.2, 12);
  Rng rng(5);
  auto x = random_input(rng, 4);
  auto train_cache = net.forward(x, PolicyMode::Train, rng);
  std::size_t dropped = 0;
  for (double m : train_cache.mask1) {
    CHECK((m == 0.0 || m == doctest::Approx(1.0 / 0.8)));
    if (m == 0.0) ++dropped;
  }
  CHECK(dropped > 0);  // 64 units at rate 0.2
  auto eval_cache = net.forward(x);
  CHECK(eval_cache.mask1.empty());
  // eval pass is deterministic
  auto eval2 = net.forward(x);
  CHECK(eval_cache.probs == eval2.probs);
}
