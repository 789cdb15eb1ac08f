#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cct/common.hpp"

namespace cct {

/// One dense layer, row-major weights (out x in).
struct DenseLayer {
  std::size_t in = 0, out = 0;
  std::vector<double> weights;  // out*in
  std::vector<double> bias;     // out
};

enum class PolicyMode { Train, Eval };

/// Forward-pass record needed to replay the exact computation during
/// backpropagation: pre-activations, post-dropout activations, the dropout
/// masks (stored pre-scaled by 1/keep), probabilities, and the parameter
/// version the pass was computed against.
struct ForwardCache {
  std::vector<double> input;
  std::vector<double> z1, a1;  // a1 includes ReLU and dropout scaling
  std::vector<double> z2, a2;
  std::vector<double> logits, probs, log_probs;
  std::vector<double> mask1, mask2;  // entries 0 or 1/keep; empty in eval mode
  std::uint64_t param_version = 0;
};

struct PolicyGradients {
  DenseLayer l1, l2, l3;  // same shapes as the net, weights/bias hold gradients
};

/// 3-layer ReLU network with a softmax head over the B tree indices.
/// Dropout (rate 0.2, inverted scaling) follows each hidden activation in
/// train mode only.
class PolicyNet {
public:
  PolicyNet() = default;
  PolicyNet(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
            std::size_t output_dim, double dropout_rate, std::uint64_t seed);

  ForwardCache forward(std::span<const double> x, PolicyMode mode, Rng &rng) const;
  ForwardCache forward(std::span<const double> x) const;  // eval mode

  std::size_t input_dim() const { return l1_.in; }
  std::size_t output_dim() const { return l3_.out; }
  double dropout_rate() const { return dropout_rate_; }
  std::uint64_t param_version() const { return param_version_; }

  DenseLayer &layer1() { return l1_; }
  DenseLayer &layer2() { return l2_; }
  DenseLayer &layer3() { return l3_; }
  const DenseLayer &layer1() const { return l1_; }
  const DenseLayer &layer2() const { return l2_; }
  const DenseLayer &layer3() const { return l3_; }

  PolicyGradients zero_gradients() const;

  /// Backpropagate per-episode logit gradients through the cached passes and
  /// accumulate parameter gradients. Throws on a stale cache.
  void backprop_logits(const std::vector<const ForwardCache *> &caches,
                       const std::vector<std::vector<double>> &dlogits,
                       PolicyGradients &grads) const;

  void bump_version() { ++param_version_; }
  void set_version(std::uint64_t v) { param_version_ = v; }
  void set_dropout_rate(double r) { dropout_rate_ = r; }

private:
  DenseLayer l1_, l2_, l3_;
  double dropout_rate_ = 0.2;
  std::uint64_t param_version_ = 1;
};

/// One training episode for the REINFORCE loss.
struct Episode {
  int action = 0;
  double reward = 0.0;
  ForwardCache cache;
};

/// Exact analytic gradient of
///   L(theta) = -(1/N) sum_i [ log pi(a_i|x_i) * r_i + beta * H(pi(.|x_i)) ]
/// with dropout masks replayed from the caches.
PolicyGradients grad_batch(const PolicyNet &net, const std::vector<Episode> &episodes,
                           double entropy_coeff);

/// Exact analytic gradient of the mean cross-entropy
///   L(theta) = -(1/N) sum_i log pi(label_i|x_i)
/// (the supervised baseline's loss; same backprop path).
PolicyGradients grad_cross_entropy(const PolicyNet &net,
                                   const std::vector<const ForwardCache *> &caches,
                                   const std::vector<int> &labels);

struct AdamState {
  PolicyGradients m, v;
  std::uint64_t t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

AdamState make_adam_state(const PolicyNet &net);

/// Standard bias-corrected ADAM step; bumps the net's parameter version.
void adam_step(PolicyNet &net, const PolicyGradients &grads, AdamState &state, double lr);

/// Single-cycle cosine annealing from initial_lr to min_lr.
struct LrSchedule {
  double initial_lr = 1e-3;
  std::size_t total_epochs = 1;
  double min_lr = 0.0;
};

double lr_at(const LrSchedule &schedule, std::size_t epoch);

/// Categorical draw by inverse CDF on one uniform variate.
int sample_action(std::span<const double> probs, Rng &rng);

double entropy(std::span<const double> probs);

}  // namespace cct
