#include "cct/policy.hpp"

#include <algorithm>
#include <cmath>

namespace cct {

namespace {

DenseLayer make_layer(std::size_t in, std::size_t out, Rng &rng) {
  DenseLayer l;
  l.in = in;
  l.out = out;
  l.weights.resize(in * out);
  l.bias.assign(out, 0.0);
  // He-style uniform fan-in init
  double bound = std::sqrt(6.0 / static_cast<double>(in));
  for (auto &w : l.weights) w = rng.uniform(-bound, bound);
  return l;
}

DenseLayer zeros_like(const DenseLayer &l) {
  DenseLayer z;
  z.in = l.in;
  z.out = l.out;
  z.weights.assign(l.weights.size(), 0.0);
  z.bias.assign(l.bias.size(), 0.0);
  return z;
}

void affine(const DenseLayer &l, std::span<const double> x, std::vector<double> &out) {
  out.assign(l.out, 0.0);
  for (std::size_t o = 0; o < l.out; ++o) {
    const double *row = l.weights.data() + o * l.in;
    double acc = l.bias[o];
    for (std::size_t i = 0; i < l.in; ++i) acc += row[i] * x[i];
    out[o] = acc;
  }
}

// accumulate dW += dout (outer) x, db += dout; returns dx
void affine_backward(const DenseLayer &l, std::span<const double> x,
                     std::span<const double> dout, DenseLayer &grad,
                     std::vector<double> &dx) {
  dx.assign(l.in, 0.0);
  for (std::size_t o = 0; o < l.out; ++o) {
    const double g = dout[o];
    if (g == 0.0) continue;
    double *wrow = grad.weights.data() + o * l.in;
    const double *row = l.weights.data() + o * l.in;
    for (std::size_t i = 0; i < l.in; ++i) {
      wrow[i] += g * x[i];
      dx[i] += g * row[i];
    }
    grad.bias[o] += g;
  }
}

void adam_update(std::vector<double> &param, const std::vector<double> &grad,
                 std::vector<double> &m, std::vector<double> &v, double lr,
                 double b1, double b2, double eps, double bc1, double bc2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
    v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
    double mhat = m[i] / bc1;
    double vhat = v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

PolicyNet::PolicyNet(std::size_t input_dim, std::size_t hidden1, std::size_t hidden2,
                     std::size_t output_dim, double dropout_rate, std::uint64_t seed)
    : dropout_rate_(dropout_rate) {
  Rng r1(derive_seed(seed, 1)), r2(derive_seed(seed, 2)), r3(derive_seed(seed, 3));
  l1_ = make_layer(input_dim, hidden1, r1);
  l2_ = make_layer(hidden1, hidden2, r2);
  l3_ = make_layer(hidden2, output_dim, r3);
}

ForwardCache PolicyNet::forward(std::span<const double> x, PolicyMode mode,
                                Rng &rng) const {
  if (x.size() != l1_.in)
    throw std::invalid_argument("forward: input dimension mismatch");
  ForwardCache c;
  c.param_version = param_version_;
  c.input.assign(x.begin(), x.end());

  const double keep = 1.0 - dropout_rate_;
  auto hidden = [&](const DenseLayer &l, std::span<const double> in,
                    std::vector<double> &z, std::vector<double> &a,
                    std::vector<double> &mask) {
    affine(l, in, z);
    a.resize(l.out);
    if (mode == PolicyMode::Train && dropout_rate_ > 0.0) {
      mask.resize(l.out);
      for (std::size_t i = 0; i < l.out; ++i)
        mask[i] = rng.uniform() < keep ? 1.0 / keep : 0.0;
      for (std::size_t i = 0; i < l.out; ++i)
        a[i] = (z[i] > 0.0 ? z[i] : 0.0) * mask[i];
    } else {
      for (std::size_t i = 0; i < l.out; ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
    }
  };
  hidden(l1_, c.input, c.z1, c.a1, c.mask1);
  hidden(l2_, c.a1, c.z2, c.a2, c.mask2);
  affine(l3_, c.a2, c.logits);

  // stable softmax
  double mx = *std::max_element(c.logits.begin(), c.logits.end());
  double sum = 0.0;
  c.probs.resize(c.logits.size());
  for (std::size_t i = 0; i < c.logits.size(); ++i) {
    c.probs[i] = std::exp(c.logits[i] - mx);
    sum += c.probs[i];
  }
  double log_sum = std::log(sum);
  c.log_probs.resize(c.logits.size());
  for (std::size_t i = 0; i < c.logits.size(); ++i) {
    c.log_probs[i] = c.logits[i] - mx - log_sum;
    c.probs[i] /= sum;
  }
  return c;
}

ForwardCache PolicyNet::forward(std::span<const double> x) const {
  Rng dummy(0);
  return forward(x, PolicyMode::Eval, dummy);
}

PolicyGradients PolicyNet::zero_gradients() const {
  return PolicyGradients{zeros_like(l1_), zeros_like(l2_), zeros_like(l3_)};
}

void PolicyNet::backprop_logits(const std::vector<const ForwardCache *> &caches,
                                const std::vector<std::vector<double>> &dlogits,
                                PolicyGradients &grads) const {
  std::vector<double> da2, dz2, da1, dz1, dx;
  for (std::size_t i = 0; i < caches.size(); ++i) {
    const ForwardCache &c = *caches[i];
    if (c.param_version != param_version_)
      throw std::runtime_error("stale forward cache: parameter version mismatch");
    affine_backward(l3_, c.a2, dlogits[i], grads.l3, da2);
    dz2.assign(l2_.out, 0.0);
    for (std::size_t j = 0; j < l2_.out; ++j) {
      double m = c.mask2.empty() ? 1.0 : c.mask2[j];
      dz2[j] = c.z2[j] > 0.0 ? da2[j] * m : 0.0;
    }
    affine_backward(l2_, c.a1, dz2, grads.l2, da1);
    dz1.assign(l1_.out, 0.0);
    for (std::size_t j = 0; j < l1_.out; ++j) {
      double m = c.mask1.empty() ? 1.0 : c.mask1[j];
      dz1[j] = c.z1[j] > 0.0 ? da1[j] * m : 0.0;
    }
    affine_backward(l1_, c.input, dz1, grads.l1, dx);
  }
}

PolicyGradients grad_batch(const PolicyNet &net, const std::vector<Episode> &episodes,
                           double entropy_coeff) {
  const double inv_n = 1.0 / static_cast<double>(episodes.size());
  std::vector<const ForwardCache *> caches;
  std::vector<std::vector<double>> dlogits;
  caches.reserve(episodes.size());
  dlogits.reserve(episodes.size());
  for (const auto &e : episodes) {
    const auto &p = e.cache.probs;
    const auto &lp = e.cache.log_probs;
    std::vector<double> d(p.size());
    double H = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p[k] > 0.0) H -= p[k] * lp[k];
    // dL/dlogit_k = (1/N) [ r*(p_k - 1{k=a}) + beta * p_k*(log p_k + H) ]
    for (std::size_t k = 0; k < p.size(); ++k) {
      double g = e.reward * (p[k] - (static_cast<int>(k) == e.action ? 1.0 : 0.0));
      if (entropy_coeff != 0.0) g += entropy_coeff * p[k] * (lp[k] + H);
      d[k] = inv_n * g;
    }
    caches.push_back(&e.cache);
    dlogits.push_back(std::move(d));
  }
  PolicyGradients grads = net.zero_gradients();
  net.backprop_logits(caches, dlogits, grads);
  return grads;
}

PolicyGradients grad_cross_entropy(const PolicyNet &net,
                                   const std::vector<const ForwardCache *> &caches,
                                   const std::vector<int> &labels) {
  const double inv_n = 1.0 / static_cast<double>(caches.size());
  std::vector<std::vector<double>> dlogits;
  dlogits.reserve(caches.size());
  for (std::size_t i = 0; i < caches.size(); ++i) {
    const auto &p = caches[i]->probs;
    std::vector<double> d(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
      d[k] = inv_n * (p[k] - (static_cast<int>(k) == labels[i] ? 1.0 : 0.0));
    dlogits.push_back(std::move(d));
  }
  PolicyGradients grads = net.zero_gradients();
  net.backprop_logits(caches, dlogits, grads);
  return grads;
}

AdamState make_adam_state(const PolicyNet &net) {
  AdamState s;
  s.m = net.zero_gradients();
  s.v = net.zero_gradients();
  return s;
}

void adam_step(PolicyNet &net, const PolicyGradients &grads, AdamState &state, double lr) {
  ++state.t;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  auto upd = [&](DenseLayer &param, const DenseLayer &g, DenseLayer &m, DenseLayer &v) {
    adam_update(param.weights, g.weights, m.weights, v.weights, lr, state.beta1,
                state.beta2, state.eps, bc1, bc2);
    adam_update(param.bias, g.bias, m.bias, v.bias, lr, state.beta1, state.beta2,
                state.eps, bc1, bc2);
  };
  upd(net.layer1(), grads.l1, state.m.l1, state.v.l1);
  upd(net.layer2(), grads.l2, state.m.l2, state.v.l2);
  upd(net.layer3(), grads.l3, state.m.l3, state.v.l3);
  net.bump_version();
}

double lr_at(const LrSchedule &schedule, std::size_t epoch) {
  if (epoch > schedule.total_epochs)
    throw std::out_of_range("lr_at: epoch beyond schedule horizon");
  double frac = static_cast<double>(epoch) / static_cast<double>(schedule.total_epochs);
  return schedule.min_lr + 0.5 * (schedule.initial_lr - schedule.min_lr) *
                               (1.0 + std::cos(3.14159265358979323846 * frac));
}

int sample_action(std::span<const double> probs, Rng &rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size() - 1);
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

}  // namespace cct
