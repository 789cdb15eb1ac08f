#include "cct/synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace cct {

Dataset make_synthetic(const SynthSpec &spec) {
  if (spec.n < 8 || spec.p < 2) throw std::invalid_argument("make_synthetic: too small");
  Rng rng(derive_seed(spec.seed, 0x51));

  const int depth = std::max(1, spec.region_depth);
  const std::size_t n_regions = std::size_t{1} << depth;
  const int active = std::min<int>(spec.active_features, static_cast<int>(spec.p));

  // routing features: the first `depth` indices, thresholds near the median
  std::vector<double> route_thresholds(depth);
  for (int d = 0; d < depth; ++d) route_thresholds[d] = rng.uniform(-0.4, 0.4);

  // dense global signal: every feature carries some weight, with a decaying
  // magnitude profile (a handful of strong predictors, a long tail of weak
  // ones) assigned in a random feature order
  std::vector<double> dense_w(spec.p);
  {
    std::vector<std::size_t> order(spec.p);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t j = spec.p; j > 1; --j)
      std::swap(order[j - 1], order[rng.uniform_int(j)]);
    // pin the routing features to upper-middle magnitude ranks: informative
    // enough to be split on regularly, but not the dominant predictors
    for (std::size_t d = 0; d < static_cast<std::size_t>(depth); ++d) {
      std::size_t want = std::min(spec.p - 1, 2 + d);
      auto it = std::find(order.begin(), order.end(), d);
      std::swap(*it, order[want]);
    }
    double mag = 1.0;
    for (std::size_t k = 0; k < spec.p; ++k, mag *= spec.dense_decay)
      dense_w[order[k]] = rng.normal() * (0.1 + mag);
  }

  // sparse local rule, shared features across regions with parity-flipped
  // weights: pooled over all regions the rule features carry no marginal
  // signal, so the rule is only visible to a learner that conditions on the
  // routing features first
  std::vector<int> rule_feats;
  std::vector<double> rule_w(static_cast<std::size_t>(active));
  {
    std::vector<int> all(spec.p);
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < active; ++k) {
      std::size_t j = static_cast<std::size_t>(k) +
                      rng.uniform_int(spec.p - static_cast<std::size_t>(k));
      std::swap(all[static_cast<std::size_t>(k)], all[j]);
    }
    rule_feats.assign(all.begin(), all.begin() + active);
    for (auto &w : rule_w) w = rng.normal() + (rng.uniform() < 0.5 ? -0.5 : 0.5);
  }
  std::vector<double> region_sign(n_regions);
  std::vector<double> region_b(n_regions);
  for (std::size_t r = 0; r < n_regions; ++r) {
    region_sign[r] = std::popcount(r) % 2 == 0 ? +1.0 : -1.0;
    region_b[r] = 0.3 * rng.normal();
  }

  // heterogeneous marginals: roughly half normal, a quarter heavy-tailed,
  // a quarter binary-ish
  std::vector<int> col_kind(spec.p);
  for (std::size_t j = 0; j < spec.p; ++j) {
    double u = rng.uniform();
    col_kind[j] = u < 0.35 ? 0 : (u < 0.6 ? 1 : 2);
  }

  // latent-factor correlation: every feature is a noisy proxy of one of a few
  // shared factors, so distinct feature subsets carry overlapping information
  // (as in real text/measurement data). Routing features get their own
  // factors so the latent regions stay identifiable from any proxy.
  const std::size_t n_factors =
      std::max<std::size_t>(static_cast<std::size_t>(depth) + 2, spec.p / 8);
  std::vector<std::size_t> factor_of(spec.p);
  std::vector<double> loading(spec.p);
  for (std::size_t j = 0; j < spec.p; ++j) {
    factor_of[j] = j < static_cast<std::size_t>(depth)
                       ? j
                       : rng.uniform_int(n_factors);
    loading[j] = rng.uniform(0.6, 0.95);
  }

  Dataset ds;
  ds.task = spec.task;
  ds.feature_count = spec.p;
  ds.samples.reserve(spec.n);

  std::vector<double> dense_part(spec.n), region_part(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    Sample s;
    s.features.resize(spec.p);
    std::vector<double> factors(n_factors);
    for (auto &f : factors) f = rng.normal();
    for (std::size_t j = 0; j < spec.p; ++j) {
      double a = loading[j];
      double g = a * factors[factor_of[j]] + std::sqrt(1.0 - a * a) * rng.normal();
      switch (col_kind[j]) {
        case 0: s.features[j] = g; break;
        case 1: s.features[j] = std::expm1(0.6 * g); break;  // skewed
        default: s.features[j] = g > 0.0 ? 1.0 : 0.0; break;
      }
    }
    double dense = 0.0;
    for (std::size_t j = 0; j < spec.p; ++j) dense += dense_w[j] * s.features[j];
    dense_part[i] = dense;

    std::size_t region = 0;
    for (int d = 0; d < depth; ++d)
      region = (region << 1) |
               (s.features[static_cast<std::size_t>(d)] > route_thresholds[d] ? 1u : 0u);
    double z = region_b[region];
    for (int k = 0; k < active; ++k)
      z += region_sign[region] * rule_w[static_cast<std::size_t>(k)] *
           s.features[static_cast<std::size_t>(rule_feats[static_cast<std::size_t>(k)])];
    region_part[i] = z;
    ds.samples.push_back(std::move(s));
  }

  // standardize the two components so region_mix sets their balance directly
  auto standardize_component = [&](std::vector<double> &v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(spec.n);
    double var = 0.0;
    for (double z : v) var += (z - mean) * (z - mean);
    double sd = std::sqrt(var / static_cast<double>(spec.n));
    if (sd <= 0.0) sd = 1.0;
    for (double &z : v) z = (z - mean) / sd;
  };
  standardize_component(dense_part);
  standardize_component(region_part);
  std::vector<double> raw_targets(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    raw_targets[i] =
        (1.0 - spec.region_mix) * dense_part[i] + spec.region_mix * region_part[i];

  if (spec.task == Task::Classification) {
    // threshold at the requested quantile so the class balance is controlled
    std::vector<double> sorted = raw_targets;
    std::sort(sorted.begin(), sorted.end());
    double rate = std::clamp(spec.positive_rate, 0.01, 0.99);
    std::size_t cut = static_cast<std::size_t>((1.0 - rate) * static_cast<double>(spec.n));
    double threshold = sorted[std::min(cut, spec.n - 1)];
    for (std::size_t i = 0; i < spec.n; ++i) {
      double y = raw_targets[i] > threshold ? +1.0 : -1.0;
      if (rng.uniform() < spec.label_noise) y = -y;
      ds.samples[i].target = y;
    }
    ds.label_map = LabelMap{-1.0, +1.0};
  } else {
    double mean = std::accumulate(raw_targets.begin(), raw_targets.end(), 0.0) /
                  static_cast<double>(spec.n);
    double var = 0.0;
    for (double z : raw_targets) var += (z - mean) * (z - mean);
    double sd = std::sqrt(var / static_cast<double>(spec.n));
    if (sd <= 0.0) sd = 1.0;
    for (std::size_t i = 0; i < spec.n; ++i)
      ds.samples[i].target =
          spec.target_scale * (raw_targets[i] + spec.noise_sigma * sd * rng.normal());
  }
  return ds;
}

}  // namespace cct
