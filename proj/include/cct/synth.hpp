#pragma once

#include "cct/dataset.hpp"

namespace cct {

/// Deterministic synthetic benchmark generator. The target mixes a dense
/// linear signal spread over every feature (so bagged trees on feature
/// subsets aggregate well) with a small number of axis-aligned latent
/// regions, each carrying its own sparse local rule (so the best tree for a
/// sample depends on its context). Used by the demo CLI subcommand and as a
/// stand-in when the real benchmark files are not on disk.
struct SynthSpec {
  std::size_t n = 1000;
  std::size_t p = 20;
  Task task = Task::Classification;
  std::uint64_t seed = 0;
  int region_depth = 3;        // 2^depth latent regions
  int active_features = 6;     // per-region rule sparsity
  double region_mix = 0.5;     // weight of the region rules vs the dense signal
  double dense_decay = 0.88;   // magnitude decay of the ranked dense weights
  double label_noise = 0.05;   // classification: flip probability
  double positive_rate = 0.5;  // classification: fraction of +1 labels pre-noise
  double noise_sigma = 0.25;   // regression: noise as a fraction of signal std
  double target_scale = 1.0;   // regression: output scaling
};

Dataset make_synthetic(const SynthSpec &spec);

}  // namespace cct
