#pragma once

#include <string>

#include "cct/bandit.hpp"
#include "cct/forest.hpp"
#include "cct/policy.hpp"

namespace cct {

/// Versioned JSON artifacts. Every artifact carries `format_version` and the
/// `config_hash` of the run that produced it so pipeline stages fail fast on
/// mismatched inputs.

inline constexpr int kArtifactVersion = 1;

/// FNV-1a over a canonical config string; stages compare it across artifacts.
std::uint64_t config_hash(const std::string &canonical);

std::string tree_to_json(const DecisionTree &tree);
DecisionTree tree_from_json(const std::string &text);

std::string forest_to_json(const RandomForest &rf, std::uint64_t cfg_hash);
RandomForest forest_from_json(const std::string &text, std::uint64_t *cfg_hash = nullptr);

std::string policy_to_json(const PolicyNet &net, Task task, std::uint64_t cfg_hash);
PolicyNet policy_from_json(const std::string &text, Task *task = nullptr,
                           std::uint64_t *cfg_hash = nullptr);

std::string stats_to_json(const FeatureStats &stats);
FeatureStats stats_from_json(const std::string &text);

/// Split manifest: the three index lists plus a dataset fingerprint
/// (n, p, task, content hash) for stage-isolation audits.
struct SplitManifest {
  SplitIndices indices;
  std::size_t n = 0, p = 0;
  Task task = Task::Classification;
  std::uint64_t data_hash = 0;
  std::uint64_t seed = 0;
};

std::uint64_t dataset_fingerprint(const Dataset &ds);
std::string splits_to_json(const SplitManifest &m);
SplitManifest splits_from_json(const std::string &text);

void write_file(const std::string &path, const std::string &content);
std::string read_file(const std::string &path);

}  // namespace cct
