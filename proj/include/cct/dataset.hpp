#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cct/common.hpp"

namespace cct {

/// One observation: a dense feature vector plus its target.
/// Classification targets are normalized to {-1, +1} at parse time.
struct Sample {
  std::vector<double> features;
  double target = 0.0;
};

/// Mapping from the raw labels of a classification file to {-1, +1}.
/// Raw labels are mapped in sorted order: lower -> -1, higher -> +1.
struct LabelMap {
  double raw_negative = -1.0;
  double raw_positive = +1.0;
};

struct Dataset {
  std::vector<Sample> samples;
  Task task = Task::Classification;
  std::size_t feature_count = 0;
  std::optional<LabelMap> label_map;  // set for classification input

  std::size_t size() const { return samples.size(); }
};

/// Disjoint train/validation/test index lists covering a dataset exactly once.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

/// Per-feature standardization statistics (training-split mean and std).
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> std_dev;  // zero-variance features stored as 1
};

/// Parse LIBSVM sparse text: `<target> <idx>:<val> ...`, 1-based strictly
/// increasing indices. Feature count is the maximum index seen over the file;
/// absent indices are zero-filled.
Dataset parse_libsvm(std::istream &in, Task task);
Dataset parse_libsvm(const std::string &text, Task task);

/// Inverse of parse_libsvm (dense values written sparsely, zeros omitted).
std::string serialize_libsvm(const Dataset &ds);

/// Parse a rectangular numeric CSV with optional header. `target_column` is a
/// header name or a 0-based column index; the target column is removed from
/// the features.
Dataset parse_csv(std::istream &in, const std::string &target_column, Task task);
Dataset parse_csv(const std::string &text, const std::string &target_column, Task task);

std::string serialize_csv(const Dataset &ds);

/// Seeded uniform shuffle, then contiguous 64/16/20 cut (floor for train and
/// validation, remainder to test). Errors if any split would be empty.
SplitIndices split_dataset(const Dataset &ds, std::uint64_t seed);

FeatureStats compute_stats(const Dataset &ds, const std::vector<std::size_t> &indices);

/// (x - mean) / std per feature, in place on a copy. A std of 0 is treated
/// as 1 (the column stays constant).
std::vector<double> standardize_row(const std::vector<double> &x, const FeatureStats &stats);
Dataset standardize(const Dataset &ds, const FeatureStats &stats);

}  // namespace cct
