#include "cct/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <set>
#include <sstream>

namespace cct {

namespace {

bool parse_double(const std::string &tok, double &out) {
  if (tok.empty()) return false;
  char *end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && std::isfinite(out);
}

// Map raw classification targets to {-1,+1} by sorted order of the distinct
// values; already-normalized {-1,+1} files pass through unchanged.
void normalize_labels(Dataset &ds) {
  std::set<double> distinct;
  for (const auto &s : ds.samples) distinct.insert(s.target);
  if (distinct.size() > 2)
    throw ParseError("classification data has " + std::to_string(distinct.size()) +
                     " distinct labels, expected at most 2");
  LabelMap map;
  if (distinct.size() == 2) {
    map.raw_negative = *distinct.begin();
    map.raw_positive = *std::next(distinct.begin());
  } else if (distinct.size() == 1) {
    map.raw_negative = *distinct.begin();
  }
  for (auto &s : ds.samples)
    s.target = (distinct.size() == 2 && s.target == map.raw_positive) ? +1.0 : -1.0;
  if (distinct.size() == 1 && map.raw_negative == 1.0) {
    // single-label file whose only label is +1: keep it positive
    map.raw_positive = 1.0;
    for (auto &s : ds.samples) s.target = +1.0;
  }
  ds.label_map = map;
}

}  // namespace

Dataset parse_libsvm(std::istream &in, Task task) {
  Dataset ds;
  ds.task = task;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // strip trailing comment and whitespace-only lines
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    Sample s;
    if (!parse_double(tok, s.target))
      throw ParseError("bad target '" + tok + "'", line_no);
    std::size_t prev_index = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:val, got '" + tok + "'", line_no);
      double idx_d = 0.0, val = 0.0;
      if (!parse_double(tok.substr(0, colon), idx_d) || idx_d < 1.0 ||
          idx_d != std::floor(idx_d))
        throw ParseError("bad feature index in '" + tok + "'", line_no);
      if (!parse_double(tok.substr(colon + 1), val))
        throw ParseError("bad feature value in '" + tok + "'", line_no);
      auto idx = static_cast<std::size_t>(idx_d);
      if (idx <= prev_index)
        throw ParseError("feature indices not strictly increasing", line_no);
      prev_index = idx;
      s.features.resize(idx, 0.0);
      s.features[idx - 1] = val;
      max_index = std::max(max_index, idx);
    }
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw ParseError("no samples");
  ds.feature_count = max_index;
  for (auto &s : ds.samples) s.features.resize(max_index, 0.0);
  if (task == Task::Classification) normalize_labels(ds);
  return ds;
}

Dataset parse_libsvm(const std::string &text, Task task) {
  std::istringstream in(text);
  return parse_libsvm(in, task);
}

std::string serialize_libsvm(const Dataset &ds) {
  std::ostringstream out;
  out.precision(17);
  for (const auto &s : ds.samples) {
    out << s.target;
    for (std::size_t j = 0; j < s.features.size(); ++j)
      if (s.features[j] != 0.0) out << ' ' << (j + 1) << ':' << s.features[j];
    out << '\n';
  }
  return out.str();
}

Dataset parse_csv(std::istream &in, const std::string &target_column, Task task) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> row_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw ParseError("no samples");

  const std::size_t width = rows[0].size();
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].size() != width)
      throw ParseError("ragged row: " + std::to_string(rows[r].size()) +
                           " cells, expected " + std::to_string(width),
                       row_lines[r]);

  // header detection: any non-numeric cell in the first row
  bool has_header = false;
  for (const auto &c : rows[0]) {
    double d;
    if (!parse_double(c, d)) { has_header = true; break; }
  }

  std::size_t target_idx = width;  // sentinel
  if (has_header) {
    for (std::size_t j = 0; j < width; ++j)
      if (rows[0][j] == target_column) { target_idx = j; break; }
  }
  if (target_idx == width) {
    double d;
    if (parse_double(target_column, d) && d >= 0 && d == std::floor(d) &&
        static_cast<std::size_t>(d) < width)
      target_idx = static_cast<std::size_t>(d);
  }
  if (target_idx == width)
    throw ParseError("target column '" + target_column + "' not found");

  Dataset ds;
  ds.task = task;
  ds.feature_count = width - 1;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    Sample s;
    s.features.reserve(width - 1);
    for (std::size_t j = 0; j < width; ++j) {
      double d;
      if (!parse_double(rows[r][j], d))
        throw ParseError("non-numeric cell '" + rows[r][j] + "' in column " +
                             std::to_string(j),
                         row_lines[r]);
      if (j == target_idx)
        s.target = d;
      else
        s.features.push_back(d);
    }
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw ParseError("no samples");
  if (task == Task::Classification) normalize_labels(ds);
  return ds;
}

Dataset parse_csv(const std::string &text, const std::string &target_column, Task task) {
  std::istringstream in(text);
  return parse_csv(in, target_column, task);
}

std::string serialize_csv(const Dataset &ds) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t j = 0; j < ds.feature_count; ++j) out << 'x' << j << ',';
  out << "y\n";
  for (const auto &s : ds.samples) {
    for (double v : s.features) out << v << ',';
    out << s.target << '\n';
  }
  return out.str();
}

SplitIndices split_dataset(const Dataset &ds, std::uint64_t seed) {
  const std::size_t n = ds.size();
  const std::size_t n_train = static_cast<std::size_t>(std::floor(0.64 * n));
  const std::size_t n_val = static_cast<std::size_t>(std::floor(0.16 * n));
  const std::size_t n_test = n - n_train - n_val;
  if (n_train == 0 || n_val == 0 || n_test == 0)
    throw std::invalid_argument("dataset too small to form three nonempty splits (n=" +
                                std::to_string(n) + ")");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, 0xD5));
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
  SplitIndices s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.validation.assign(idx.begin() + n_train, idx.begin() + n_train + n_val);
  s.test.assign(idx.begin() + n_train + n_val, idx.end());
  return s;
}

FeatureStats compute_stats(const Dataset &ds, const std::vector<std::size_t> &indices) {
  const std::size_t p = ds.feature_count;
  FeatureStats st;
  st.mean.assign(p, 0.0);
  st.std_dev.assign(p, 1.0);
  if (indices.empty()) return st;
  for (auto i : indices)
    for (std::size_t j = 0; j < p; ++j) st.mean[j] += ds.samples[i].features[j];
  for (std::size_t j = 0; j < p; ++j) st.mean[j] /= static_cast<double>(indices.size());
  std::vector<double> var(p, 0.0);
  for (auto i : indices)
    for (std::size_t j = 0; j < p; ++j) {
      double d = ds.samples[i].features[j] - st.mean[j];
      var[j] += d * d;
    }
  for (std::size_t j = 0; j < p; ++j) {
    double sd = std::sqrt(var[j] / static_cast<double>(indices.size()));
    st.std_dev[j] = sd > 0.0 ? sd : 1.0;
  }
  return st;
}

std::vector<double> standardize_row(const std::vector<double> &x, const FeatureStats &stats) {
  if (x.size() != stats.mean.size())
    throw std::invalid_argument("standardize: feature count mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = (x[j] - stats.mean[j]) / stats.std_dev[j];
  return out;
}

Dataset standardize(const Dataset &ds, const FeatureStats &stats) {
  Dataset out = ds;
  for (auto &s : out.samples) s.features = standardize_row(s.features, stats);
  return out;
}

}  // namespace cct
