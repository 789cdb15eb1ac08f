#include "cct/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cct {

using nlohmann::json;

std::uint64_t config_hash(const std::string &canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

json node_to_json(const std::vector<TreeNode> &nodes, int idx) {
  const TreeNode &n = nodes[static_cast<std::size_t>(idx)];
  json j;
  if (n.is_leaf) {
    j["kind"] = "leaf";
    j["prediction"] = n.prediction;
    j["n_samples"] = n.n_samples;
    j["impurity"] = n.impurity;
    j["pos_fraction"] = n.pos_fraction;
  } else {
    j["kind"] = "split";
    j["feature"] = n.feature;
    j["threshold"] = n.threshold;
    j["n_samples"] = n.n_samples;
    j["left"] = node_to_json(nodes, n.left);
    j["right"] = node_to_json(nodes, n.right);
  }
  return j;
}

int node_from_json(const json &j, std::vector<TreeNode> &nodes) {
  TreeNode n;
  if (j.at("kind") == "leaf") {
    n.is_leaf = true;
    n.prediction = j.at("prediction");
    n.n_samples = j.at("n_samples");
    n.impurity = j.at("impurity");
    n.pos_fraction = j.at("pos_fraction");
    nodes.push_back(n);
    return static_cast<int>(nodes.size() - 1);
  }
  n.is_leaf = false;
  n.feature = j.at("feature");
  n.threshold = j.at("threshold");
  n.n_samples = j.at("n_samples");
  nodes.push_back(n);
  int self = static_cast<int>(nodes.size() - 1);
  int left = node_from_json(j.at("left"), nodes);
  int right = node_from_json(j.at("right"), nodes);
  nodes[static_cast<std::size_t>(self)].left = left;
  nodes[static_cast<std::size_t>(self)].right = right;
  return self;
}

json tree_to_json_obj(const DecisionTree &tree) {
  json j;
  j["max_depth"] = tree.max_depth();
  j["task"] = to_string(tree.task());
  j["root"] = node_to_json(tree.nodes(), 0);
  return j;
}

DecisionTree tree_from_json_obj(const json &j) {
  std::vector<TreeNode> nodes;
  node_from_json(j.at("root"), nodes);
  return DecisionTree(std::move(nodes), j.at("max_depth"),
                      task_from_string(j.at("task")));
}

json layer_to_json(const DenseLayer &l) {
  return json{{"in", l.in}, {"out", l.out}, {"weights", l.weights}, {"bias", l.bias}};
}

DenseLayer layer_from_json(const json &j) {
  DenseLayer l;
  l.in = j.at("in");
  l.out = j.at("out");
  l.weights = j.at("weights").get<std::vector<double>>();
  l.bias = j.at("bias").get<std::vector<double>>();
  if (l.weights.size() != l.in * l.out || l.bias.size() != l.out)
    throw std::runtime_error("policy artifact: layer shape mismatch");
  return l;
}

}  // namespace

std::string tree_to_json(const DecisionTree &tree) {
  json j = tree_to_json_obj(tree);
  j["format_version"] = kArtifactVersion;
  return j.dump(2);
}

DecisionTree tree_from_json(const std::string &text) {
  return tree_from_json_obj(json::parse(text));
}

std::string forest_to_json(const RandomForest &rf, std::uint64_t cfg_hash) {
  json j;
  j["format_version"] = kArtifactVersion;
  j["config_hash"] = cfg_hash;
  j["task"] = to_string(rf.task());
  j["n_trees"] = rf.size();
  j["max_depth"] = rf.max_depth();
  j["feature_count"] = rf.feature_count();
  j["feature_subsample"] = rf.feature_subsample();
  j["seed"] = rf.seed();
  json trees = json::array();
  for (const auto &t : rf.trees()) trees.push_back(tree_to_json_obj(t));
  j["trees"] = std::move(trees);
  return j.dump(2);
}

RandomForest forest_from_json(const std::string &text, std::uint64_t *cfg_hash) {
  json j = json::parse(text);
  if (j.at("format_version") != kArtifactVersion)
    throw std::runtime_error("forest artifact: unsupported format version");
  if (cfg_hash) *cfg_hash = j.at("config_hash");
  std::vector<DecisionTree> trees;
  for (const auto &tj : j.at("trees")) trees.push_back(tree_from_json_obj(tj));
  return RandomForest(std::move(trees), task_from_string(j.at("task")),
                      j.at("feature_count"), j.at("feature_subsample"),
                      j.at("max_depth"), j.at("seed"));
}

std::string policy_to_json(const PolicyNet &net, Task task, std::uint64_t cfg_hash) {
  json j;
  j["format_version"] = kArtifactVersion;
  j["config_hash"] = cfg_hash;
  j["task"] = to_string(task);
  j["dropout_rate"] = net.dropout_rate();
  j["layers"] = json::array({layer_to_json(net.layer1()), layer_to_json(net.layer2()),
                             layer_to_json(net.layer3())});
  return j.dump(2);
}

PolicyNet policy_from_json(const std::string &text, Task *task, std::uint64_t *cfg_hash) {
  json j = json::parse(text);
  if (j.at("format_version") != kArtifactVersion)
    throw std::runtime_error("policy artifact: unsupported format version");
  if (task) *task = task_from_string(j.at("task"));
  if (cfg_hash) *cfg_hash = j.at("config_hash");
  const auto &layers = j.at("layers");
  PolicyNet net;
  net.layer1() = layer_from_json(layers.at(0));
  net.layer2() = layer_from_json(layers.at(1));
  net.layer3() = layer_from_json(layers.at(2));
  net.set_dropout_rate(j.at("dropout_rate"));
  return net;
}

std::string stats_to_json(const FeatureStats &stats) {
  json j;
  j["format_version"] = kArtifactVersion;
  j["mean"] = stats.mean;
  j["std"] = stats.std_dev;
  return j.dump(2);
}

FeatureStats stats_from_json(const std::string &text) {
  json j = json::parse(text);
  FeatureStats s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.std_dev = j.at("std").get<std::vector<double>>();
  return s;
}

std::uint64_t dataset_fingerprint(const Dataset &ds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto &s : ds.samples) {
    mix(s.target);
    for (double f : s.features) mix(f);
  }
  return h;
}

std::string splits_to_json(const SplitManifest &m) {
  json j;
  j["format_version"] = kArtifactVersion;
  j["n"] = m.n;
  j["p"] = m.p;
  j["task"] = to_string(m.task);
  j["data_hash"] = m.data_hash;
  j["seed"] = m.seed;
  j["train"] = m.indices.train;
  j["validation"] = m.indices.validation;
  j["test"] = m.indices.test;
  return j.dump(2);
}

SplitManifest splits_from_json(const std::string &text) {
  json j = json::parse(text);
  SplitManifest m;
  m.n = j.at("n");
  m.p = j.at("p");
  m.task = task_from_string(j.at("task"));
  m.data_hash = j.at("data_hash");
  m.seed = j.at("seed");
  m.indices.train = j.at("train").get<std::vector<std::size_t>>();
  m.indices.validation = j.at("validation").get<std::vector<std::size_t>>();
  m.indices.test = j.at("test").get<std::vector<std::size_t>>();
  return m;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cct
