// Command-line pipeline: train-forest -> train-policy -> evaluate -> explain,
// plus a synthetic data generator for self-contained demos.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cct/baseline.hpp"
#include "cct/eval.hpp"
#include "cct/serialize.hpp"
#include "cct/synth.hpp"

namespace fs = std::filesystem;
using namespace cct;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct DataArgs {
  std::string path;
  std::string task = "classification";
  std::string target_column = "y";
};

void add_data_flags(CLI::App *cmd, DataArgs &d) {
  cmd->add_option("--data", d.path, "dataset file (.csv or LIBSVM text)")->required();
  cmd->add_option("--task", d.task, "classification|regression")
      ->check(CLI::IsMember({"classification", "regression"}));
  cmd->add_option("--target-column", d.target_column,
                  "CSV target column name or 0-based index");
}

Dataset load_data(const DataArgs &d) {
  Task task = task_from_string(d.task);
  std::ifstream in(d.path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + d.path);
  if (d.path.size() > 4 && d.path.substr(d.path.size() - 4) == ".csv")
    return parse_csv(in, d.target_column, task);
  return parse_libsvm(in, task);
}

std::string canonical_config(const DataArgs &d, std::uint64_t seed, std::size_t trees,
                             const std::string &depth_grid) {
  std::ostringstream s;
  s << "task=" << d.task << ";seed=" << seed << ";trees=" << trees
    << ";depth_grid=" << depth_grid;
  return s.str();
}

std::vector<int> parse_depth_grid(const std::string &grid) {
  std::vector<int> out;
  std::istringstream ss(grid);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    int d = std::stoi(tok);
    if (d < 1 || d > 4)
      throw CLI::ValidationError("--depth-grid", "depths must be in [1,4]");
    out.push_back(d);
  }
  if (out.empty()) throw CLI::ValidationError("--depth-grid", "empty grid");
  return out;
}

double split_metric(const DecisionTree &tree, const Dataset &ds,
                    const std::vector<std::size_t> &idx) {
  std::vector<double> preds, targets;
  for (auto i : idx) {
    preds.push_back(tree.predict(ds.samples[i].features));
    targets.push_back(ds.samples[i].target);
  }
  return ds.task == Task::Classification ? accuracy(preds, targets)
                                         : rmse(preds, targets);
}

struct LoadedArtifacts {
  RandomForest forest;
  DecisionTree cart;
  SplitManifest splits;
  FeatureStats stats;
  std::uint64_t cfg_hash = 0;
};

LoadedArtifacts load_artifacts(const std::string &out_dir) {
  LoadedArtifacts a;
  a.forest = forest_from_json(read_file(out_dir + "/forest.json"), &a.cfg_hash);
  a.cart = tree_from_json(read_file(out_dir + "/cart.json"));
  a.splits = splits_from_json(read_file(out_dir + "/splits.json"));
  a.stats = stats_from_json(read_file(out_dir + "/scaler.json"));
  return a;
}

void check_data_matches(const LoadedArtifacts &a, const Dataset &ds) {
  if (ds.feature_count != a.forest.feature_count() || ds.task != a.forest.task() ||
      ds.size() != a.splits.n || dataset_fingerprint(ds) != a.splits.data_hash)
    throw CLI::ValidationError(
        "--data", "dataset does not match the forest artifact (run train-forest first)");
}

std::vector<std::string> sorted_glob(const std::string &dir, const std::string &prefix) {
  std::vector<std::string> out;
  for (const auto &e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.size() > 5 &&
        name.substr(name.size() - 5) == ".json")
      out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run(int argc, char **argv) {
  CLI::App app{"Contextual tree recommendation over a random forest"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");

  // ---- train-forest ----
  auto *tf = app.add_subcommand("train-forest",
                                "split data, grid-search CART depth, fit the forest");
  DataArgs tf_data;
  std::string tf_out = "artifacts";
  std::uint64_t tf_seed = 0;
  std::size_t tf_trees = 50;
  std::string tf_grid = "2,3,4";
  add_data_flags(tf, tf_data);
  tf->add_option("--out-dir", tf_out, "artifact directory");
  tf->add_option("--seed", tf_seed, "master seed");
  tf->add_option("--trees", tf_trees, "forest size B");
  tf->add_option("--depth-grid", tf_grid, "candidate CART depths, comma separated");

  // ---- train-policy ----
  auto *tp = app.add_subcommand("train-policy",
                                "train the bandit policy (or --supervised baseline)");
  DataArgs tp_data;
  std::string tp_out = "artifacts";
  std::uint64_t tp_seed = 0;
  TrainConfig tp_cfg;
  bool tp_supervised = false;
  add_data_flags(tp, tp_data);
  tp->add_option("--out-dir", tp_out, "artifact directory (train-forest output)");
  tp->add_option("--seed", tp_seed, "policy training seed");
  tp->add_option("--entropy-coeff", tp_cfg.entropy_coeff, "entropy regularization beta");
  tp->add_option("--batch-size", tp_cfg.batch_size, "episodes per update");
  tp->add_option("--max-epochs", tp_cfg.max_epochs, "epoch cap");
  tp->add_option("--patience", tp_cfg.early_stop_patience, "early stopping patience");
  tp->add_flag("--supervised", tp_supervised, "train the supervised baseline instead");

  // ---- evaluate ----
  auto *ev = app.add_subcommand("evaluate", "compare models on the held-out test split");
  DataArgs ev_data;
  std::string ev_out = "artifacts";
  std::string ev_name = "dataset";
  add_data_flags(ev, ev_data);
  ev->add_option("--out-dir", ev_out, "artifact directory");
  ev->add_option("--name", ev_name, "dataset name used in reports");

  // ---- explain ----
  auto *ex = app.add_subcommand("explain", "print the recommended tree's rule chain");
  DataArgs ex_data;
  std::string ex_out = "artifacts";
  std::string ex_sample;
  long long ex_index = -1;
  add_data_flags(ex, ex_data);
  ex->add_option("--out-dir", ex_out, "artifact directory");
  ex->add_option("--sample", ex_sample, "comma-separated raw feature vector");
  ex->add_option("--index", ex_index, "row index into the dataset");

  // ---- synth-data ----
  auto *sd = app.add_subcommand("synth-data", "write a synthetic benchmark CSV");
  std::string sd_out = "synthetic.csv";
  std::string sd_task = "classification";
  SynthSpec sd_spec;
  sd->add_option("--out", sd_out, "output CSV path")->required();
  sd->add_option("--task", sd_task, "classification|regression")
      ->check(CLI::IsMember({"classification", "regression"}));
  sd->add_option("--samples", sd_spec.n, "sample count");
  sd->add_option("--features", sd_spec.p, "feature count");
  sd->add_option("--seed", sd_spec.seed, "generator seed");
  sd->add_option("--regions", sd_spec.region_depth, "latent region tree depth");
  sd->add_option("--target-scale", sd_spec.target_scale, "regression target scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (tf->parsed()) {
    Dataset ds = load_data(tf_data);
    SplitIndices splits = split_dataset(ds, tf_seed);
    std::uint64_t hash =
        config_hash(canonical_config(tf_data, tf_seed, tf_trees, tf_grid));

    // depth grid search for the CART baseline; ties prefer the shallower tree
    int best_depth = 0;
    double best_metric = 0.0;
    const bool higher = ds.task == Task::Classification;
    for (int d : parse_depth_grid(tf_grid)) {
      Rng rng(derive_seed(tf_seed, 0xCA1 + static_cast<std::uint64_t>(d)));
      DecisionTree t = fit_tree(ds.samples, splits.train, d, 0, rng, ds.task);
      double m = split_metric(t, ds, splits.validation);
      if (best_depth == 0 || (higher ? m > best_metric : m < best_metric)) {
        best_depth = d;
        best_metric = m;
      }
    }
    Rng cart_rng(derive_seed(tf_seed, 0xCA1 + static_cast<std::uint64_t>(best_depth)));
    DecisionTree cart = fit_tree(ds.samples, splits.train, best_depth, 0, cart_rng, ds.task);
    RandomForest rf =
        fit_forest(ds.samples, splits.train, tf_trees, best_depth, tf_seed, ds.task);
    FeatureStats stats = compute_stats(ds, splits.train);

    SplitManifest manifest{splits, ds.size(), ds.feature_count, ds.task,
                           dataset_fingerprint(ds), tf_seed};
    fs::create_directories(tf_out);
    write_file(tf_out + "/forest.json", forest_to_json(rf, hash));
    write_file(tf_out + "/cart.json", tree_to_json(cart));
    write_file(tf_out + "/splits.json", splits_to_json(manifest));
    write_file(tf_out + "/scaler.json", stats_to_json(stats));
    std::cout << "validated depth " << best_depth << " (validation "
              << (higher ? "accuracy " : "rmse ") << best_metric << ")\n"
              << "wrote forest.json cart.json splits.json scaler.json to " << tf_out
              << "\n";
    return 0;
  }

  if (tp->parsed()) {
    Dataset ds = load_data(tp_data);
    LoadedArtifacts a = load_artifacts(tp_out);
    check_data_matches(a, ds);
    tp_cfg.seed = tp_seed;

    BanditView train = make_bandit_view(ds, a.splits.indices.train, a.stats, a.forest);
    BanditView val = make_bandit_view(ds, a.splits.indices.validation, a.stats, a.forest);

    std::string tag = (tp_supervised ? "supervised_seed" : "policy_seed") +
                      std::to_string(tp_seed);
    PolicyNet net;
    TrainReport report;
    if (tp_supervised) {
      std::vector<int> labels =
          label_samples(a.forest, ds, a.splits.indices.train, tp_seed);
      // persist labels for audit
      std::ostringstream lcsv;
      lcsv << "sample_index,tree_label\n";
      for (std::size_t i = 0; i < labels.size(); ++i)
        lcsv << a.splits.indices.train[i] << ',' << labels[i] << '\n';
      write_file(tp_out + "/" + tag + "_labels.csv", lcsv.str());
      std::tie(net, report) = train_supervised(a.forest, train, labels, val, tp_cfg);
    } else {
      std::tie(net, report) = train_policy(a.forest, train, val, tp_cfg);
    }
    write_file(tp_out + "/" + tag + ".json",
               policy_to_json(net, a.forest.task(), a.cfg_hash));
    write_file(tp_out + "/" + tag + "_curve.csv", reward_curve_csv(report));
    std::cout << tag << ": " << report.epochs.size() << " epochs, best epoch "
              << report.best_epoch << ", validation metric " << report.best_val_metric
              << "\n";
    return 0;
  }

  if (ev->parsed()) {
    Dataset ds = load_data(ev_data);
    LoadedArtifacts a = load_artifacts(ev_out);
    check_data_matches(a, ds);
    BanditView test = make_bandit_view(ds, a.splits.indices.test, a.stats, a.forest);

    std::vector<PolicyNet> contextual, supervised;
    for (const auto &p : sorted_glob(ev_out, "policy_seed"))
      contextual.push_back(policy_from_json(read_file(p)));
    for (const auto &p : sorted_glob(ev_out, "supervised_seed"))
      supervised.push_back(policy_from_json(read_file(p)));
    if (contextual.empty())
      throw CLI::ValidationError("--out-dir",
                                 "no policy artifacts found (run train-policy first)");

    ComparisonReport rep = compare_models(ev_name, test, contextual, a.cart,
                                          supervised, a.forest, ds,
                                          a.splits.indices.test);
    write_file(ev_out + "/comparison.csv", rep.to_csv());
    auto hist = selection_histogram(contextual.front(), test);
    write_file(ev_out + "/selection_histogram.csv", selection_histogram_csv(hist));
    std::cout << rep.to_text();
    return 0;
  }

  if (ex->parsed()) {
    LoadedArtifacts a = load_artifacts(ex_out);
    auto policies = sorted_glob(ex_out, "policy_seed");
    if (policies.empty())
      throw CLI::ValidationError("--out-dir", "no policy artifact found");
    PolicyNet net = policy_from_json(read_file(policies.front()));

    std::vector<double> x;
    if (!ex_sample.empty()) {
      std::istringstream ss(ex_sample);
      std::string tok;
      while (std::getline(ss, tok, ',')) x.push_back(std::stod(tok));
    } else if (ex_index >= 0) {
      Dataset ds = load_data(ex_data);
      if (static_cast<std::size_t>(ex_index) >= ds.size())
        throw ParseError("--index out of range");
      x = ds.samples[static_cast<std::size_t>(ex_index)].features;
    } else {
      throw CLI::ValidationError("explain", "pass --sample or --index");
    }
    if (x.size() != a.forest.feature_count())
      throw ParseError("sample has " + std::to_string(x.size()) + " features, expected " +
                       std::to_string(a.forest.feature_count()));

    ContextualPrediction cp = predict_contextual(net, a.forest, a.stats, x);
    std::cout << "recommended tree: " << cp.tree_index << "\n"
              << cp.path.to_text();
    return 0;
  }

  if (sd->parsed()) {
    sd_spec.task = task_from_string(sd_task);
    Dataset ds = make_synthetic(sd_spec);
    write_file(sd_out, serialize_csv(ds));
    std::cout << "wrote " << ds.size() << " x " << ds.feature_count << " " << sd_task
              << " samples to " << sd_out << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error &e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError &e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
