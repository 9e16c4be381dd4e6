#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ddac/run.hpp"

namespace {

// Values the user may set on the command line; unset fields fall back to the
// preset, then the config file, then the method defaults.
struct TrainFlags {
  std::optional<std::string> data, out, config, preset, pretrained, graph;
  std::optional<std::uint64_t> seed;
  std::optional<int> k, d_prime, pretrain_epochs, train_epochs, batch_size,
      kmeans_restarts, knn_k;
  std::optional<double> alpha, beta, gamma, delta, lr, alpha1, alpha2,
      epsilon_fuse;
  std::optional<std::vector<int>> hidden;
};

void add_common_options(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--data", f.data, "feature CSV (optional final `label` column)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--config", f.config, "JSON config file (flags take precedence)");
  cmd->add_option("--preset", f.preset, "hyperparameter preset: mnist|fashion|usps");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--k", f.k, "number of clusters");
  cmd->add_option("--d-prime", f.d_prime, "latent width");
  cmd->add_option("--hidden", f.hidden, "encoder hidden widths")->delimiter(',');
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--batch-size", f.batch_size, "pretraining batch size");
}

void add_train_options(CLI::App* cmd, TrainFlags& f) {
  add_common_options(cmd, f);
  cmd->add_option("--alpha", f.alpha, "clustering-loss weight");
  cmd->add_option("--beta", f.beta, "discrepancy-loss weight");
  cmd->add_option("--gamma", f.gamma, "orthogonality-loss weight");
  cmd->add_option("--delta", f.delta, "confidence threshold");
  cmd->add_option("--pretrain-epochs", f.pretrain_epochs, "pretraining epochs");
  cmd->add_option("--train-epochs,--epochs", f.train_epochs, "training epochs");
  cmd->add_option("--kmeans-restarts", f.kmeans_restarts,
                  "k-means restarts for centroid init");
  cmd->add_option("--pretrained", f.pretrained, "reuse saved autoencoder params");
}

// precedence: method defaults < preset < config file < explicit flags
ddac::RunConfig merge_config(const TrainFlags& f, ddac::Method method) {
  ddac::RunConfig cfg;
  cfg.method = method;
  if (method == ddac::Method::ddac_g) cfg.model.pretrain_epochs = 30;

  if (f.preset) ddac::apply_preset(cfg, *f.preset);
  if (f.config) {
    cfg.merge_json_file(*f.config);
    cfg.method = method;  // the subcommand decides the method
  }
  if (f.data) cfg.data_path = *f.data;
  if (f.out) cfg.out_dir = *f.out;
  if (f.graph) cfg.graph_path = *f.graph;
  if (f.pretrained) cfg.pretrained_path = *f.pretrained;
  if (f.seed) cfg.model.seed = *f.seed;
  if (f.k) cfg.model.k = *f.k;
  if (f.d_prime) cfg.model.d_prime = *f.d_prime;
  if (f.hidden) cfg.model.hidden = *f.hidden;
  if (f.alpha) cfg.model.alpha = *f.alpha;
  if (f.beta) cfg.model.beta = *f.beta;
  if (f.gamma) cfg.model.gamma = *f.gamma;
  if (f.delta) cfg.model.delta = *f.delta;
  if (f.lr) cfg.model.lr = *f.lr;
  if (f.pretrain_epochs) cfg.model.pretrain_epochs = *f.pretrain_epochs;
  if (f.train_epochs) cfg.model.train_epochs = *f.train_epochs;
  if (f.batch_size) cfg.model.batch_size = *f.batch_size;
  if (f.kmeans_restarts) cfg.model.kmeans_restarts = *f.kmeans_restarts;
  if (f.knn_k) cfg.knn_k = *f.knn_k;
  if (f.alpha1) cfg.model.alpha1 = *f.alpha1;
  if (f.alpha2) cfg.model.alpha2 = *f.alpha2;
  if (f.epsilon_fuse) cfg.model.epsilon_fuse = *f.epsilon_fuse;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep discriminant-analysis clustering (DDAC / DDAC-G)"};
  app.require_subcommand(1);

  TrainFlags pretrain_flags;
  CLI::App* cmd_pretrain =
      app.add_subcommand("pretrain", "train the autoencoder alone, save params");
  add_common_options(cmd_pretrain, pretrain_flags);
  cmd_pretrain->add_option("--pretrain-epochs,--epochs",
                           pretrain_flags.pretrain_epochs, "pretraining epochs");

  TrainFlags train_flags;
  CLI::App* cmd_train = app.add_subcommand("train", "run DDAC on feature data");
  add_train_options(cmd_train, train_flags);

  TrainFlags graph_flags;
  CLI::App* cmd_graph =
      app.add_subcommand("train-graph", "run DDAC-G with graph information");
  add_train_options(cmd_graph, graph_flags);
  cmd_graph->add_option("--graph", graph_flags.graph, "edge-list file");
  cmd_graph->add_option("--k-neighbors", graph_flags.knn_k,
                        "build a kNN graph with this k'");
  cmd_graph->add_option("--alpha1", graph_flags.alpha1, "KL(P||Q) weight");
  cmd_graph->add_option("--alpha2", graph_flags.alpha2, "KL(P||Y) weight");
  cmd_graph->add_option("--epsilon-fuse", graph_flags.epsilon_fuse,
                        "AE/GCN fusion coefficient");

  std::string knn_data, knn_out;
  int knn_k = 3;
  CLI::App* cmd_knn =
      app.add_subcommand("knn-graph", "write a kNN edge list for feature data");
  cmd_knn->add_option("--data", knn_data, "feature CSV")->required();
  cmd_knn->add_option("--k-neighbors", knn_k, "neighbors per node (default 3)");
  cmd_knn->add_option("--out", knn_out, "output edge-list file")->required();

  std::string eval_pred, eval_truth, eval_out;
  CLI::App* cmd_eval =
      app.add_subcommand("eval", "compute ACC/NMI/ARI for two label files");
  cmd_eval->add_option("--pred", eval_pred, "predicted labels CSV")->required();
  cmd_eval->add_option("--truth", eval_truth, "ground-truth labels CSV")->required();
  cmd_eval->add_option("--out", eval_out, "metrics JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_pretrain->parsed()) {
      ddac::run_pretrain(merge_config(pretrain_flags, ddac::Method::ddac));
    } else if (cmd_train->parsed()) {
      ddac::run_train(merge_config(train_flags, ddac::Method::ddac));
    } else if (cmd_graph->parsed()) {
      ddac::run_train(merge_config(graph_flags, ddac::Method::ddac_g));
    } else if (cmd_knn->parsed()) {
      ddac::run_knn_graph(knn_data, knn_k, knn_out);
    } else if (cmd_eval->parsed()) {
      ddac::run_eval(eval_pred, eval_truth, eval_out);
    }
  } catch (const ddac::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
