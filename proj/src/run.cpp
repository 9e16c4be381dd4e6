#include "ddac/run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "ddac/csv.hpp"
#include "ddac/gcn.hpp"
#include "ddac/graph.hpp"
#include "ddac/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace ddac {

std::string method_name(Method m) { return m == Method::ddac ? "ddac" : "ddac-g"; }

Method method_from_name(const std::string& name) {
  if (name == "ddac") return Method::ddac;
  if (name == "ddac-g") return Method::ddac_g;
  throw ConfigError("unknown method '" + name + "' (expected ddac or ddac-g)");
}

void RunConfig::validate() const {
  if (data_path.empty()) throw ConfigError("missing data path");
  if (!fs::exists(data_path)) throw ConfigError("data file not found: " + data_path);
  if (method == Method::ddac_g && graph_path.empty() && knn_k <= 0)
    throw ConfigError("method ddac-g requires a graph file or k-neighbors > 0");
  if (!graph_path.empty() && !fs::exists(graph_path))
    throw ConfigError("graph file not found: " + graph_path);
  if (!pretrained_path.empty() && !fs::exists(pretrained_path))
    throw ConfigError("pretrained params not found: " + pretrained_path);
  if (knn_k < 0) throw ConfigError("k-neighbors must be positive");
  model.validate();
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["method"] = method_name(method);
  j["data"] = data_path;
  if (!graph_path.empty()) j["graph"] = graph_path;
  if (knn_k > 0) j["knn_k"] = knn_k;
  if (!out_dir.empty()) j["out"] = out_dir;
  if (!pretrained_path.empty()) j["pretrained"] = pretrained_path;
  j["seed"] = model.seed;
  j["k"] = model.k;
  j["d_prime"] = model.d_prime;
  j["hidden"] = model.hidden;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["gamma"] = model.gamma;
  j["delta"] = model.delta;
  j["lr"] = model.lr;
  j["pretrain_epochs"] = model.pretrain_epochs;
  j["train_epochs"] = model.train_epochs;
  j["batch_size"] = model.batch_size;
  j["kmeans_restarts"] = model.kmeans_restarts;
  j["alpha1"] = model.alpha1;
  j["alpha2"] = model.alpha2;
  j["epsilon_fuse"] = model.epsilon_fuse;
  return j.dump(2) + "\n";
}

void RunConfig::merge_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::vector<std::string> known = {
      "method", "data",  "graph",  "knn_k", "out",   "pretrained",
      "seed",   "k",     "d_prime", "hidden", "alpha", "beta",
      "gamma",  "delta", "lr",     "pretrain_epochs", "train_epochs",
      "batch_size", "kmeans_restarts", "alpha1", "alpha2", "epsilon_fuse"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) throw ConfigError("config: unknown key '" + key + "'");
  }
  try {
    if (j.contains("method")) method = method_from_name(j["method"]);
    if (j.contains("data")) data_path = j["data"];
    if (j.contains("graph")) graph_path = j["graph"];
    if (j.contains("knn_k")) knn_k = j["knn_k"];
    if (j.contains("out")) out_dir = j["out"];
    if (j.contains("pretrained")) pretrained_path = j["pretrained"];
    if (j.contains("seed")) model.seed = j["seed"];
    if (j.contains("k")) model.k = j["k"];
    if (j.contains("d_prime")) model.d_prime = j["d_prime"];
    if (j.contains("hidden")) model.hidden = j["hidden"].get<std::vector<int>>();
    if (j.contains("alpha")) model.alpha = j["alpha"];
    if (j.contains("beta")) model.beta = j["beta"];
    if (j.contains("gamma")) model.gamma = j["gamma"];
    if (j.contains("delta")) model.delta = j["delta"];
    if (j.contains("lr")) model.lr = j["lr"];
    if (j.contains("pretrain_epochs")) model.pretrain_epochs = j["pretrain_epochs"];
    if (j.contains("train_epochs")) model.train_epochs = j["train_epochs"];
    if (j.contains("batch_size")) model.batch_size = j["batch_size"];
    if (j.contains("kmeans_restarts")) model.kmeans_restarts = j["kmeans_restarts"];
    if (j.contains("alpha1")) model.alpha1 = j["alpha1"];
    if (j.contains("alpha2")) model.alpha2 = j["alpha2"];
    if (j.contains("epsilon_fuse")) model.epsilon_fuse = j["epsilon_fuse"];
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

void RunConfig::merge_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  merge_json_text(text);
}

void apply_preset(RunConfig& config, const std::string& preset) {
  DdacConfig& m = config.model;
  if (preset == "mnist") {
    m.hidden = {500, 500, 1000};
    m.d_prime = 10;
    m.alpha = 0.1;
    m.beta = 0.01;
    m.gamma = 1e-5;
    m.lr = 1e-3;
    m.pretrain_epochs = 50;
    m.train_epochs = 200;
    m.batch_size = 512;
  } else if (preset == "fashion") {
    m.hidden = {500, 500, 2000};
    m.d_prime = 10;
    m.alpha = 0.1;
    m.beta = 0.005;
    m.gamma = 1e-3;
    m.lr = 1e-3;
    m.pretrain_epochs = 50;
    m.train_epochs = 200;
    m.batch_size = 512;
  } else if (preset == "usps") {
    // graph-variant settings
    m.hidden = {500, 500, 2000};
    m.d_prime = 10;
    m.lr = 1e-3;
    m.pretrain_epochs = 30;
    m.train_epochs = 200;
    m.alpha1 = 0.1;
    m.alpha2 = 0.01;
    m.epsilon_fuse = 0.5;
    if (config.knn_k == 0) config.knn_k = 3;
  } else {
    throw ConfigError("unknown preset '" + preset +
                      "' (expected mnist, fashion, or usps)");
  }
}

namespace {

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = m.values();
  return j;
}

Matrix matrix_from_json(const json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("data").get<std::vector<double>>());
}

json layers_to_json(const std::vector<DenseLayer>& layers) {
  json arr = json::array();
  for (const DenseLayer& l : layers)
    arr.push_back({{"weight", matrix_to_json(l.weight)},
                   {"bias", matrix_to_json(l.bias)}});
  return arr;
}

std::vector<DenseLayer> layers_from_json(const json& arr) {
  std::vector<DenseLayer> layers;
  for (const json& l : arr)
    layers.push_back(
        {matrix_from_json(l.at("weight")), matrix_from_json(l.at("bias"))});
  return layers;
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("missing output directory");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path);
}

void write_metrics_json(const std::string& path, const std::vector<int>& labels,
                        const std::vector<int>& truth) {
  ordered_json j;
  j["acc"] = clustering_accuracy(labels, truth);
  j["nmi"] = normalized_mutual_information(labels, truth);
  j["ari"] = adjusted_rand_index(labels, truth);
  write_text(path, j.dump(2) + "\n");
}

SparseAdjacency resolve_adjacency(const RunConfig& config, const Matrix& x) {
  if (!config.graph_path.empty())
    return read_edge_list(config.graph_path, x.rows());
  return knn_graph(x, config.knn_k);
}

}  // namespace

void save_autoencoder(const std::string& path, const AutoencoderParams& params) {
  json j;
  j["encoder"] = layers_to_json(params.encoder);
  j["decoder"] = layers_to_json(params.decoder);
  write_text(path, j.dump() + "\n");
}

AutoencoderParams load_autoencoder(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  json j;
  try {
    in >> j;
    AutoencoderParams params;
    params.encoder = layers_from_json(j.at("encoder"));
    params.decoder = layers_from_json(j.at("decoder"));
    if (params.encoder.empty() || params.decoder.empty())
      throw Error("autoencoder params: empty layer list");
    return params;
  } catch (const json::exception& e) {
    throw ParseError(path + ": invalid autoencoder params: " + e.what());
  }
}

void run_pretrain(const RunConfig& config) {
  config.validate();
  ensure_out_dir(config.out_dir);
  const DatasetBundle data = load_features(config.data_path);
  std::ofstream log(fs::path(config.out_dir) / "log.jsonl");
  const AutoencoderParams params =
      pretrain(data.features, config.model, [&log](int epoch, double recon) {
        ordered_json j;
        j["epoch"] = epoch;
        j["recon"] = recon;
        log << j.dump() << '\n';
      });
  save_autoencoder((fs::path(config.out_dir) / "params.json").string(), params);
  write_text((fs::path(config.out_dir) / "config.json").string(), config.to_json());
}

void run_train(const RunConfig& config) {
  config.validate();
  ensure_out_dir(config.out_dir);
  const DatasetBundle data = load_features(config.data_path);
  const std::vector<int>* truth = data.labels ? &*data.labels : nullptr;

  AutoencoderParams pretrained;
  const AutoencoderParams* pretrained_ptr = nullptr;
  if (!config.pretrained_path.empty()) {
    pretrained = load_autoencoder(config.pretrained_path);
    pretrained_ptr = &pretrained;
  }

  std::ofstream log(fs::path(config.out_dir) / "log.jsonl");
  const LogSink sink = [&log](const EpochLog& entry) {
    log << entry.to_json() << '\n';
  };

  TrainResult result;
  if (config.method == Method::ddac) {
    result = train_ddac(data.features, config.model, sink, truth, pretrained_ptr);
  } else {
    const SparseAdjacency adjacency = resolve_adjacency(config, data.features);
    result = train_ddacg(data.features, adjacency, config.model, sink, truth,
                         pretrained_ptr);
  }

  write_labels((fs::path(config.out_dir) / "labels.csv").string(), result.labels);
  if (truth)
    write_metrics_json((fs::path(config.out_dir) / "metrics.json").string(),
                       result.labels, *truth);
  write_text((fs::path(config.out_dir) / "config.json").string(), config.to_json());
}

void run_knn_graph(const std::string& data_path, int k_neighbors,
                   const std::string& out_path) {
  if (data_path.empty()) throw ConfigError("missing data path");
  if (!fs::exists(data_path)) throw ConfigError("data file not found: " + data_path);
  if (k_neighbors < 1) throw ConfigError("k-neighbors must be at least 1");
  if (out_path.empty()) throw ConfigError("missing output path");
  const DatasetBundle data = load_features(data_path);
  write_edge_list(knn_graph(data.features, k_neighbors), out_path);
}

void run_eval(const std::string& pred_path, const std::string& truth_path,
              const std::string& out_path) {
  if (pred_path.empty() || truth_path.empty())
    throw ConfigError("eval requires --pred and --truth");
  if (!fs::exists(pred_path)) throw ConfigError("file not found: " + pred_path);
  if (!fs::exists(truth_path)) throw ConfigError("file not found: " + truth_path);
  const std::vector<int> pred = load_labels(pred_path);
  const std::vector<int> truth = load_labels(truth_path);
  ordered_json j;
  j["acc"] = clustering_accuracy(pred, truth);
  j["nmi"] = normalized_mutual_information(pred, truth);
  j["ari"] = adjusted_rand_index(pred, truth);
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

}  // namespace ddac
