#pragma once

#include <string>

#include "ddac/ddac.hpp"

namespace ddac {

enum class Method { ddac, ddac_g };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Everything needed to reproduce a run. The snapshot written to the output
/// directory is this struct serialized with all values expanded.
struct RunConfig {
  Method method = Method::ddac;
  std::string data_path;
  std::string graph_path;   // optional; DDAC-G only
  int knn_k = 0;            // optional alternative to graph_path (k' > 0)
  std::string out_dir;
  std::string pretrained_path;  // optional
  DdacConfig model;

  void validate() const;
  std::string to_json() const;

  /// Applies the keys present in the JSON text over the current values.
  void merge_json_text(const std::string& text);
  void merge_json_file(const std::string& path);

  static RunConfig from_json_text(const std::string& text) {
    RunConfig c;
    c.merge_json_text(text);
    return c;
  }
};

/// Installs a named hyperparameter preset over the model defaults.
/// Known presets: mnist, fashion, usps.
void apply_preset(RunConfig& config, const std::string& preset);

void save_autoencoder(const std::string& path, const AutoencoderParams& params);
AutoencoderParams load_autoencoder(const std::string& path);

// Subcommand bodies shared by the CLI and the test suites. Throw ConfigError
// for usage-level problems and Error for runtime failures.
void run_pretrain(const RunConfig& config);
void run_train(const RunConfig& config);  // dispatches on config.method
void run_knn_graph(const std::string& data_path, int k_neighbors,
                   const std::string& out_path);
void run_eval(const std::string& pred_path, const std::string& truth_path,
              const std::string& out_path);  // empty out_path prints to stdout

}  // namespace ddac
