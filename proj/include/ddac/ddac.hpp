#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddac/autoencoder.hpp"
#include "ddac/matrix.hpp"

namespace ddac {

struct DdacConfig {
  int k = 2;                              // number of clusters
  int d_prime = 10;                       // latent width
  std::vector<int> hidden = {500, 500, 1000};  // encoder hidden widths
  double alpha = 0.1;                     // clustering-loss weight
  double beta = 0.01;                     // discrepancy-loss weight
  double gamma = 1e-5;                    // orthogonality-loss weight
  double delta = 0.3;                     // confidence threshold
  double lr = 1e-3;
  int pretrain_epochs = 50;
  int train_epochs = 200;
  int batch_size = 512;
  int kmeans_restarts = 20;
  std::uint64_t seed = 0;
  // graph-variant knobs
  double alpha1 = 0.1;    // KL(P||Q) weight
  double alpha2 = 0.01;   // KL(P||Y) weight
  double epsilon_fuse = 0.5;

  void validate() const;
};

struct EpochLog {
  int epoch = 0;
  double recon = 0.0, clus = 0.0, disc = 0.0, orth = 0.0, total = 0.0;
  std::size_t confident_count = 0;
  bool gcn = false;
  std::optional<double> acc, nmi, ari;

  std::string to_json() const;
};

using LogSink = std::function<void(const EpochLog&)>;
using PretrainSink = std::function<void(int epoch, double recon)>;

struct TrainResult {
  std::vector<int> labels;
  AutoencoderParams params;
  Matrix centroids;
  std::vector<EpochLog> history;
};

/// Reconstruction-only mini-batch training of a fresh autoencoder.
AutoencoderParams pretrain(const Matrix& x, const DdacConfig& config,
                           const PretrainSink& sink = {});

/// Full training loop: pretrain (unless params are supplied), k-means centroid
/// init on Z, then per-iteration Q/P/t refresh and one Adam update of the
/// joint objective. Final labels are the argmax of Q.
TrainResult train_ddac(const Matrix& x, const DdacConfig& config,
                       const LogSink& sink = {},
                       const std::vector<int>* truth = nullptr,
                       const AutoencoderParams* pretrained = nullptr);

// shared by the graph variant
Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& idx);
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n,
                                                    std::size_t batch_size,
                                                    RngStream& rng);

}  // namespace ddac
