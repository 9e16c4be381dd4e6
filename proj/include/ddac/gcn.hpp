#pragma once

#include "ddac/ddac.hpp"
#include "ddac/graph.hpp"

namespace ddac {

/// GCN stack mirroring the autoencoder widths, plus a final d' -> k softmax
/// layer. Hidden layers use ReLU on the graph-propagated product.
struct GcnParams {
  std::vector<Matrix> weights;  // layer l maps width[l-1] -> width[l]
  double epsilon_fuse = 0.5;

  std::size_t layer_count() const { return weights.size(); }
};

GcnParams init_gcn(const std::vector<std::size_t>& encoder_widths, int k,
                   double epsilon_fuse, RngStream& rng);

struct GcnVars {
  std::vector<Var> w;
};

GcnVars stage_gcn(Tape& tape, const GcnParams& params);

struct GcnForward {
  std::vector<Var> s;  // S_1 .. S_{L-1}
  Var y;               // n x k row-stochastic prediction
};

/// S_1 = ReLU(A_hat X W_1); for 2 <= l <= L-1,
/// S_l = ReLU(A_hat S~_{l-1} W_l) with S~_{l-1} = (1-eps) S_{l-1} + eps Z_{l-1};
/// Y = row-softmax(A_hat S~_{L-1} W_L). ae_activations supplies Z_1 .. Z_{L-1}
/// (the encoder's hidden activations followed by the latent Z).
GcnForward gcn_forward(Tape& tape, Var x, const NormalizedAdjacency& adj,
                       const std::vector<Var>& ae_activations, const GcnVars& vars,
                       double epsilon_fuse);

/// Graph-aware training loop: joint Adam updates of the autoencoder, the
/// centroids, and the GCN under recon + g_clus + beta*disc + gamma*orth.
/// Full batch; final labels come from the argmax of Y.
TrainResult train_ddacg(const Matrix& x, const SparseAdjacency& adjacency,
                        const DdacConfig& config, const LogSink& sink = {},
                        const std::vector<int>* truth = nullptr,
                        const AutoencoderParams* pretrained = nullptr);

}  // namespace ddac
