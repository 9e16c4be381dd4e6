#pragma once

#include <vector>

#include "ddac/matrix.hpp"
#include "ddac/rng.hpp"
#include "ddac/tape.hpp"

namespace ddac {

struct DenseLayer {
  Matrix weight;  // in x out
  Matrix bias;    // 1 x out
};

/// Fully connected encoder/decoder pair. Hidden layers use ReLU; the final
/// layer of both encoder and decoder is linear. Decoder widths mirror the
/// encoder's.
struct AutoencoderParams {
  std::vector<DenseLayer> encoder;
  std::vector<DenseLayer> decoder;

  std::size_t input_dim() const { return encoder.front().weight.rows(); }
  std::size_t latent_dim() const { return encoder.back().weight.cols(); }

  /// Layer widths [d, hidden..., d'].
  std::vector<std::size_t> encoder_widths() const;
};

/// Glorot-uniform weights, zero biases.
AutoencoderParams init_autoencoder(std::size_t input_dim,
                                   const std::vector<int>& hidden,
                                   std::size_t latent_dim, RngStream& rng);

/// Tape handles for one training step's copy of the parameters.
struct AeVars {
  std::vector<Var> enc_w, enc_b, dec_w, dec_b;
};

AeVars stage_autoencoder(Tape& tape, const AutoencoderParams& params);

struct EncodeResult {
  Var z;                   // n x d', linear output of the last encoder layer
  std::vector<Var> hidden; // post-ReLU activation of each hidden encoder layer
};

EncodeResult encode(Tape& tape, Var x, const AeVars& vars);
Var decode(Tape& tape, Var z, const AeVars& vars);

/// Forward-only evaluation on a scratch tape.
Matrix encode(const AutoencoderParams& params, const Matrix& x);
Matrix reconstruct(const AutoencoderParams& params, const Matrix& x);

/// (1/2n) * sum_i ||x_i - xhat_i||^2.
Var reconstruction_loss(Tape& tape, Var x, Var xhat);
double reconstruction_loss(const AutoencoderParams& params, const Matrix& x);

}  // namespace ddac
