#include "ddac/autoencoder.hpp"

#include <cmath>

namespace ddac {

namespace {

DenseLayer glorot_layer(std::size_t in, std::size_t out, RngStream& rng) {
  DenseLayer layer{Matrix(in, out), Matrix(1, out)};
  const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
  for (double& w : layer.weight.values()) w = rng.uniform(-limit, limit);
  return layer;
}

Var dense(Tape&, Var input, Var weight, Var bias, bool activate) {
  Var out = add(matmul(input, weight), broadcast_row(bias, input.rows()));
  return activate ? relu(out) : out;
}

}  // namespace

std::vector<std::size_t> AutoencoderParams::encoder_widths() const {
  std::vector<std::size_t> widths;
  widths.push_back(input_dim());
  for (const DenseLayer& layer : encoder) widths.push_back(layer.weight.cols());
  return widths;
}

AutoencoderParams init_autoencoder(std::size_t input_dim,
                                   const std::vector<int>& hidden,
                                   std::size_t latent_dim, RngStream& rng) {
  if (input_dim == 0 || latent_dim == 0)
    throw ConfigError("init_autoencoder: zero layer width");
  std::vector<std::size_t> widths;
  widths.push_back(input_dim);
  for (int h : hidden) {
    if (h <= 0) throw ConfigError("init_autoencoder: non-positive hidden width");
    widths.push_back(static_cast<std::size_t>(h));
  }
  widths.push_back(latent_dim);

  AutoencoderParams params;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l)
    params.encoder.push_back(glorot_layer(widths[l], widths[l + 1], rng));
  for (std::size_t l = widths.size() - 1; l > 0; --l)
    params.decoder.push_back(glorot_layer(widths[l], widths[l - 1], rng));
  return params;
}

AeVars stage_autoencoder(Tape& tape, const AutoencoderParams& params) {
  AeVars vars;
  for (const DenseLayer& layer : params.encoder) {
    vars.enc_w.push_back(tape.parameter(layer.weight));
    vars.enc_b.push_back(tape.parameter(layer.bias));
  }
  for (const DenseLayer& layer : params.decoder) {
    vars.dec_w.push_back(tape.parameter(layer.weight));
    vars.dec_b.push_back(tape.parameter(layer.bias));
  }
  return vars;
}

EncodeResult encode(Tape& tape, Var x, const AeVars& vars) {
  if (x.cols() != vars.enc_w.front().rows())
    throw ShapeError("encode: input width " + x.value().shape_str() +
                     " does not match first encoder layer " +
                     vars.enc_w.front().value().shape_str());
  EncodeResult result;
  Var h = x;
  for (std::size_t l = 0; l < vars.enc_w.size(); ++l) {
    const bool last = (l + 1 == vars.enc_w.size());
    h = dense(tape, h, vars.enc_w[l], vars.enc_b[l], !last);
    if (!last) result.hidden.push_back(h);
  }
  result.z = h;
  return result;
}

Var decode(Tape& tape, Var z, const AeVars& vars) {
  Var h = z;
  for (std::size_t l = 0; l < vars.dec_w.size(); ++l) {
    const bool last = (l + 1 == vars.dec_w.size());
    h = dense(tape, h, vars.dec_w[l], vars.dec_b[l], !last);
  }
  return h;
}

Matrix encode(const AutoencoderParams& params, const Matrix& x) {
  Tape tape;
  AeVars vars = stage_autoencoder(tape, params);
  return encode(tape, tape.constant(x), vars).z.value();
}

Matrix reconstruct(const AutoencoderParams& params, const Matrix& x) {
  Tape tape;
  AeVars vars = stage_autoencoder(tape, params);
  Var z = encode(tape, tape.constant(x), vars).z;
  return decode(tape, z, vars).value();
}

Var reconstruction_loss(Tape&, Var x, Var xhat) {
  require_same_shape(x.value(), xhat.value(), "reconstruction_loss");
  const double inv = 1.0 / (2.0 * static_cast<double>(x.rows()));
  return scale(sqfrob(sub(x, xhat)), inv);
}

double reconstruction_loss(const AutoencoderParams& params, const Matrix& x) {
  Tape tape;
  AeVars vars = stage_autoencoder(tape, params);
  Var xc = tape.constant(x);
  Var z = encode(tape, xc, vars).z;
  return reconstruction_loss(tape, xc, decode(tape, z, vars)).value()(0, 0);
}

}  // namespace ddac
