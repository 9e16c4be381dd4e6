#include "ddac/gcn.hpp"

#include <cmath>

#include "ddac/adam.hpp"
#include "ddac/assignment.hpp"
#include "ddac/kmeans.hpp"
#include "ddac/losses.hpp"
#include "ddac/metrics.hpp"

namespace ddac {

GcnParams init_gcn(const std::vector<std::size_t>& encoder_widths, int k,
                   double epsilon_fuse, RngStream& rng) {
  if (encoder_widths.size() < 2)
    throw ConfigError("init_gcn: need at least input and latent widths");
  GcnParams params;
  params.epsilon_fuse = epsilon_fuse;
  std::vector<std::size_t> widths = encoder_widths;
  widths.push_back(static_cast<std::size_t>(k));
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Matrix w(widths[l], widths[l + 1]);
    const double limit = std::sqrt(6.0 / static_cast<double>(widths[l] + widths[l + 1]));
    for (double& x : w.values()) x = rng.uniform(-limit, limit);
    params.weights.push_back(std::move(w));
  }
  return params;
}

GcnVars stage_gcn(Tape& tape, const GcnParams& params) {
  GcnVars vars;
  for (const Matrix& w : params.weights) vars.w.push_back(tape.parameter(w));
  return vars;
}

GcnForward gcn_forward(Tape& tape, Var x, const NormalizedAdjacency& adj,
                       const std::vector<Var>& ae_activations, const GcnVars& vars,
                       double epsilon_fuse) {
  const std::size_t layers = vars.w.size();
  if (ae_activations.size() != layers - 1)
    throw ShapeError("gcn_forward: expected " + std::to_string(layers - 1) +
                     " autoencoder activations, got " +
                     std::to_string(ae_activations.size()));
  GcnForward out;
  Var s = relu(spmm(tape, adj, matmul(x, vars.w[0])));
  out.s.push_back(s);
  for (std::size_t l = 1; l < layers; ++l) {
    const Var z = ae_activations[l - 1];
    if (z.cols() != s.cols())
      throw ShapeError("gcn_forward: fusion width mismatch at layer " +
                       std::to_string(l + 1) + ": GCN " +
                       std::to_string(s.cols()) + " vs AE " +
                       std::to_string(z.cols()));
    Var fused = add(scale(s, 1.0 - epsilon_fuse), scale(z, epsilon_fuse));
    Var propagated = spmm(tape, adj, matmul(fused, vars.w[l]));
    if (l + 1 < layers) {
      s = relu(propagated);
      out.s.push_back(s);
    } else {
      out.y = softmax_rows(propagated);
    }
  }
  return out;
}

TrainResult train_ddacg(const Matrix& x, const SparseAdjacency& adjacency,
                        const DdacConfig& config, const LogSink& sink,
                        const std::vector<int>* truth,
                        const AutoencoderParams* pretrained) {
  config.validate();
  const std::size_t n = x.rows();
  if (n == 0 || x.cols() == 0) throw Error("train_ddacg: empty dataset");
  if (adjacency.node_count() != n)
    throw Error("train_ddacg: adjacency has " +
                std::to_string(adjacency.node_count()) + " nodes, data has " +
                std::to_string(n) + " rows");

  RngStream rng(config.seed);
  TrainResult result;
  if (pretrained) {
    result.params = *pretrained;
  } else {
    DdacConfig pre = config;
    pre.seed = rng.fork_seed();
    result.params = pretrain(x, pre);
  }

  GcnParams gcn =
      init_gcn(result.params.encoder_widths(), config.k, config.epsilon_fuse, rng);
  const NormalizedAdjacency norm = normalize_adjacency(adjacency);

  Matrix z = encode(result.params, x);
  result.centroids =
      kmeans_fit(z, config.k, config.kmeans_restarts, 300, rng.fork_seed()).centroids;

  AdamOptimizer adam({config.lr});

  const auto step_slots = [&](const AeVars& ae, Var mu, const GcnVars& gv) {
    std::vector<ParamSlot> slots;
    for (std::size_t l = 0; l < result.params.encoder.size(); ++l) {
      slots.push_back({"enc" + std::to_string(l) + ".w",
                       &result.params.encoder[l].weight, &ae.enc_w[l].grad()});
      slots.push_back({"enc" + std::to_string(l) + ".b",
                       &result.params.encoder[l].bias, &ae.enc_b[l].grad()});
    }
    for (std::size_t l = 0; l < result.params.decoder.size(); ++l) {
      slots.push_back({"dec" + std::to_string(l) + ".w",
                       &result.params.decoder[l].weight, &ae.dec_w[l].grad()});
      slots.push_back({"dec" + std::to_string(l) + ".b",
                       &result.params.decoder[l].bias, &ae.dec_b[l].grad()});
    }
    slots.push_back({"mu", &result.centroids, &mu.grad()});
    for (std::size_t l = 0; l < gcn.weights.size(); ++l)
      slots.push_back(
          {"gcn" + std::to_string(l) + ".w", &gcn.weights[l], &gv.w[l].grad()});
    return slots;
  };

  for (int epoch = 1; epoch <= config.train_epochs; ++epoch) {
    try {
      Tape tape;
      AeVars ae = stage_autoencoder(tape, result.params);
      GcnVars gv = stage_gcn(tape, gcn);
      Var mu = tape.parameter(result.centroids);
      Var xc = tape.constant(x);

      EncodeResult enc = encode(tape, xc, ae);
      Var recon = reconstruction_loss(tape, xc, decode(tape, enc.z, ae));
      Var q = soft_assign(tape, enc.z, mu);
      std::vector<Var> fusion = enc.hidden;
      fusion.push_back(enc.z);
      GcnForward gout = gcn_forward(tape, xc, norm, fusion, gv, config.epsilon_fuse);

      const Matrix p = target_distribution(q.value());
      const auto t = confidence_mask(p, config.delta);
      Var g_clus =
          g_clus_loss(tape, q, gout.y, p, t, config.alpha1, config.alpha2);
      Var disc = disc_loss(tape, enc.z, mu, p, t);
      Var orth = orth_loss(tape, enc.z, t);
      Var total = add(add(recon, g_clus),
                      add(scale(disc, config.beta), scale(orth, config.gamma)));
      tape.backward(total);

      EpochLog log;
      log.epoch = epoch;
      log.gcn = true;
      log.recon = recon.value()(0, 0);
      log.clus = g_clus.value()(0, 0);
      log.disc = disc.value()(0, 0);
      log.orth = orth.value()(0, 0);
      log.total = total.value()(0, 0);
      for (auto ti : t) log.confident_count += ti;
      if (truth) {
        const std::vector<int> labels = argmax_labels(gout.y.value());
        log.acc = clustering_accuracy(labels, *truth);
        log.nmi = normalized_mutual_information(labels, *truth);
        log.ari = adjusted_rand_index(labels, *truth);
      }
      result.history.push_back(log);
      if (sink) sink(log);

      adam.step(step_slots(ae, mu, gv));
    } catch (const DomainError& e) {
      throw Error("train_ddacg: epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }

  // final labels from the GCN prediction Y
  Tape tape;
  AeVars ae = stage_autoencoder(tape, result.params);
  GcnVars gv = stage_gcn(tape, gcn);
  EncodeResult enc = encode(tape, tape.constant(x), ae);
  std::vector<Var> fusion = enc.hidden;
  fusion.push_back(enc.z);
  GcnForward gout = gcn_forward(tape, tape.constant(x), norm, fusion, gv,
                                config.epsilon_fuse);
  result.labels = argmax_labels(gout.y.value());
  return result;
}

}  // namespace ddac
