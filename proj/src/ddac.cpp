#include "ddac/ddac.hpp"

#include <json.hpp>

#include "ddac/adam.hpp"
#include "ddac/assignment.hpp"
#include "ddac/kmeans.hpp"
#include "ddac/losses.hpp"
#include "ddac/metrics.hpp"

namespace ddac {

// One iteration = one full-batch pass up to this many rows. Beyond it, P and t
// come from a full forward pass at each epoch boundary and stay fixed within
// the epoch's mini-batches.
constexpr std::size_t kFullBatchRows = 10240;

void DdacConfig::validate() const {
  if (k < 2) throw ConfigError("config: k must be at least 2");
  if (d_prime < 1) throw ConfigError("config: d_prime must be at least 1");
  if (alpha < 0 || beta < 0 || gamma < 0)
    throw ConfigError("config: loss weights must be non-negative");
  if (delta < 0.0 || delta >= 1.0)
    throw ConfigError("config: delta must lie in [0, 1)");
  if (!(lr > 0)) throw ConfigError("config: lr must be positive");
  if (train_epochs < 1) throw ConfigError("config: train_epochs must be at least 1");
  if (pretrain_epochs < 0) throw ConfigError("config: pretrain_epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("config: batch_size must be at least 1");
  if (kmeans_restarts < 1)
    throw ConfigError("config: kmeans_restarts must be at least 1");
  for (int h : hidden)
    if (h < 1) throw ConfigError("config: hidden widths must be positive");
  if (alpha1 < 0 || alpha2 < 0)
    throw ConfigError("config: alpha1/alpha2 must be non-negative");
  if (epsilon_fuse < 0.0 || epsilon_fuse > 1.0)
    throw ConfigError("config: epsilon_fuse must lie in [0, 1]");
}

std::string EpochLog::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["recon"] = recon;
  j["clus"] = clus;
  j["disc"] = disc;
  j["orth"] = orth;
  j["total"] = total;
  j["confident_count"] = confident_count;
  if (gcn) j["gcn"] = true;
  if (acc) j["acc"] = *acc;
  if (nmi) j["nmi"] = *nmi;
  if (ari) j["ari"] = *ari;
  return j.dump();
}

Matrix gather_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double* src = m.row(idx[i]);
    double* dst = out.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[j];
  }
  return out;
}

// Shuffled partition of [0, n) into consecutive chunks; covers every index
// exactly once.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n,
                                                    std::size_t batch_size,
                                                    RngStream& rng) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

namespace {

std::vector<ParamSlot> ae_slots(AutoencoderParams& params, const AeVars& vars) {
  std::vector<ParamSlot> slots;
  for (std::size_t l = 0; l < params.encoder.size(); ++l) {
    slots.push_back({"enc" + std::to_string(l) + ".w", &params.encoder[l].weight,
                     &vars.enc_w[l].grad()});
    slots.push_back({"enc" + std::to_string(l) + ".b", &params.encoder[l].bias,
                     &vars.enc_b[l].grad()});
  }
  for (std::size_t l = 0; l < params.decoder.size(); ++l) {
    slots.push_back({"dec" + std::to_string(l) + ".w", &params.decoder[l].weight,
                     &vars.dec_w[l].grad()});
    slots.push_back({"dec" + std::to_string(l) + ".b", &params.decoder[l].bias,
                     &vars.dec_b[l].grad()});
  }
  return slots;
}

AutoencoderParams pretrain_impl(const Matrix& x, const DdacConfig& config,
                                RngStream& rng, const PretrainSink& sink) {
  AutoencoderParams params =
      init_autoencoder(x.cols(), config.hidden,
                       static_cast<std::size_t>(config.d_prime), rng);
  AdamOptimizer adam({config.lr});
  const std::size_t n = x.rows();
  for (int epoch = 1; epoch <= config.pretrain_epochs; ++epoch) {
    double loss_sum = 0.0;
    for (const auto& batch :
         epoch_batches(n, static_cast<std::size_t>(config.batch_size), rng)) {
      Tape tape;
      AeVars vars = stage_autoencoder(tape, params);
      Var xb = tape.constant(gather_rows(x, batch));
      Var xhat = decode(tape, encode(tape, xb, vars).z, vars);
      Var loss = reconstruction_loss(tape, xb, xhat);
      tape.backward(loss);
      adam.step(ae_slots(params, vars));
      loss_sum += loss.value()(0, 0) * static_cast<double>(batch.size());
    }
    if (sink) sink(epoch, loss_sum / static_cast<double>(n));
  }
  return params;
}

void add_metrics(EpochLog& log, const Matrix& scores, const std::vector<int>* truth) {
  if (!truth) return;
  const std::vector<int> labels = argmax_labels(scores);
  log.acc = clustering_accuracy(labels, *truth);
  log.nmi = normalized_mutual_information(labels, *truth);
  log.ari = adjusted_rand_index(labels, *truth);
}

}  // namespace

AutoencoderParams pretrain(const Matrix& x, const DdacConfig& config,
                           const PretrainSink& sink) {
  config.validate();
  if (x.rows() == 0 || x.cols() == 0) throw Error("pretrain: empty dataset");
  RngStream rng(config.seed);
  return pretrain_impl(x, config, rng, sink);
}

TrainResult train_ddac(const Matrix& x, const DdacConfig& config,
                       const LogSink& sink, const std::vector<int>* truth,
                       const AutoencoderParams* pretrained) {
  config.validate();
  const std::size_t n = x.rows();
  if (n == 0 || x.cols() == 0) throw Error("train_ddac: empty dataset");
  if (n < static_cast<std::size_t>(config.k))
    throw Error("train_ddac: fewer samples than clusters");

  RngStream rng(config.seed);
  TrainResult result;
  if (pretrained)
    result.params = *pretrained;
  else
    result.params = pretrain_impl(x, config, rng, {});

  Matrix z = encode(result.params, x);
  result.centroids = kmeans_fit(z, config.k, config.kmeans_restarts, 300,
                                rng.fork_seed())
                         .centroids;

  AdamOptimizer adam({config.lr});
  const bool full_batch = n <= kFullBatchRows;

  for (int epoch = 1; epoch <= config.train_epochs; ++epoch) {
    try {
      EpochLog log;
      log.epoch = epoch;
      if (full_batch) {
        Tape tape;
        AeVars ae = stage_autoencoder(tape, result.params);
        Var mu = tape.parameter(result.centroids);
        Var xc = tape.constant(x);
        EncodeResult enc = encode(tape, xc, ae);
        Var recon = reconstruction_loss(tape, xc, decode(tape, enc.z, ae));
        Var q = soft_assign(tape, enc.z, mu);
        const Matrix p = target_distribution(q.value());
        const auto t = confidence_mask(p, config.delta);
        Var clus = clus_loss(tape, q, p, t);
        Var disc = disc_loss(tape, enc.z, mu, p, t);
        Var orth = orth_loss(tape, enc.z, t);
        Var total = total_loss(tape, recon, clus, disc, orth, config.alpha,
                               config.beta, config.gamma);
        tape.backward(total);

        log.recon = recon.value()(0, 0);
        log.clus = clus.value()(0, 0);
        log.disc = disc.value()(0, 0);
        log.orth = orth.value()(0, 0);
        log.total = total.value()(0, 0);
        for (auto ti : t) log.confident_count += ti;
        add_metrics(log, q.value(), truth);

        std::vector<ParamSlot> slots = ae_slots(result.params, ae);
        slots.push_back({"mu", &result.centroids, &mu.grad()});
        adam.step(slots);
      } else {
        // epoch-boundary full pass fixes P and t for the epoch's mini-batches
        const Matrix z_full = encode(result.params, x);
        const Matrix q_full = soft_assign(z_full, result.centroids);
        const Matrix p_full = target_distribution(q_full);
        const auto t_full = confidence_mask(p_full, config.delta);

        log.recon = reconstruction_loss(result.params, x);
        log.clus = clus_loss(q_full, p_full, t_full);
        log.disc = disc_loss(z_full, result.centroids, p_full, t_full);
        log.orth = orth_loss(z_full, t_full);
        log.total = log.recon + config.alpha * log.clus + config.beta * log.disc +
                    config.gamma * log.orth;
        for (auto ti : t_full) log.confident_count += ti;
        add_metrics(log, q_full, truth);

        for (const auto& batch :
             epoch_batches(n, static_cast<std::size_t>(config.batch_size), rng)) {
          Tape tape;
          AeVars ae = stage_autoencoder(tape, result.params);
          Var mu = tape.parameter(result.centroids);
          Var xb = tape.constant(gather_rows(x, batch));
          Matrix pb = gather_rows(p_full, batch);
          std::vector<std::uint8_t> tb(batch.size());
          for (std::size_t i = 0; i < batch.size(); ++i) tb[i] = t_full[batch[i]];
          EncodeResult enc = encode(tape, xb, ae);
          Var recon = reconstruction_loss(tape, xb, decode(tape, enc.z, ae));
          Var q = soft_assign(tape, enc.z, mu);
          Var clus = clus_loss(tape, q, pb, tb);
          Var disc = disc_loss(tape, enc.z, mu, pb, tb);
          Var orth = orth_loss(tape, enc.z, tb);
          Var total = total_loss(tape, recon, clus, disc, orth, config.alpha,
                                 config.beta, config.gamma);
          tape.backward(total);
          std::vector<ParamSlot> slots = ae_slots(result.params, ae);
          slots.push_back({"mu", &result.centroids, &mu.grad()});
          adam.step(slots);
        }
      }
      result.history.push_back(log);
      if (sink) sink(log);
    } catch (const DomainError& e) {
      throw Error("train_ddac: epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }

  const Matrix q_final = soft_assign(encode(result.params, x), result.centroids);
  result.labels = argmax_labels(q_final);
  return result;
}

}  // namespace ddac
