// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; the process
// exits with the number of failed criteria. Criterion 9 drives the installed
// CLI binary, passed via --cli.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ddac/adam.hpp"
#include "ddac/assignment.hpp"
#include "ddac/csv.hpp"
#include "ddac/ddac.hpp"
#include "ddac/gcn.hpp"
#include "ddac/graph.hpp"
#include "ddac/kmeans.hpp"
#include "ddac/losses.hpp"
#include "ddac/metrics.hpp"
#include "ddac/run.hpp"
#include "support.hpp"

using namespace ddac;

namespace {

std::string g_cli_path;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// criterion 1: gradient suite
// ---------------------------------------------------------------------------

struct TinyState {
  Matrix x;
  AutoencoderParams ae;
  GcnParams gcn;
  Matrix mu;
  NormalizedAdjacency adj;
  Matrix p;
  std::vector<std::uint8_t> t;
};

TinyState make_tiny_state(std::uint64_t seed) {
  RngStream rng(seed);
  TinyState s;
  const std::size_t n = 10 + rng.uniform_index(21);        // <= 30
  const int k = 2 + static_cast<int>(rng.uniform_index(3));  // <= 4
  const int d_prime = 2 + static_cast<int>(rng.uniform_index(4));  // <= 5
  const std::size_t d = 4;
  s.x = testsupport::random_matrix(n, d, -1, 1, rng);
  s.ae = init_autoencoder(d, {5, 4}, d_prime, rng);
  // random biases: zero-initialized biases put entire preactivation rows
  // exactly on the relu kink whenever the previous layer outputs a zero row,
  // where the subgradient and the central difference legitimately disagree
  for (auto* layers : {&s.ae.encoder, &s.ae.decoder})
    for (DenseLayer& layer : *layers)
      for (double& b : layer.bias.values()) b = rng.uniform(-0.2, 0.2);
  s.gcn = init_gcn(s.ae.encoder_widths(), k, 0.5, rng);
  std::vector<EdgePair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < 0.2) pairs.push_back({i, j, 1.0});
  s.adj = normalize_adjacency(adjacency_from_pairs(n, pairs));

  const Matrix z = encode(s.ae, s.x);
  s.mu = testsupport::random_matrix(k, d_prime, -1, 1, rng);
  s.p = target_distribution(soft_assign(z, s.mu));
  s.t = confidence_mask(s.p, 0.3);
  bool any = false;
  for (auto ti : s.t) any = any || ti;
  if (!any) s.t.assign(n, 1);
  return s;
}

// every trainable matrix of the state, with the selected one staged as the
// grad_check variable and the rest as constants
struct Staged {
  AeVars ae;
  GcnVars gcn;
  Var mu;
};

Staged stage_all(Tape& tape, const TinyState& s, const Matrix* selected, Var v) {
  const auto pick = [&](const Matrix& m) {
    return &m == selected ? v : tape.constant(m);
  };
  Staged out;
  for (const DenseLayer& l : s.ae.encoder) {
    out.ae.enc_w.push_back(pick(l.weight));
    out.ae.enc_b.push_back(pick(l.bias));
  }
  for (const DenseLayer& l : s.ae.decoder) {
    out.ae.dec_w.push_back(pick(l.weight));
    out.ae.dec_b.push_back(pick(l.bias));
  }
  for (const Matrix& w : s.gcn.weights) out.gcn.w.push_back(pick(w));
  out.mu = pick(s.mu);
  return out;
}

enum class LossKind { recon, clus, disc, orth, g_clus, total12, total17 };

Var build_loss(Tape& tape, const TinyState& s, LossKind kind,
               const Matrix* selected, Var v) {
  Staged st = stage_all(tape, s, selected, v);
  Var xc = tape.constant(s.x);
  EncodeResult enc = encode(tape, xc, st.ae);
  switch (kind) {
    case LossKind::recon:
      return reconstruction_loss(tape, xc, decode(tape, enc.z, st.ae));
    case LossKind::clus:
      return clus_loss(tape, soft_assign(tape, enc.z, st.mu), s.p, s.t);
    case LossKind::disc:
      return disc_loss(tape, enc.z, st.mu, s.p, s.t);
    case LossKind::orth:
      return orth_loss(tape, enc.z, s.t);
    case LossKind::g_clus:
    case LossKind::total17: {
      std::vector<Var> fusion = enc.hidden;
      fusion.push_back(enc.z);
      GcnForward gout =
          gcn_forward(tape, xc, s.adj, fusion, st.gcn, s.gcn.epsilon_fuse);
      Var q = soft_assign(tape, enc.z, st.mu);
      Var gc = g_clus_loss(tape, q, gout.y, s.p, s.t, 0.1, 0.01);
      if (kind == LossKind::g_clus) return gc;
      Var recon = reconstruction_loss(tape, xc, decode(tape, enc.z, st.ae));
      Var disc = disc_loss(tape, enc.z, st.mu, s.p, s.t);
      Var orth = orth_loss(tape, enc.z, s.t);
      return add(add(recon, gc), add(scale(disc, 0.01), scale(orth, 1e-3)));
    }
    case LossKind::total12: {
      Var recon = reconstruction_loss(tape, xc, decode(tape, enc.z, st.ae));
      Var q = soft_assign(tape, enc.z, st.mu);
      Var clus = clus_loss(tape, q, s.p, s.t);
      Var disc = disc_loss(tape, enc.z, st.mu, s.p, s.t);
      Var orth = orth_loss(tape, enc.z, s.t);
      return total_loss(tape, recon, clus, disc, orth, 0.1, 0.01, 1e-5);
    }
  }
  throw Error("unreachable");
}

Outcome criterion_gradient_suite() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_at;
  for (int state_idx = 0; state_idx < 20; ++state_idx) {
    const TinyState s = make_tiny_state(1000 + state_idx);

    std::vector<std::pair<std::string, const Matrix*>> params;
    for (std::size_t l = 0; l < s.ae.encoder.size(); ++l) {
      params.push_back({"enc" + std::to_string(l) + ".w", &s.ae.encoder[l].weight});
      params.push_back({"enc" + std::to_string(l) + ".b", &s.ae.encoder[l].bias});
    }
    for (std::size_t l = 0; l < s.ae.decoder.size(); ++l) {
      params.push_back({"dec" + std::to_string(l) + ".w", &s.ae.decoder[l].weight});
      params.push_back({"dec" + std::to_string(l) + ".b", &s.ae.decoder[l].bias});
    }
    params.push_back({"mu", &s.mu});
    for (std::size_t l = 0; l < s.gcn.weights.size(); ++l)
      params.push_back({"gcn" + std::to_string(l), &s.gcn.weights[l]});

    const std::vector<std::pair<std::string, LossKind>> losses = {
        {"recon", LossKind::recon},   {"clus", LossKind::clus},
        {"disc", LossKind::disc},     {"orth", LossKind::orth},
        {"g_clus", LossKind::g_clus}, {"total12", LossKind::total12},
        {"total17", LossKind::total17}};

    for (const auto& [loss_name, kind] : losses) {
      for (const auto& [param_name, mat] : params) {
        const double err = grad_check(
            [&s, kind, mat](Tape& tape, Var v) {
              return build_loss(tape, s, kind, mat, v);
            },
            *mat, 1e-5);
        if (err > worst) {
          worst = err;
          worst_at = loss_name + "/" + param_name + "@state" +
                     std::to_string(state_idx);
        }
      }
    }
  }
  const double secs = elapsed_s(start);
  std::ostringstream detail;
  detail << "max rel err " << worst << " (" << worst_at << "), " << secs << "s";
  return {worst < 1e-4 && secs < 120.0, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 2: distribution invariants
// ---------------------------------------------------------------------------

Outcome criterion_distribution_invariants() {
  RngStream rng(2024);
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 2 + rng.uniform_index(15);
    const std::size_t k = 2 + rng.uniform_index(4);
    const std::size_t d = 1 + rng.uniform_index(5);
    const Matrix z = testsupport::random_matrix(n, d, -4, 4, rng);
    const Matrix mu = testsupport::random_matrix(k, d, -4, 4, rng);
    const Matrix q = soft_assign(z, mu);
    const Matrix p = target_distribution(q);
    for (std::size_t i = 0; i < n; ++i) {
      double qs = 0, ps = 0;
      for (std::size_t j = 0; j < k; ++j) {
        qs += q(i, j);
        ps += p(i, j);
      }
      if (std::abs(qs - 1.0) > 1e-10)
        return {false, "Q row sum off by " + std::to_string(qs - 1.0)};
      if (std::abs(ps - 1.0) > 1e-10)
        return {false, "P row sum off by " + std::to_string(ps - 1.0)};
    }
    // mask monotone over the delta sweep
    std::size_t prev = n + 1;
    for (double delta : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
      const auto t = confidence_mask(p, delta);
      std::size_t count = 0;
      for (auto ti : t) count += ti;
      if (count > prev) return {false, "mask count increased along delta sweep"};
      prev = count;
    }
  }
  // equalized column sums: sharpening and argmax preservation row by row
  for (int draw = 0; draw < 200; ++draw) {
    const std::size_t k = 2 + rng.uniform_index(4);
    const std::size_t groups = 1 + rng.uniform_index(5);
    Matrix q(groups * k, k);
    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<double> base(k);
      double total = 0;
      for (auto& v : base) {
        v = rng.uniform(0.02, 1.0);
        total += v;
      }
      for (auto& v : base) v /= total;
      for (std::size_t shift = 0; shift < k; ++shift)
        for (std::size_t j = 0; j < k; ++j)
          q(g * k + shift, j) = base[(j + shift) % k];
    }
    const Matrix p = target_distribution(q);
    for (std::size_t i = 0; i < q.rows(); ++i) {
      double hq = 0, hp = 0;
      std::size_t aq = 0, ap = 0;
      for (std::size_t j = 0; j < k; ++j) {
        hq -= q(i, j) * std::log(q(i, j));
        hp -= p(i, j) * std::log(p(i, j));
        if (q(i, j) > q(i, aq)) aq = j;
        if (p(i, j) > p(i, ap)) ap = j;
      }
      if (hp > hq + 1e-12) return {false, "sharpening failed: H(P) > H(Q)"};
      if (aq != ap) return {false, "argmax changed under equal frequencies"};
    }
  }
  return {true, "1000 draws + 200 equal-frequency draws"};
}

// ---------------------------------------------------------------------------
// criterion 3: worked values
// ---------------------------------------------------------------------------

Outcome criterion_worked_values() {
  std::ostringstream detail;
  bool ok = true;
  const auto expect = [&](const char* name, double got, double want) {
    if (std::abs(got - want) > 1e-12) {
      ok = false;
      detail << name << " got " << got << " want " << want << "; ";
    }
  };
  const Matrix q1 = soft_assign(Matrix({{0.0}}), Matrix({{0.0}, {1.0}}));
  expect("soft_assign[0]", q1(0, 0), 2.0 / 3.0);
  expect("soft_assign[1]", q1(0, 1), 1.0 / 3.0);

  const Matrix p =
      target_distribution(Matrix({{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}}));
  expect("target[0][0]", p(0, 0), 0.8);
  expect("target[0][1]", p(0, 1), 0.2);
  expect("target[1][0]", p(1, 0), 0.2);
  expect("target[1][1]", p(1, 1), 0.8);

  const Matrix norm =
      normalize_adjacency(adjacency_from_pairs(2, {{0, 1, 1.0}})).csr.to_dense();
  expect("norm[0][0]", norm(0, 0), 0.5);
  expect("norm[0][1]", norm(0, 1), 0.5);
  expect("norm[1][0]", norm(1, 0), 0.5);
  expect("norm[1][1]", norm(1, 1), 0.5);

  expect("ari", adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}), -0.5);
  if (ok) detail << "all exact to 1e-12";
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 4: metric oracles
// ---------------------------------------------------------------------------

double brute_force_accuracy(const std::vector<int>& pred,
                            const std::vector<int>& truth) {
  int kp = 0, kt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    kp = std::max(kp, pred[i] + 1);
    kt = std::max(kt, truth[i] + 1);
  }
  const int s = std::max(kp, kt);
  std::vector<int> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0;
  do {
    double matched = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (perm[pred[i]] == truth[i]) matched += 1;
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(pred.size());
}

Outcome criterion_metric_oracles() {
  RngStream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_index(5));
    const std::size_t n = 5 + rng.uniform_index(36);
    std::vector<int> truth(n), pred(n);
    for (auto& v : truth) v = static_cast<int>(rng.uniform_index(k));
    for (auto& v : pred) v = static_cast<int>(rng.uniform_index(k));
    const double hungarian = clustering_accuracy(pred, truth);
    const double brute = brute_force_accuracy(pred, truth);
    if (hungarian != brute)
      return {false, "acc mismatch " + std::to_string(hungarian) + " vs " +
                         std::to_string(brute)};
  }
  std::vector<int> truth(60);
  for (auto& v : truth) v = static_cast<int>(rng.uniform_index(3));
  double total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> noise(60);
    for (auto& v : noise) v = static_cast<int>(rng.uniform_index(3));
    total += adjusted_rand_index(noise, truth);
  }
  const double mean_ari = total / 1000.0;
  std::ostringstream detail;
  detail << "acc exact on 200 pairs, mean random ARI " << mean_ari;
  return {std::abs(mean_ari) < 0.02, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 5: k-means oracle
// ---------------------------------------------------------------------------

double exhaustive_two_partition(const Matrix& points) {
  const std::size_t n = points.rows(), d = points.cols();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    Matrix centroid(2, d);
    std::size_t counts[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int c = (mask >> i) & 1u;
      ++counts[c];
      for (std::size_t j = 0; j < d; ++j) centroid(c, j) += points(i, j);
    }
    for (int c = 0; c < 2; ++c)
      for (std::size_t j = 0; j < d; ++j)
        centroid(c, j) /= static_cast<double>(counts[c]);
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int c = (mask >> i) & 1u;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = points(i, j) - centroid(c, j);
        inertia += diff * diff;
      }
    }
    best = std::min(best, inertia);
  }
  return best;
}

Outcome criterion_kmeans_oracle() {
  RngStream rng(5);
  double worst_gap = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(7);  // <= 10
    const std::size_t d = 1 + rng.uniform_index(3);
    const Matrix points = testsupport::random_matrix(n, d, -3, 3, rng);
    // tiny instances, so a generous restart budget is effectively free
    const KMeansResult fit = kmeans_fit(points, 2, 500, 300, rng.fork_seed());
    const double oracle = exhaustive_two_partition(points);
    const double gap = std::abs(fit.inertia - oracle) / std::max(1.0, oracle);
    worst_gap = std::max(worst_gap, gap);
  }
  return {worst_gap < 1e-9,
          "worst relative gap to exhaustive optimum " + std::to_string(worst_gap)};
}

// ---------------------------------------------------------------------------
// criteria 6 and 10: DDAC end to end on blobs and rings
// ---------------------------------------------------------------------------

testsupport::LabeledData axis_blobs(std::size_t n, std::size_t d, int k,
                                    double separation, std::uint64_t seed) {
  // centers at separation * e_j: pairwise distance separation * sqrt(2)
  RngStream rng(seed);
  testsupport::LabeledData data;
  data.x = Matrix(n, d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % static_cast<std::size_t>(k));
    data.labels[i] = c;
    for (std::size_t j = 0; j < d; ++j)
      data.x(i, j) = (static_cast<int>(j) == c ? separation : 0.0) + rng.normal();
  }
  return data;
}

DdacConfig ring_config(std::uint64_t seed, bool ablated) {
  DdacConfig cfg;
  cfg.k = 2;
  cfg.hidden = {64, 32};
  cfg.d_prime = 2;
  cfg.alpha = 0.1;
  cfg.beta = ablated ? 0.0 : 0.1;
  cfg.gamma = ablated ? 0.0 : 1e-3;
  cfg.delta = ablated ? 0.0 : 0.3;
  cfg.lr = 1e-3;
  cfg.pretrain_epochs = 30;
  cfg.train_epochs = 300;
  cfg.batch_size = 256;
  cfg.kmeans_restarts = 20;
  cfg.seed = seed;
  return cfg;
}

testsupport::LabeledData ring_data(std::uint64_t seed) {
  return testsupport::make_rings(300, 1.0, 5.0, 0.2, 20, 0.2, seed);
}

Outcome criterion_ddac_end_to_end() {
  const auto start = std::chrono::steady_clock::now();

  // part 1: four well-separated blobs, exact accuracy within 50 epochs
  const auto blobs = axis_blobs(1000, 20, 4, 10.0, 6001);
  DdacConfig blob_cfg;
  blob_cfg.k = 4;
  blob_cfg.hidden = {64, 32};
  blob_cfg.d_prime = 5;
  blob_cfg.pretrain_epochs = 30;
  blob_cfg.train_epochs = 50;
  blob_cfg.batch_size = 256;
  blob_cfg.kmeans_restarts = 20;
  blob_cfg.seed = 1;
  const TrainResult blob_run = train_ddac(blobs.x, blob_cfg);
  const double blob_acc = clustering_accuracy(blob_run.labels, blobs.labels);
  const double blob_secs = elapsed_s(start);
  if (blob_acc != 1.0 || blob_secs >= 300.0) {
    return {false, "blobs acc " + std::to_string(blob_acc) + " in " +
                       std::to_string(blob_secs) + "s"};
  }

  // part 2: concentric rings, averaged margin over raw k-means
  double km_sum = 0, ddac_sum = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rings = ring_data(seed);
    km_sum += clustering_accuracy(
        kmeans_fit(rings.x, 2, 20, 300, seed).labels, rings.labels);
    const TrainResult run = train_ddac(rings.x, ring_config(seed, false));
    ddac_sum += clustering_accuracy(run.labels, rings.labels);
  }
  const double km_avg = km_sum / 5, ddac_avg = ddac_sum / 5;
  std::ostringstream detail;
  detail << "blobs acc 1.0 in " << blob_secs << "s; rings ddac " << ddac_avg
         << " vs kmeans " << km_avg << " (margin "
         << ddac_avg - km_avg << ", need >= 0.10)";
  return {ddac_avg >= km_avg + 0.10, detail.str()};
}

Outcome criterion_ablation_direction() {
  double full_sum = 0, ablated_sum = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto rings = ring_data(seed);
    full_sum += clustering_accuracy(
        train_ddac(rings.x, ring_config(seed, false)).labels, rings.labels);
    ablated_sum += clustering_accuracy(
        train_ddac(rings.x, ring_config(seed, true)).labels, rings.labels);
  }
  std::ostringstream detail;
  detail << "full " << full_sum / 5 << " vs beta=gamma=0,delta=0 "
         << ablated_sum / 5;
  return {full_sum >= ablated_sum, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 7: DDAC-G on a stochastic block model
// ---------------------------------------------------------------------------

Outcome criterion_ddacg_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  double acc_sum = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto sbm = testsupport::make_sbm(3, 200, 0.2, 0.01, 1.0, seed);
    DdacConfig cfg;
    cfg.k = 3;
    cfg.hidden = {64, 32};
    cfg.d_prime = 10;
    cfg.lr = 1e-3;
    cfg.beta = 0.01;
    cfg.gamma = 1e-5;
    cfg.delta = 0.3;
    cfg.alpha1 = 0.1;
    cfg.alpha2 = 0.01;
    cfg.epsilon_fuse = 0.5;
    cfg.pretrain_epochs = 30;
    cfg.train_epochs = 250;
    cfg.batch_size = 256;
    cfg.kmeans_restarts = 20;
    cfg.seed = seed;
    const TrainResult run = train_ddacg(sbm.x, sbm.adjacency, cfg);
    acc_sum += clustering_accuracy(run.labels, sbm.labels);
  }
  const double avg = acc_sum / 5;
  const double secs = elapsed_s(start);
  std::ostringstream detail;
  detail << "5-seed mean acc " << avg << " in " << secs << "s";
  return {avg >= 0.9 && secs < 300.0, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 8: disc-loss invariances
// ---------------------------------------------------------------------------

Matrix random_rotation(std::size_t d, RngStream& rng) {
  // Gram-Schmidt on a random Gaussian matrix
  Matrix r(d, d);
  for (auto& v : r.values()) v = rng.normal();
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double dot = 0;
      for (std::size_t i = 0; i < d; ++i) dot += r(i, c) * r(i, prev);
      for (std::size_t i = 0; i < d; ++i) r(i, c) -= dot * r(i, prev);
    }
    double norm = 0;
    for (std::size_t i = 0; i < d; ++i) norm += r(i, c) * r(i, c);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) r(i, c) /= norm;
  }
  return r;
}

Outcome criterion_disc_invariance() {
  RngStream rng(8);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30, k = 4, d = 4;
    const Matrix z = testsupport::random_matrix(n, d, -3, 3, rng);
    const Matrix mu = testsupport::random_matrix(k, d, -3, 3, rng);
    const Matrix p = target_distribution(soft_assign(z, mu));
    const auto t = confidence_mask(p, 0.0);  // all confident
    const double base = disc_loss(z, mu, p, t);

    for (double factor : {0.5, 2.0, 10.0}) {
      Matrix z2 = z, mu2 = mu;
      for (auto& v : z2.values()) v *= factor;
      for (auto& v : mu2.values()) v *= factor;
      worst = std::max(worst,
                       std::abs(disc_loss(z2, mu2, p, t) - base) / std::abs(base));
    }
    const Matrix rot = random_rotation(d, rng);
    Matrix zr(n, d), mur(k, d);
    mm_nn_acc(z, rot, zr);
    mm_nn_acc(mu, rot, mur);
    worst = std::max(worst,
                     std::abs(disc_loss(zr, mur, p, t) - base) / std::abs(base));
  }
  return {worst < 1e-10, "worst relative deviation " + std::to_string(worst)};
}

// ---------------------------------------------------------------------------
// criterion 9: CLI determinism
// ---------------------------------------------------------------------------

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path + ">";
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

Outcome criterion_cli_determinism() {
  if (g_cli_path.empty()) return {false, "no --cli path supplied"};
  testsupport::TempDir dir("acceptance_cli");
  const auto blobs = axis_blobs(80, 6, 2, 8.0, 9001);
  const std::string data = dir.file("blobs.csv");
  write_features(data, blobs.x, &blobs.labels);

  const auto run = [&](const std::string& subcommand, const std::string& extra,
                       const std::string& out) {
    const std::string cmd = "'" + g_cli_path + "' " + subcommand + " --data '" +
                            data + "' --out '" + out +
                            "' --k 2 --hidden 8 --d-prime 2 --pretrain-epochs 5 " +
                            "--epochs 10 --seed 7 --batch-size 32 " +
                            "--kmeans-restarts 4 " + extra + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };

  if (run("train", "", dir.file("t1")) != 0) return {false, "train run 1 failed"};
  if (run("train", "", dir.file("t2")) != 0) return {false, "train run 2 failed"};
  const std::string t1 = slurp_file(dir.file("t1/labels.csv"));
  const std::string t2 = slurp_file(dir.file("t2/labels.csv"));
  if (t1 != t2 || t1.empty()) return {false, "train labels differ across runs"};

  if (run("train-graph", "--k-neighbors 3", dir.file("g1")) != 0)
    return {false, "train-graph run 1 failed"};
  if (run("train-graph", "--k-neighbors 3", dir.file("g2")) != 0)
    return {false, "train-graph run 2 failed"};
  const std::string g1 = slurp_file(dir.file("g1/labels.csv"));
  const std::string g2 = slurp_file(dir.file("g2/labels.csv"));
  if (g1 != g2 || g1.empty())
    return {false, "train-graph labels differ across runs"};
  return {true, "train and train-graph byte-identical across reruns"};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient suite vs central differences", criterion_gradient_suite},
      {2, "distribution invariants", criterion_distribution_invariants},
      {3, "worked-value checks", criterion_worked_values},
      {4, "metric oracles", criterion_metric_oracles},
      {5, "k-means exhaustive oracle", criterion_kmeans_oracle},
      {6, "end-to-end ddac (blobs + rings)", criterion_ddac_end_to_end},
      {7, "end-to-end ddac-g (stochastic block model)",
       criterion_ddacg_end_to_end},
      {8, "disc-loss scaling and rotation invariance",
       criterion_disc_invariance},
      {9, "cli determinism", criterion_cli_determinism},
      {10, "ablation direction on rings", criterion_ablation_direction},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (only != 0 && criterion.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s (%.1fs) %s\n",
                outcome.pass ? "PASS" : "FAIL", criterion.id, criterion.name,
                elapsed_s(start), outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures;
}
