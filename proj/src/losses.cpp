#include "ddac/losses.hpp"

#include <cmath>
#include <iostream>

namespace ddac {

namespace {

std::size_t mask_count(const std::vector<std::uint8_t>& t) {
  std::size_t count = 0;
  for (std::uint8_t ti : t) count += ti;
  return count;
}

void warn_empty_mask(const char* which) {
  std::cerr << "warning: " << which
            << ": confidence mask is empty, term contributes 0 this step\n";
}

void check_mask_size(std::size_t n, const std::vector<std::uint8_t>& t,
                     const char* op) {
  if (t.size() != n)
    throw ShapeError(std::string(op) + ": mask length " + std::to_string(t.size()) +
                     " does not match row count " + std::to_string(n));
}

}  // namespace

Var disc_loss(Tape& tape, Var z, Var mu, const Matrix& p,
              const std::vector<std::uint8_t>& t) {
  const std::size_t n = z.rows(), k = mu.rows();
  if (p.rows() != n || p.cols() != k)
    throw ShapeError("disc_loss: P is " + p.shape_str() + ", expected " +
                     std::to_string(n) + "x" + std::to_string(k));
  check_mask_size(n, t, "disc_loss");
  const std::size_t confident = mask_count(t);
  if (confident == 0) {
    warn_empty_mask("disc_loss");
    return tape.scalar(0.0);
  }
  Matrix weights(n, k);  // p_ij * t_i
  for (std::size_t i = 0; i < n; ++i)
    if (t[i])
      for (std::size_t j = 0; j < k; ++j) weights(i, j) = p(i, j);
  Var intra = sum(hadamard(pairwise_sqdist(z, mu), tape.constant(std::move(weights))));
  Var inter = sum(pairwise_sqdist(mu, mu));  // ordered pairs, diagonal zero
  Var denom = add_scalar(scale(inter, static_cast<double>(confident)),
                         kDiscDenomGuard);
  return hadamard(intra, reciprocal(denom));
}

Var orth_loss(Tape& tape, Var z, const std::vector<std::uint8_t>& t) {
  const std::size_t n = z.rows(), d = z.cols();
  check_mask_size(n, t, "orth_loss");
  const std::size_t confident = mask_count(t);
  if (confident == 0) {
    warn_empty_mask("orth_loss");
    return tape.scalar(0.0);
  }
  Matrix row_mask(n, 1);
  for (std::size_t i = 0; i < n; ++i) row_mask(i, 0) = t[i] ? 1.0 : 0.0;
  Var zhat = hadamard(z, broadcast_col(tape.constant(std::move(row_mask)), d));
  Var gram = matmul(transpose(zhat), zhat);
  Matrix off_diag = Matrix::full(d, d, 1.0);  // O - I
  for (std::size_t j = 0; j < d; ++j) off_diag(j, j) = 0.0;
  Var penalty = sqfrob(hadamard(gram, tape.constant(std::move(off_diag))));
  return scale(penalty, 1.0 / static_cast<double>(confident));
}

Var clus_loss(Tape& tape, Var q, const Matrix& p,
              const std::vector<std::uint8_t>& t) {
  const Matrix& qv = q.value();
  require_same_shape(qv, p, "clus_loss");
  check_mask_size(qv.rows(), t, "clus_loss");
  Matrix coeff(qv.rows(), qv.cols());  // t_i * p_ij where the term is active
  Matrix active(qv.rows(), qv.cols());
  double entropy_part = 0.0;  // sum t_i p_ij log p_ij
  bool any = false;
  for (std::size_t i = 0; i < qv.rows(); ++i) {
    if (!t[i]) continue;
    for (std::size_t j = 0; j < qv.cols(); ++j) {
      const double pij = p(i, j);
      if (pij == 0.0) continue;  // 0 * log(0/q) = 0
      if (qv(i, j) <= 0.0)
        throw DomainError("clus_loss: q=0 where p>0 at row " + std::to_string(i) +
                          ", col " + std::to_string(j) + " (infinite divergence)");
      coeff(i, j) = pij;
      active(i, j) = 1.0;
      entropy_part += pij * std::log(pij);
      any = true;
    }
  }
  if (!any) return tape.scalar(0.0);
  // Inactive q entries are replaced by 1 so the log never sees them; their
  // coefficient is 0, so values and gradients are unaffected.
  Matrix fill = Matrix::full(qv.rows(), qv.cols(), 1.0);
  for (std::size_t i = 0; i < fill.size(); ++i)
    fill.values()[i] -= active.values()[i];
  Var q_safe = add(hadamard(q, tape.constant(std::move(active))),
                   tape.constant(std::move(fill)));
  // KL = sum t p log p - sum t p log q; only the second term is on the tape
  Var cross = sum(hadamard(tape.constant(std::move(coeff)), ddac::log(q_safe)));
  return add_scalar(scale(cross, -1.0), entropy_part);
}

Var g_clus_loss(Tape& tape, Var q, Var y, const Matrix& p,
                const std::vector<std::uint8_t>& t, double alpha1, double alpha2) {
  return add(scale(clus_loss(tape, q, p, t), alpha1),
             scale(clus_loss(tape, y, p, t), alpha2));
}

Var total_loss(Tape&, Var recon, Var clus, Var disc, Var orth, double alpha,
               double beta, double gamma) {
  return add(add(recon, scale(clus, alpha)),
             add(scale(disc, beta), scale(orth, gamma)));
}

double disc_loss(const Matrix& z, const Matrix& mu, const Matrix& p,
                 const std::vector<std::uint8_t>& t) {
  Tape tape;
  return disc_loss(tape, tape.constant(z), tape.constant(mu), p, t).value()(0, 0);
}

double orth_loss(const Matrix& z, const std::vector<std::uint8_t>& t) {
  Tape tape;
  return orth_loss(tape, tape.constant(z), t).value()(0, 0);
}

double clus_loss(const Matrix& q, const Matrix& p,
                 const std::vector<std::uint8_t>& t) {
  Tape tape;
  return clus_loss(tape, tape.constant(q), p, t).value()(0, 0);
}

double g_clus_loss(const Matrix& q, const Matrix& y, const Matrix& p,
                   const std::vector<std::uint8_t>& t, double alpha1,
                   double alpha2) {
  Tape tape;
  return g_clus_loss(tape, tape.constant(q), tape.constant(y), p, t, alpha1, alpha2)
      .value()(0, 0);
}

}  // namespace ddac
