#include "ddac/assignment.hpp"

namespace ddac {

Var soft_assign(Tape&, Var z, Var mu) {
  Var kernel = reciprocal(add_scalar(pairwise_sqdist(z, mu), 1.0));
  Var norm = reciprocal(row_sum(kernel));
  return hadamard(kernel, broadcast_col(norm, mu.rows()));
}

Matrix soft_assign(const Matrix& z, const Matrix& mu) {
  Tape tape;
  return soft_assign(tape, tape.constant(z), tape.constant(mu)).value();
}

Matrix target_distribution(const Matrix& q) {
  const std::size_t n = q.rows(), k = q.cols();
  std::vector<double> freq(k, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) freq[j] += q(i, j);
  for (std::size_t j = 0; j < k; ++j)
    if (freq[j] <= 0.0)
      throw DomainError("target_distribution: cluster " + std::to_string(j) +
                        " has zero total assignment");
  Matrix p(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      p(i, j) = q(i, j) * q(i, j) / freq[j];
      total += p(i, j);
    }
    for (std::size_t j = 0; j < k; ++j) p(i, j) /= total;
  }
  return p;
}

std::vector<std::uint8_t> confidence_mask(const Matrix& p, double delta) {
  std::vector<std::uint8_t> t(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    double mx = p(i, 0);
    for (std::size_t j = 1; j < p.cols(); ++j) mx = std::max(mx, p(i, j));
    t[i] = mx > delta ? 1 : 0;
  }
  return t;
}

AssignmentState make_assignment(const Matrix& z, const Matrix& mu, double delta) {
  AssignmentState state;
  state.q = soft_assign(z, mu);
  state.p = target_distribution(state.q);
  state.t = confidence_mask(state.p, delta);
  state.delta = delta;
  for (std::size_t i = 0; i < state.t.size(); ++i)
    if (state.t[i]) state.omega.push_back(i);
  return state;
}

std::vector<int> argmax_labels(const Matrix& scores) {
  std::vector<int> labels(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (std::size_t j = 1; j < scores.cols(); ++j)
      if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
    labels[i] = best;
  }
  return labels;
}

}  // namespace ddac
