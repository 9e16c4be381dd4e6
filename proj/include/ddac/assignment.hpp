#pragma once

#include <cstdint>
#include <vector>

#include "ddac/matrix.hpp"
#include "ddac/tape.hpp"

namespace ddac {

/// Student-t soft assignment: q_ij = (1+||z_i-mu_j||^2)^-1 / sum_j' (...)^-1.
Var soft_assign(Tape& tape, Var z, Var mu);
Matrix soft_assign(const Matrix& z, const Matrix& mu);

/// Sharpened, frequency-normalized self-training target:
/// p_ij = (q_ij^2 / f_j) / sum_j' (q_ij'^2 / f_j') with f_j = sum_i q_ij.
/// Held constant during a training step. Throws DomainError on a zero column.
Matrix target_distribution(const Matrix& q);

/// t_i = 1 iff max_j p_ij > delta (strict).
std::vector<std::uint8_t> confidence_mask(const Matrix& p, double delta);

struct AssignmentState {
  Matrix q;                      // n x k, row-stochastic
  Matrix p;                      // n x k, row-stochastic
  std::vector<std::uint8_t> t;   // length n
  double delta = 0.0;
  std::vector<std::size_t> omega;  // support of t

  std::size_t confident_count() const { return omega.size(); }
};

AssignmentState make_assignment(const Matrix& z, const Matrix& mu, double delta);

/// argmax per row, ties to the lowest index.
std::vector<int> argmax_labels(const Matrix& scores);

}  // namespace ddac
