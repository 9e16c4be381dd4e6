#pragma once

#include <cstdint>
#include <vector>

#include "ddac/matrix.hpp"
#include "ddac/tape.hpp"

namespace ddac {

/// Guard added to the inter-cluster denominator against coincident centroids.
inline constexpr double kDiscDenomGuard = 1e-8;

/// Confidence-weighted intra/inter discrepancy ratio:
///   [sum_j sum_i ||z_i-mu_j||^2 p_ij t_i] /
///   [(sum_i t_i) * sum_j sum_m ||mu_m-mu_j||^2 + guard].
/// P and t are held constant. Returns 0 (and warns) when the mask is empty.
Var disc_loss(Tape& tape, Var z, Var mu, const Matrix& p,
              const std::vector<std::uint8_t>& t);

/// Off-diagonal Gram penalty of the confident rows of Z, normalized by the
/// confident count. Returns 0 (and warns) when the mask is empty.
Var orth_loss(Tape& tape, Var z, const std::vector<std::uint8_t>& t);

/// Masked KL(P || Q) = sum_i t_i sum_j p_ij log(p_ij / q_ij), with the
/// convention 0*log(0/q) = 0. P and t are constants; gradients flow through Q.
/// Throws DomainError when q_ij = 0 with p_ij > 0.
Var clus_loss(Tape& tape, Var q, const Matrix& p,
              const std::vector<std::uint8_t>& t);

/// alpha1 * KL(P||Q) + alpha2 * KL(P||Y) over the confident set.
Var g_clus_loss(Tape& tape, Var q, Var y, const Matrix& p,
                const std::vector<std::uint8_t>& t, double alpha1, double alpha2);

/// recon + alpha*clus + beta*disc + gamma*orth.
Var total_loss(Tape& tape, Var recon, Var clus, Var disc, Var orth, double alpha,
               double beta, double gamma);

// forward-only evaluations used by tests and diagnostics
double disc_loss(const Matrix& z, const Matrix& mu, const Matrix& p,
                 const std::vector<std::uint8_t>& t);
double orth_loss(const Matrix& z, const std::vector<std::uint8_t>& t);
double clus_loss(const Matrix& q, const Matrix& p,
                 const std::vector<std::uint8_t>& t);
double g_clus_loss(const Matrix& q, const Matrix& y, const Matrix& p,
                   const std::vector<std::uint8_t>& t, double alpha1,
                   double alpha2);

}  // namespace ddac
