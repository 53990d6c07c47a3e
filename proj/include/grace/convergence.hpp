#pragma once

#include <vector>

#include "grace/entanglement.hpp"
#include "grace/matrix.hpp"

namespace grace {

/// Audit record for the contraction analysis of the single-layer map
/// f(Z) = sigma(M Z W). The Lipschitz bound L_f is the exact product of its
/// three factors: L_sigma (1 for the rectifier), lambda_max(M), and the
/// spectral-norm bound on the weights.
struct TheoremAudit {
  double lambda_max_propagator = 0.0;
  double lnorm_min = 0.0;  // spectrum interval of I - M
  double lnorm_max = 0.0;
  bool interval_ok = false;  // spectrum within [0, 2] + 1e-8 slack
  double weight_bound = 0.0;           // B_W
  double lipschitz_sigma = 1.0;        // L_sigma
  double lipschitz_total = 0.0;        // L_f = L_sigma * lambda_max * B_W
  double lipschitz_loose = 0.0;        // with the loose lambda bound of 2
  bool contractive = false;            // L_f < 1

  // populated by measure_contraction
  std::vector<double> residuals;  // ||Z^(l) - Z*||_F
  std::vector<double> ratios;     // successive residual quotients
  bool geometric_bound_ok = false;
  bool fixed_point_converged = false;
  int fixed_point_iterations = 0;
};

/// Assumption checks only: eigenvalue interval of I - M, lambda_max of the
/// propagator, per-layer weight norms, and the resulting L_f.
TheoremAudit audit_assumptions(const EntangledGraph& g,
                               const std::vector<Matrix>& weights);

/// Iterates f(Z) = sigma(M Z W) from z0. The fixed point Z* is located first
/// by iterating until the map stagnates at machine precision (so late
/// residual ratios are not polluted by the Z* estimate), then the trace of
/// `iters` residuals and ratios is recorded from z0. Ratios are only recorded
/// while the residual stays above 1e-8 * max(1, initial residual). Throws on
/// divergence (norm above 1e12) with the iteration index.
TheoremAudit measure_contraction(const EntangledGraph& g, const Matrix& weight,
                                 const Matrix& z0, int iters);

struct SmoothingBand {
  double eigenvalue = 0.0;
  double energy_in = 0.0;
  double energy_out = 0.0;  // must equal (1 - eigenvalue)^2 * energy_in
};

struct SmoothingReport {
  std::vector<SmoothingBand> bands;
  double total_energy_in = 0.0;
  double total_energy_out = 0.0;
  double max_identity_error = 0.0;  // ||M s - sum (1-l_i) a_i u_i||_inf
  double max_band_error = 0.0;
};

/// Decomposes `signal` in the eigenbasis of I - M and reports per-band energy
/// before and after one application of M.
SmoothingReport smoothing_audit(const EntangledGraph& g, const Matrix& signal);

}  // namespace grace
