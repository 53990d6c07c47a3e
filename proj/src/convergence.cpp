#include "grace/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "grace/eigen.hpp"
#include "grace/kernels.hpp"

namespace grace {

namespace {

constexpr double kDivergenceLimit = 1e12;

Matrix iterate_layer(const EntangledGraph& g, const Matrix& z,
                     const Matrix& w) {
  return relu(matmul(matmul(g.propagator, z), w));
}

}  // namespace

TheoremAudit audit_assumptions(const EntangledGraph& g,
                               const std::vector<Matrix>& weights) {
  if (weights.empty())
    throw std::invalid_argument("audit_assumptions: no weights given");

  TheoremAudit audit;
  EigenResult eig = sym_eigen(g.propagator);
  audit.lambda_max_propagator =
      std::max(std::fabs(eig.eigenvalues.front()),
               std::fabs(eig.eigenvalues.back()));
  audit.lnorm_min = 1.0 - eig.eigenvalues.back();
  audit.lnorm_max = 1.0 - eig.eigenvalues.front();
  audit.interval_ok =
      audit.lnorm_min >= -1e-8 && audit.lnorm_max <= 2.0 + 1e-8;

  audit.weight_bound = 0.0;
  for (const Matrix& w : weights)
    audit.weight_bound = std::max(audit.weight_bound, spectral_norm(w));

  audit.lipschitz_sigma = 1.0;
  audit.lipschitz_total =
      audit.lipschitz_sigma * audit.lambda_max_propagator * audit.weight_bound;
  audit.lipschitz_loose = audit.lipschitz_sigma * 2.0 * audit.weight_bound;
  audit.contractive = audit.lipschitz_total < 1.0;
  return audit;
}

TheoremAudit measure_contraction(const EntangledGraph& g, const Matrix& weight,
                                 const Matrix& z0, int iters) {
  if (weight.rows() != weight.cols())
    throw std::invalid_argument(
        "measure_contraction: weight must be square for iteration, got " +
        weight.shape_str());
  if (z0.rows() != g.node_count() || z0.cols() != weight.rows())
    throw std::invalid_argument("measure_contraction: z0 shape " +
                                z0.shape_str() + " does not fit graph/weight");
  if (iters < 1)
    throw std::invalid_argument("measure_contraction: iters must be >= 1");

  TheoremAudit audit = audit_assumptions(g, {weight});

  // Locate the fixed point: iterate until the map stagnates bitwise (or a
  // generous cap). Stagnating at machine precision keeps the Z* estimation
  // error far below the ratio floor used for the trace.
  const int zstar_cap = std::max(20000, 10 * iters);
  Matrix z = z0;
  bool stagnated = false;
  double last_diff = 0.0;
  int used = 0;
  for (; used < zstar_cap; ++used) {
    Matrix next = iterate_layer(g, z, weight);
    if (frobenius_norm(next) > kDivergenceLimit)
      throw std::runtime_error("measure_contraction: divergence at iteration " +
                               std::to_string(used));
    last_diff = frobenius_norm(sub(next, z));
    z = std::move(next);
    if (last_diff == 0.0) {
      stagnated = true;
      break;
    }
  }
  const Matrix z_star = z;
  audit.fixed_point_converged = stagnated || last_diff <= 1e-12;
  audit.fixed_point_iterations = used;

  // Residual and ratio trace from z0 against the located fixed point.
  z = z0;
  double residual = frobenius_norm(sub(z, z_star));
  const double ratio_floor = 1e-8 * std::max(1.0, residual);
  audit.residuals.push_back(residual);
  for (int l = 0; l < iters && residual > 0.0; ++l) {
    z = iterate_layer(g, z, weight);
    const double next_residual = frobenius_norm(sub(z, z_star));
    audit.residuals.push_back(next_residual);
    if (residual >= ratio_floor) audit.ratios.push_back(next_residual / residual);
    residual = next_residual;
  }

  audit.geometric_bound_ok = true;
  if (audit.contractive) {
    const double d0 = audit.residuals.front();
    double envelope = d0 * (1.0 + 1e-6);
    for (double r : audit.residuals) {
      if (r > envelope) {
        audit.geometric_bound_ok = false;
        break;
      }
      envelope *= audit.lipschitz_total;
      envelope += d0 * 1e-12;  // absolute slack once the envelope underflows
    }
  }
  return audit;
}

SmoothingReport smoothing_audit(const EntangledGraph& g,
                                const Matrix& signal) {
  const int n = g.node_count();
  if (signal.rows() != n || signal.cols() != 1)
    throw std::invalid_argument("smoothing_audit: signal must be " +
                                std::to_string(n) + "x1, got " +
                                signal.shape_str());
  if (!all_finite(signal))
    throw std::invalid_argument("smoothing_audit: signal must be finite");

  EigenResult eig = sym_eigen(g.normalized_laplacian());
  Matrix smoothed = matmul(g.propagator, signal);

  SmoothingReport report;
  Matrix reconstructed(n, 1);
  for (int i = 0; i < n; ++i) {
    Matrix u(n, 1);
    for (int k = 0; k < n; ++k) u(k, 0) = eig.eigenvectors(k, i);
    const double a = kernels::dot(u.data(), signal.data(), u.size());
    const double lambda = eig.eigenvalues[i];
    const double b = kernels::dot(u.data(), smoothed.data(), u.size());

    SmoothingBand band;
    band.eigenvalue = lambda;
    band.energy_in = a * a;
    band.energy_out = b * b;
    report.bands.push_back(band);
    report.total_energy_in += band.energy_in;
    report.total_energy_out += band.energy_out;

    const double expected = (1.0 - lambda) * (1.0 - lambda) * band.energy_in;
    report.max_band_error =
        std::max(report.max_band_error, std::fabs(band.energy_out - expected));
    for (int k = 0; k < n; ++k)
      reconstructed(k, 0) += (1.0 - lambda) * a * u(k, 0);
  }
  report.max_identity_error = max_abs(sub(smoothed, reconstructed));
  return report;
}

}  // namespace grace
