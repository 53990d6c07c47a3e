#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "grace/convergence.hpp"
#include "grace/eigen.hpp"
#include "grace/entanglement.hpp"
#include "grace/rng.hpp"

using namespace grace;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

EntangledGraph random_graph(int nodes, std::uint64_t seed) {
  Matrix x = relu(random_matrix(nodes, 3, seed));
  return build_graph(x, 0.5);
}

Matrix scaled_to_norm(Matrix w, double target) {
  double norm = spectral_norm(w);
  return scale(w, target / norm);
}

EntangledGraph scalar_graph() {
  // single node, no self-weight: propagator [1]
  return build_propagator(Matrix(1, 1));
}

}  // namespace

TEST_CASE("assumption audit on the scalar case") {
  EntangledGraph g = scalar_graph();
  TheoremAudit audit = audit_assumptions(g, {Matrix::from_rows({{0.5}})});
  CHECK(audit.lambda_max_propagator == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(audit.weight_bound == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(audit.lipschitz_sigma == 1.0);
  CHECK(audit.lipschitz_total == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(audit.lipschitz_loose == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(audit.contractive);
  CHECK(audit.interval_ok);
}

TEST_CASE("weight scaling scales the Lipschitz bound linearly") {
  EntangledGraph g = random_graph(6, 3);
  Matrix w = random_matrix(4, 4, 5);
  TheoremAudit base = audit_assumptions(g, {w});
  TheoremAudit scaled = audit_assumptions(g, {scale(w, 10.0)});
  CHECK(scaled.weight_bound ==
        doctest::Approx(10.0 * base.weight_bound).epsilon(1e-9));
  CHECK(scaled.lipschitz_total ==
        doctest::Approx(10.0 * base.lipschitz_total).epsilon(1e-9));
}

TEST_CASE("propagator spectra stay within the assumed interval") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EntangledGraph g = random_graph(6 + seed % 5, 100 + seed);
    TheoremAudit audit = audit_assumptions(g, {Matrix::identity(3)});
    CHECK(audit.lambda_max_propagator <= 1.0 + 1e-8);
    CHECK(audit.interval_ok);
  }
}

TEST_CASE("scalar contraction: ratios are exactly 0.5") {
  EntangledGraph g = scalar_graph();
  TheoremAudit audit = measure_contraction(g, Matrix::from_rows({{0.5}}),
                                           Matrix::from_rows({{1.0}}), 500);
  CHECK(audit.contractive);
  CHECK(audit.fixed_point_converged);
  REQUIRE(!audit.ratios.empty());
  for (double r : audit.ratios) CHECK(std::fabs(r - 0.5) <= 1e-12);
  CHECK(audit.geometric_bound_ok);
  // residual reaches 1e-10 well within the trace
  double min_res = audit.residuals.front();
  for (double r : audit.residuals) min_res = std::min(min_res, r);
  CHECK(min_res <= 1e-10);
}

TEST_CASE("boundary case L_f = 1 is non-contractive with constant iterates") {
  EntangledGraph g = scalar_graph();
  TheoremAudit audit = measure_contraction(g, Matrix::from_rows({{1.0}}),
                                           Matrix::from_rows({{1.0}}), 50);
  CHECK_FALSE(audit.contractive);
  CHECK(audit.fixed_point_converged);  // f(z) = z immediately
  CHECK(audit.residuals.front() == 0.0);
  CHECK(audit.ratios.empty());
}

TEST_CASE("random contraction stays under the Lipschitz bound") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EntangledGraph g = random_graph(8, 200 + seed);
    Matrix w = scaled_to_norm(random_matrix(4, 4, 300 + seed), 0.8);
    Matrix z0 = random_matrix(8, 4, 400 + seed);
    TheoremAudit audit = measure_contraction(g, w, z0, 200);
    CHECK(audit.lipschitz_total <= 0.8 * (1.0 + 1e-8) + 1e-12);
    CHECK(audit.contractive);
    for (double r : audit.ratios) CHECK(r <= audit.lipschitz_total + 1e-6);
    CHECK(audit.geometric_bound_ok);
  }
}

TEST_CASE("residuals are monotone non-increasing under contraction") {
  EntangledGraph g = random_graph(7, 500);
  Matrix w = scaled_to_norm(random_matrix(3, 3, 501), 0.7);
  Matrix z0 = random_matrix(7, 3, 502);
  TheoremAudit audit = measure_contraction(g, w, z0, 100);
  for (std::size_t i = 1; i < audit.residuals.size(); ++i)
    CHECK(audit.residuals[i] <= audit.residuals[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("contraction audits are deterministic") {
  EntangledGraph g = random_graph(6, 600);
  Matrix w = scaled_to_norm(random_matrix(3, 3, 601), 0.6);
  Matrix z0 = random_matrix(6, 3, 602);
  TheoremAudit a = measure_contraction(g, w, z0, 80);
  TheoremAudit b = measure_contraction(g, w, z0, 80);
  CHECK(a.ratios == b.ratios);
  CHECK(a.residuals == b.residuals);
}

TEST_CASE("divergent iteration is reported with the iteration index") {
  EntangledGraph g = scalar_graph();
  CHECK_THROWS_WITH_AS(
      measure_contraction(g, Matrix::from_rows({{4.0}}),
                          Matrix::from_rows({{1.0}}), 50),
      doctest::Contains("iteration"), std::runtime_error);
}

TEST_CASE("smoothing audit: pure eigenmodes") {
  EntangledGraph g = random_graph(8, 700);
  EigenResult eig = sym_eigen(g.normalized_laplacian());
  const int n = g.node_count();

  // smoothest mode: energy preserved with gain (1 - lambda_min)^2 ~ 1
  Matrix u0(n, 1);
  for (int k = 0; k < n; ++k) u0(k, 0) = eig.eigenvectors(k, 0);
  SmoothingReport r0 = smoothing_audit(g, u0);
  CHECK(r0.max_identity_error <= 1e-8);
  CHECK(r0.total_energy_out ==
        doctest::Approx(std::pow(1.0 - eig.eigenvalues[0], 2))
            .epsilon(1e-8));

  // a mode at lambda = 1 is annihilated, if the spectrum has one
  for (int i = 0; i < n; ++i) {
    if (std::fabs(eig.eigenvalues[i] - 1.0) > 1e-12) continue;
    Matrix u(n, 1);
    for (int k = 0; k < n; ++k) u(k, 0) = eig.eigenvectors(k, i);
    SmoothingReport r = smoothing_audit(g, u);
    CHECK(r.total_energy_out <= 1e-12);
  }
}

TEST_CASE("smoothing audit: mixed signal satisfies the band identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EntangledGraph g = random_graph(8, 800 + seed);
    Matrix signal = random_matrix(8, 1, 900 + seed);
    SmoothingReport r = smoothing_audit(g, signal);
    CHECK(r.max_identity_error <= 1e-8);
    CHECK(r.max_band_error <= 1e-8);

    // total output energy matches the direct computation
    Matrix ms = matmul(g.propagator, signal);
    double direct = 0.0;
    for (int k = 0; k < 8; ++k) direct += ms(k, 0) * ms(k, 0);
    CHECK(r.total_energy_out == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("smoothing audit rejects bad signals") {
  EntangledGraph g = random_graph(5, 1000);
  CHECK_THROWS_AS(smoothing_audit(g, Matrix(4, 1)), std::invalid_argument);
  Matrix nan_signal(5, 1);
  nan_signal(0, 0) = std::nan("");
  CHECK_THROWS_AS(smoothing_audit(g, nan_signal), std::invalid_argument);
}
