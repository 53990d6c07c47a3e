#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "grace/eigen.hpp"
#include "grace/grad_check.hpp"
#include "grace/matrix.hpp"
#include "grace/rng.hpp"
#include "grace/tape.hpp"

using namespace grace;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

Matrix random_symmetric(int n, std::uint64_t seed) {
  Matrix a = random_matrix(n, n, seed);
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// independent oracle: naive triple loop, plain left-to-right accumulation
Matrix matmul_oracle(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (int t = 0; t < a.cols(); ++t) acc += a(i, t) * b(t, j);
      c(i, j) = acc;
    }
  return c;
}

// independent oracle: power iteration on M^T M
double spectral_norm_oracle(const Matrix& m, int iters = 2000) {
  Matrix gram = matmul_tn(m, m);
  Matrix v = random_matrix(gram.rows(), 1, 7);
  for (int it = 0; it < iters; ++it) {
    Matrix next = matmul(gram, v);
    double norm = frobenius_norm(next);
    if (norm == 0.0) return 0.0;
    v = scale(next, 1.0 / norm);
  }
  Matrix gv = matmul(gram, v);
  return std::sqrt(frobenius_norm(gv) / frobenius_norm(v));
}

}  // namespace

TEST_CASE("matmul identity and small cases") {
  Matrix i2 = Matrix::identity(2);
  Matrix v = Matrix::from_rows({{3}, {4}});
  CHECK(matmul(i2, v) == v);

  Matrix a = Matrix::from_rows({{1, 2}});
  Matrix b = Matrix::from_rows({{3}, {4}});
  Matrix c = matmul(a, b);
  CHECK(c.rows() == 1);
  CHECK(c(0, 0) == 11.0);
}

TEST_CASE("matmul matches the triple-loop oracle") {
  Matrix a = random_matrix(5, 4, 11);
  Matrix b = random_matrix(4, 3, 12);
  Matrix got = matmul(a, b);
  Matrix want = matmul_oracle(a, b);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::fabs(got(i, j) - want(i, j)) <= 1e-12);
}

TEST_CASE("matmul rejects mismatched shapes with both reported") {
  Matrix a(2, 3), b(2, 3);
  CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"),
                       std::invalid_argument);
}

TEST_CASE("transpose variants agree with explicit transposition") {
  Matrix a = random_matrix(4, 6, 21);
  Matrix b = random_matrix(5, 6, 22);
  Matrix c = random_matrix(4, 3, 23);
  // matmul_nt accumulates dot-style, matmul axpy-style; equal up to rounding
  CHECK(max_abs(sub(matmul_nt(a, b), matmul(a, transpose(b)))) <= 1e-13);
  CHECK(matmul_tn(a, c) == matmul(transpose(a), c));
}

TEST_CASE("sym_eigen diagonal and analytic 2x2") {
  EigenResult d = sym_eigen(Matrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(d.eigenvalues[0] == doctest::Approx(2).epsilon(1e-12));
  CHECK(d.eigenvalues[1] == doctest::Approx(3).epsilon(1e-12));

  EigenResult x = sym_eigen(Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(x.eigenvalues[0] == doctest::Approx(-1).epsilon(1e-12));
  CHECK(x.eigenvalues[1] == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("sym_eigen reconstruction, residual, orthonormality, trace") {
  for (std::uint64_t seed : {31, 32, 33}) {
    Matrix m = random_symmetric(6, seed);
    EigenResult eig = sym_eigen(m);

    for (int i = 1; i < 6; ++i)
      CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i - 1]);

    // U Lambda U^T == M
    Matrix lambda(6, 6);
    for (int i = 0; i < 6; ++i) lambda(i, i) = eig.eigenvalues[i];
    Matrix recon =
        matmul(matmul(eig.eigenvectors, lambda), transpose(eig.eigenvectors));
    CHECK(frobenius_norm(sub(recon, m)) <= 1e-8);

    // residual ||M v - lambda v||_inf per pair
    const double res_tol = 1e-8 * std::max(1.0, max_abs(m));
    for (int i = 0; i < 6; ++i) {
      Matrix v(6, 1);
      for (int kk = 0; kk < 6; ++kk) v(kk, 0) = eig.eigenvectors(kk, i);
      Matrix r = sub(matmul(m, v), scale(v, eig.eigenvalues[i]));
      CHECK(max_abs(r) <= res_tol);
    }

    // V^T V == I
    Matrix vtv = matmul_tn(eig.eigenvectors, eig.eigenvectors);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        CHECK(std::fabs(vtv(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-8);

    double trace = 0.0, eig_sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      trace += m(i, i);
      eig_sum += eig.eigenvalues[i];
    }
    CHECK(std::fabs(trace - eig_sum) <= 1e-8 * std::max(1.0, frobenius_norm(m)));
  }
}

TEST_CASE("sym_eigen input contract") {
  CHECK_THROWS_AS(sym_eigen(Matrix(2, 3)), std::invalid_argument);
  Matrix skew = Matrix::from_rows({{0, 1}, {-1, 0}});
  CHECK_THROWS_AS(sym_eigen(skew), std::invalid_argument);
}

TEST_CASE("spectral_norm diagonal, zero, and power-iteration oracle") {
  CHECK(spectral_norm(Matrix::from_rows({{1, 0}, {0, -5}})) ==
        doctest::Approx(5).epsilon(1e-10));
  CHECK(spectral_norm(Matrix(3, 4)) == 0.0);

  Matrix m = random_matrix(4, 7, 41);
  double got = spectral_norm(m);
  double want = spectral_norm_oracle(m);
  CHECK(std::fabs(got - want) <= 1e-6 * want);
}

TEST_CASE("grad_check on linear and l1 functions") {
  ScalarFunction linear{
      [](const Matrix& x) { return sum(x); },
      [](const Matrix& x) { return Matrix::constant(x.rows(), x.cols(), 1.0); },
  };
  Matrix x = random_matrix(3, 4, 51);
  CHECK(grad_check(linear, x, 1e-5) <= 1e-9);

  ScalarFunction l1{
      [](const Matrix& x) { return abs_sum(x); },
      [](const Matrix& x) {
        Matrix g(x.rows(), x.cols());
        for (std::size_t i = 0; i < x.size(); ++i)
          g.data()[i] = x.data()[i] > 0 ? 1.0 : (x.data()[i] < 0 ? -1.0 : 0.0);
        return g;
      },
  };
  // keep every entry well away from the kink
  Matrix far(3, 3);
  Rng rng(52);
  for (std::size_t i = 0; i < far.size(); ++i) {
    double v = rng.normal();
    far.data()[i] = (v >= 0 ? 1.0 : -1.0) * (0.5 + std::fabs(v));
  }
  CHECK(grad_check(l1, far, 1e-5) <= 1e-6);
}

TEST_CASE("grad_check rejects h outside its window") {
  ScalarFunction f{[](const Matrix& x) { return sum(x); },
                   [](const Matrix& x) {
                     return Matrix::constant(x.rows(), x.cols(), 1.0);
                   }};
  CHECK_THROWS_AS(grad_check(f, Matrix(2, 2), 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(grad_check(f, Matrix(2, 2), 1e-2), std::invalid_argument);
}

TEST_CASE("deterministic outputs on repeated calls") {
  Matrix a = random_matrix(8, 8, 61);
  Matrix b = random_matrix(8, 8, 62);
  CHECK(matmul(a, b) == matmul(a, b));
  EigenResult e1 = sym_eigen(random_symmetric(8, 63));
  EigenResult e2 = sym_eigen(random_symmetric(8, 63));
  CHECK(e1.eigenvalues == e2.eigenvalues);
  CHECK(e1.eigenvectors == e2.eigenvectors);
}
