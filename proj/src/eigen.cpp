#include "grace/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "grace/kernels.hpp"
#include "grace/numformat.hpp"

namespace grace {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double acc = 0.0;
  for (int p = 0; p < a.rows(); ++p)
    for (int q = p + 1; q < a.cols(); ++q) acc += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(acc);
}

}  // namespace

EigenResult sym_eigen(const Matrix& m, double tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("sym_eigen: matrix must be square, got " +
                                m.shape_str());
  if (m.rows() == 0) throw std::invalid_argument("sym_eigen: empty matrix");

  const int n = m.rows();
  const double scale = std::max(1.0, max_abs(m));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::fabs(m(i, j) - m(j, i)) > 1e-9 * scale)
        throw std::invalid_argument(
            "sym_eigen: input asymmetric beyond 1e-9 at (" +
            std::to_string(i) + "," + std::to_string(j) + ")");

  // Work on the symmetrized copy; accumulate rotations in W = V^T whose rows
  // stay contiguous for the plane-rotation kernel.
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Matrix w = Matrix::identity(n);

  const double stop = tol * std::max(1.0, frobenius_norm(a));
  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off > stop && sweep < kMaxSweeps) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(p, k) = a(k, p);
          a(k, q) = s * akp + c * akq;
          a(q, k) = a(k, q);
        }
        kernels::plane_rot(w.row(p), w.row(q), c, s,
                           static_cast<std::size_t>(n));
      }
    }
    off = off_diagonal_norm(a);
    ++sweep;
  }
  if (off > stop)
    throw std::runtime_error(
        "sym_eigen: no convergence in " + std::to_string(kMaxSweeps) +
        " sweeps, off-diagonal residual " + fmt_double(off));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });

  EigenResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    result.eigenvalues[i] = a(order[i], order[i]);
    for (int k = 0; k < n; ++k) result.eigenvectors(k, i) = w(order[i], k);
  }
  return result;
}

double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  // Gram matrix on the smaller side keeps the eigensolve cheap.
  Matrix gram =
      m.rows() <= m.cols() ? matmul_nt(m, m) : matmul_tn(m, m);
  EigenResult eig = sym_eigen(gram);
  double lambda = eig.eigenvalues.back();
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace grace
