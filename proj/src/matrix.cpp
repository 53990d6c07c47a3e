#include "grace/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "grace/kernels.hpp"

namespace grace {

namespace {

[[noreturn]] void shape_error(const std::string& op, const Matrix& a,
                              const Matrix& b) {
  throw std::invalid_argument(op + ": incompatible shapes " + a.shape_str() +
                              " and " + b.shape_str());
}

void require_same_shape(const std::string& op, const Matrix& a,
                        const Matrix& b) {
  if (!a.same_shape(b)) shape_error(op, a, b);
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, 0.0) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("Matrix: negative dimensions");
}

Matrix::Matrix(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("Matrix: data length " +
                                std::to_string(data_.size()) +
                                " does not match shape " + shape_str());
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::constant(int rows, int cols, double value) {
  Matrix m(rows, cols);
  for (double& v : m.data_) v = value;
  return m;
}

Matrix Matrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw std::invalid_argument("from_rows: ragged rows");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  matmul_accum(out, a, b);
  return out;
}

void matmul_accum(Matrix& out, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  if (out.rows() != a.rows() || out.cols() != b.cols())
    shape_error("matmul output", out, b);
  const std::size_t n = static_cast<std::size_t>(b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    double* ci = out.row(i);
    for (int t = 0; t < a.cols(); ++t)
      kernels::axpy(ci, a(i, t), b.row(t), n);
  }
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  Matrix out(a.rows(), b.rows());
  matmul_nt_accum(out, a, b);
  return out;
}

void matmul_nt_accum(Matrix& out, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  if (out.rows() != a.rows() || out.cols() != b.rows())
    shape_error("matmul_nt output", out, b);
  const std::size_t n = static_cast<std::size_t>(a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j)
      out(i, j) += kernels::dot(a.row(i), b.row(j), n);
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  matmul_tn_accum(out, a, b);
  return out;
}

void matmul_tn_accum(Matrix& out, const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  if (out.rows() != a.cols() || out.cols() != b.cols())
    shape_error("matmul_tn output", out, b);
  const std::size_t n = static_cast<std::size_t>(b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int t = 0; t < a.cols(); ++t)
      kernels::axpy(out.row(t), a(i, t), b.row(i), n);
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape("add", a, b);
  Matrix out(a.rows(), a.cols());
  kernels::add(out.data(), a.data(), b.data(), a.size());
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape("sub", a, b);
  Matrix out(a.rows(), a.cols());
  kernels::sub(out.data(), a.data(), b.data(), a.size());
  return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape("hadamard", a, b);
  Matrix out(a.rows(), a.cols());
  kernels::mul(out.data(), a.data(), b.data(), a.size());
  return out;
}

Matrix scale(const Matrix& m, double s) {
  Matrix out(m.rows(), m.cols());
  kernels::scale(out.data(), m.data(), s, m.size());
  return out;
}

Matrix relu(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  kernels::relu(out.data(), m.data(), m.size());
  return out;
}

void add_inplace(Matrix& acc, const Matrix& m) {
  require_same_shape("add_inplace", acc, m);
  kernels::axpy(acc.data(), 1.0, m.data(), m.size());
}

double sum(const Matrix& m) { return kernels::sum(m.data(), m.size()); }

double abs_sum(const Matrix& m) { return kernels::abs_sum(m.data(), m.size()); }

double mean(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return sum(m) / static_cast<double>(m.size());
}

double max_abs(const Matrix& m) { return kernels::max_abs(m.data(), m.size()); }

double frobenius_norm(const Matrix& m) {
  return std::sqrt(kernels::dot(m.data(), m.data(), m.size()));
}

bool all_finite(const Matrix& m) {
  for (double v : m.values())
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace grace
