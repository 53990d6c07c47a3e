#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace grace {

/// Dense row-major matrix of doubles. Value type: copies copy the buffer.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-initialized
  Matrix(int rows, int cols, std::vector<double> values);

  static Matrix identity(int n);
  static Matrix constant(int rows, int cols, double value);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double* row(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& values() const { return data_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape_str() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Products. The *_accum forms add into an already-shaped output.
Matrix matmul(const Matrix& a, const Matrix& b);           // a * b
Matrix matmul_nt(const Matrix& a, const Matrix& b);        // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);        // a^T * b
void matmul_accum(Matrix& out, const Matrix& a, const Matrix& b);
void matmul_nt_accum(Matrix& out, const Matrix& a, const Matrix& b);
void matmul_tn_accum(Matrix& out, const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double s);
Matrix relu(const Matrix& m);
void add_inplace(Matrix& acc, const Matrix& m);  // acc += m

double sum(const Matrix& m);
double abs_sum(const Matrix& m);
double mean(const Matrix& m);
double max_abs(const Matrix& m);
double frobenius_norm(const Matrix& m);
bool all_finite(const Matrix& m);

}  // namespace grace
