// Scalar reference backend. This is the semantic definition of every kernel:
// the vector backends must match it bit for bit, so the reductions here use
// the same four-lane blocked accumulation a 256-bit register would.

#include <cmath>
#include <cstddef>

#include "grace/kernels.hpp"

namespace grace::kernels {
namespace {

void add_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_scalar(double* out, const double* a, const double* b,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_accum_scalar(double* out, const double* a, const double* b,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += a[i] * b[i];
}

void scale_scalar(double* out, const double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * s;
}

void axpy_scalar(double* y, double s, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void relu_scalar(double* out, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad_accum_scalar(double* dx, const double* g, const double* x,
                            std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dx[i] += x[i] > 0.0 ? g[i] : 0.0;
}

void threshold_keep_scalar(double* out, const double* x, double cutoff,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > cutoff ? x[i] : 0.0;
}

void threshold_grad_accum_scalar(double* dx, const double* g, const double* x,
                                 double cutoff, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dx[i] += x[i] > cutoff ? g[i] : 0.0;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i];
    acc[1] += x[i + 1];
    acc[2] += x[i + 2];
    acc[3] += x[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += x[i] * y[i];
    acc[1] += x[i + 1] * y[i + 1];
    acc[2] += x[i + 2] * y[i + 2];
    acc[3] += x[i + 3] * y[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += x[i] * y[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double abs_sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    acc[0] += std::fabs(x[i]);
    acc[1] += std::fabs(x[i + 1]);
    acc[2] += std::fabs(x[i + 2]);
    acc[3] += std::fabs(x[i + 3]);
  }
  for (std::size_t i = n4; i < n; ++i) acc[i - n4] += std::fabs(x[i]);
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double max_abs_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int l = 0; l < 4; ++l) {
      double v = std::fabs(x[i + l]);
      if (v > acc[l]) acc[l] = v;
    }
  }
  for (std::size_t i = n4; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > acc[i - n4]) acc[i - n4] = v;
  }
  double m01 = acc[0] > acc[1] ? acc[0] : acc[1];
  double m23 = acc[2] > acc[3] ? acc[2] : acc[3];
  return m01 > m23 ? m01 : m23;
}

void plane_rot_scalar(double* x, double* y, double c, double s,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double xi = c * x[i] - s * y[i];
    double yi = s * x[i] + c * y[i];
    x[i] = xi;
    y[i] = yi;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t = {
      add_scalar,
      sub_scalar,
      mul_scalar,
      mul_accum_scalar,
      scale_scalar,
      axpy_scalar,
      relu_scalar,
      relu_grad_accum_scalar,
      threshold_keep_scalar,
      threshold_grad_accum_scalar,
      sum_scalar,
      dot_scalar,
      abs_sum_scalar,
      max_abs_scalar,
      plane_rot_scalar,
  };
  return t;
}

}  // namespace grace::kernels
