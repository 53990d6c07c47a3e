// AVX2 backend. Compiled with -mavx2 on x86-64 only; selected at runtime via
// cpuid. Must match the scalar reference bit for bit: reductions keep the
// four-lane accumulator layout and combine lanes as (0+1)+(2+3), and all
// arithmetic is mul-then-add (no FMA).

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "grace/kernels.hpp"

namespace grace::kernels {
namespace {

inline double combine_sum(__m256d acc, const double* tail, std::size_t rem) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t r = 0; r < rem; ++r) lane[r] += tail[r];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void add_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (std::size_t i = n4; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (std::size_t i = n4; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_avx2(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (std::size_t i = n4; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_accum_avx2(double* out, const double* a, const double* b,
                    std::size_t n) {
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] += a[i] * b[i];
}

void scale_avx2(double* out, const double* x, double s, std::size_t n) {
  __m256d vs = _mm256_set1_pd(s);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  for (std::size_t i = n4; i < n; ++i) out[i] = x[i] * s;
}

void axpy_avx2(double* y, double s, const double* x, std::size_t n) {
  __m256d vs = _mm256_set1_pd(s);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d prod = _mm256_mul_pd(vs, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (std::size_t i = n4; i < n; ++i) y[i] += s * x[i];
}

void relu_avx2(double* out, const double* x, std::size_t n) {
  __m256d zero = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
  for (std::size_t i = n4; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad_accum_avx2(double* dx, const double* g, const double* x,
                          std::size_t n) {
  __m256d zero = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GT_OQ);
    __m256d gated = _mm256_and_pd(_mm256_loadu_pd(g + i), mask);
    _mm256_storeu_pd(dx + i, _mm256_add_pd(_mm256_loadu_pd(dx + i), gated));
  }
  for (std::size_t i = n4; i < n; ++i) dx[i] += x[i] > 0.0 ? g[i] : 0.0;
}

void threshold_keep_avx2(double* out, const double* x, double cutoff,
                         std::size_t n) {
  __m256d vc = _mm256_set1_pd(cutoff);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d mask = _mm256_cmp_pd(vx, vc, _CMP_GT_OQ);
    _mm256_storeu_pd(out + i, _mm256_and_pd(vx, mask));
  }
  for (std::size_t i = n4; i < n; ++i) out[i] = x[i] > cutoff ? x[i] : 0.0;
}

void threshold_grad_accum_avx2(double* dx, const double* g, const double* x,
                               double cutoff, std::size_t n) {
  __m256d vc = _mm256_set1_pd(cutoff);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vc, _CMP_GT_OQ);
    __m256d gated = _mm256_and_pd(_mm256_loadu_pd(g + i), mask);
    _mm256_storeu_pd(dx + i, _mm256_add_pd(_mm256_loadu_pd(dx + i), gated));
  }
  for (std::size_t i = n4; i < n; ++i) dx[i] += x[i] > cutoff ? g[i] : 0.0;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return combine_sum(acc, x + n4, n - n4);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d prod =
        _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = n4; i < n; ++i) lane[i - n4] += x[i] * y[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double abs_sum_avx2(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_add_pd(acc,
                        _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = n4; i < n; ++i) lane[i - n4] += std::fabs(x[i]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4)
    acc = _mm256_max_pd(acc,
                        _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = n4; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > lane[i - n4]) lane[i - n4] = v;
  }
  double m01 = lane[0] > lane[1] ? lane[0] : lane[1];
  double m23 = lane[2] > lane[3] ? lane[2] : lane[3];
  return m01 > m23 ? m01 : m23;
}

void plane_rot_avx2(double* x, double* y, double c, double s, std::size_t n) {
  __m256d vc = _mm256_set1_pd(c);
  __m256d vs = _mm256_set1_pd(s);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d nx = _mm256_sub_pd(_mm256_mul_pd(vc, vx), _mm256_mul_pd(vs, vy));
    __m256d ny = _mm256_add_pd(_mm256_mul_pd(vs, vx), _mm256_mul_pd(vc, vy));
    _mm256_storeu_pd(x + i, nx);
    _mm256_storeu_pd(y + i, ny);
  }
  for (std::size_t i = n4; i < n; ++i) {
    double xi = c * x[i] - s * y[i];
    double yi = s * x[i] + c * y[i];
    x[i] = xi;
    y[i] = yi;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t = {
      add_avx2,
      sub_avx2,
      mul_avx2,
      mul_accum_avx2,
      scale_avx2,
      axpy_avx2,
      relu_avx2,
      relu_grad_accum_avx2,
      threshold_keep_avx2,
      threshold_grad_accum_avx2,
      sum_avx2,
      dot_avx2,
      abs_sum_avx2,
      max_abs_avx2,
      plane_rot_avx2,
  };
  return t;
}

}  // namespace grace::kernels

#endif  // x86-64
