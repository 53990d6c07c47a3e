// NEON backend for aarch64. Two float64x2 registers emulate the four-lane
// accumulator layout of the scalar reference; arithmetic is mul-then-add
// (vmulq/vaddq, never vfmaq) so results stay bit-identical across backends.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "grace/kernels.hpp"

namespace grace::kernels {
namespace {

inline double combine_sum(float64x2_t a01, float64x2_t a23, const double* tail,
                          std::size_t rem) {
  double lane[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1),
                    vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1)};
  for (std::size_t r = 0; r < rem; ++r) lane[r] += tail[r];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void add_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2)
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (std::size_t i = n2; i < n; ++i) out[i] = a[i] + b[i];
}

void sub_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2)
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (std::size_t i = n2; i < n; ++i) out[i] = a[i] - b[i];
}

void mul_neon(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (std::size_t i = n2; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_accum_neon(double* out, const double* a, const double* b,
                    std::size_t n) {
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(out + i), prod));
  }
  for (std::size_t i = n2; i < n; ++i) out[i] += a[i] * b[i];
}

void scale_neon(double* out, const double* x, double s, std::size_t n) {
  float64x2_t vs = vdupq_n_f64(s);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vs));
  for (std::size_t i = n2; i < n; ++i) out[i] = x[i] * s;
}

void axpy_neon(double* y, double s, const double* x, std::size_t n) {
  float64x2_t vs = vdupq_n_f64(s);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    float64x2_t prod = vmulq_f64(vs, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (std::size_t i = n2; i < n; ++i) y[i] += s * x[i];
}

void relu_neon(double* out, const double* x, std::size_t n) {
  float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    float64x2_t vx = vld1q_f64(x + i);
    uint64x2_t mask = vcgtq_f64(vx, zero);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(
                           vreinterpretq_u64_f64(vx), mask)));
  }
  for (std::size_t i = n2; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad_accum_neon(double* dx, const double* g, const double* x,
                          std::size_t n) {
  float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    uint64x2_t mask = vcgtq_f64(vld1q_f64(x + i), zero);
    float64x2_t gated = vreinterpretq_f64_u64(
        vandq_u64(vreinterpretq_u64_f64(vld1q_f64(g + i)), mask));
    vst1q_f64(dx + i, vaddq_f64(vld1q_f64(dx + i), gated));
  }
  for (std::size_t i = n2; i < n; ++i) dx[i] += x[i] > 0.0 ? g[i] : 0.0;
}

void threshold_keep_neon(double* out, const double* x, double cutoff,
                         std::size_t n) {
  float64x2_t vc = vdupq_n_f64(cutoff);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    float64x2_t vx = vld1q_f64(x + i);
    uint64x2_t mask = vcgtq_f64(vx, vc);
    vst1q_f64(out + i, vreinterpretq_f64_u64(vandq_u64(
                           vreinterpretq_u64_f64(vx), mask)));
  }
  for (std::size_t i = n2; i < n; ++i) out[i] = x[i] > cutoff ? x[i] : 0.0;
}

void threshold_grad_accum_neon(double* dx, const double* g, const double* x,
                               double cutoff, std::size_t n) {
  float64x2_t vc = vdupq_n_f64(cutoff);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    uint64x2_t mask = vcgtq_f64(vld1q_f64(x + i), vc);
    float64x2_t gated = vreinterpretq_f64_u64(
        vandq_u64(vreinterpretq_u64_f64(vld1q_f64(g + i)), mask));
    vst1q_f64(dx + i, vaddq_f64(vld1q_f64(dx + i), gated));
  }
  for (std::size_t i = n2; i < n; ++i) dx[i] += x[i] > cutoff ? g[i] : 0.0;
}

double sum_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x + i));
    a23 = vaddq_f64(a23, vld1q_f64(x + i + 2));
  }
  return combine_sum(a01, a23, x + n4, n - n4);
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    a23 = vaddq_f64(a23,
                    vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double lane[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1),
                    vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1)};
  for (std::size_t i = n4; i < n; ++i) lane[i - n4] += x[i] * y[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double abs_sum_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vaddq_f64(a01, vabsq_f64(vld1q_f64(x + i)));
    a23 = vaddq_f64(a23, vabsq_f64(vld1q_f64(x + i + 2)));
  }
  double lane[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1),
                    vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1)};
  for (std::size_t i = n4; i < n; ++i) lane[i - n4] += std::fabs(x[i]);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    a01 = vmaxq_f64(a01, vabsq_f64(vld1q_f64(x + i)));
    a23 = vmaxq_f64(a23, vabsq_f64(vld1q_f64(x + i + 2)));
  }
  double lane[4] = {vgetq_lane_f64(a01, 0), vgetq_lane_f64(a01, 1),
                    vgetq_lane_f64(a23, 0), vgetq_lane_f64(a23, 1)};
  for (std::size_t i = n4; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > lane[i - n4]) lane[i - n4] = v;
  }
  double m01 = lane[0] > lane[1] ? lane[0] : lane[1];
  double m23 = lane[2] > lane[3] ? lane[2] : lane[3];
  return m01 > m23 ? m01 : m23;
}

void plane_rot_neon(double* x, double* y, double c, double s, std::size_t n) {
  float64x2_t vc = vdupq_n_f64(c);
  float64x2_t vs = vdupq_n_f64(s);
  std::size_t n2 = n - n % 2;
  for (std::size_t i = 0; i < n2; i += 2) {
    float64x2_t vx = vld1q_f64(x + i);
    float64x2_t vy = vld1q_f64(y + i);
    float64x2_t nx = vsubq_f64(vmulq_f64(vc, vx), vmulq_f64(vs, vy));
    float64x2_t ny = vaddq_f64(vmulq_f64(vs, vx), vmulq_f64(vc, vy));
    vst1q_f64(x + i, nx);
    vst1q_f64(y + i, ny);
  }
  for (std::size_t i = n2; i < n; ++i) {
    double xi = c * x[i] - s * y[i];
    double yi = s * x[i] + c * y[i];
    x[i] = xi;
    y[i] = yi;
  }
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t = {
      add_neon,
      sub_neon,
      mul_neon,
      mul_accum_neon,
      scale_neon,
      axpy_neon,
      relu_neon,
      relu_grad_accum_neon,
      threshold_keep_neon,
      threshold_grad_accum_neon,
      sum_neon,
      dot_neon,
      abs_sum_neon,
      max_abs_neon,
      plane_rot_neon,
  };
  return t;
}

}  // namespace grace::kernels

#endif  // aarch64
