#pragma once

#include <cstddef>
#include <string>

namespace grace::kernels {

// Dense double-precision primitives behind all matrix arithmetic.
//
// Every backend (scalar reference, AVX2, NEON) implements the same table and
// must produce bit-identical results. Elementwise ops are trivially exact;
// reductions follow a pinned four-lane accumulation order so that vector and
// scalar backends agree to the last bit:
//
//   acc[l] accumulates elements with index == l (mod 4) over the blocked
//   prefix, the tail element at offset r past the last full block goes to
//   lane r, and lanes combine as (acc0+acc1) + (acc2+acc3).
//
// No FMA contraction anywhere (the build pins -ffp-contract=off); a*b+c is
// always a rounded multiply followed by a rounded add.
struct KernelTable {
  // out = a + b, out = a - b, out = a .* b, out += a .* b
  void (*add)(double* out, const double* a, const double* b, std::size_t n);
  void (*sub)(double* out, const double* a, const double* b, std::size_t n);
  void (*mul)(double* out, const double* a, const double* b, std::size_t n);
  void (*mul_accum)(double* out, const double* a, const double* b,
                    std::size_t n);
  // out = s * x;  y += s * x
  void (*scale)(double* out, const double* x, double s, std::size_t n);
  void (*axpy)(double* y, double s, const double* x, std::size_t n);
  // out = max(x, 0);  dx += g .* (x > 0)
  void (*relu)(double* out, const double* x, std::size_t n);
  void (*relu_grad_accum)(double* dx, const double* g, const double* x,
                          std::size_t n);
  // out = (x > cutoff) ? x : 0;  dx += g .* (x > cutoff)
  void (*threshold_keep)(double* out, const double* x, double cutoff,
                         std::size_t n);
  void (*threshold_grad_accum)(double* dx, const double* g, const double* x,
                               double cutoff, std::size_t n);
  // reductions (pinned lane order, see above)
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*abs_sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  // (x, y) <- (c*x - s*y, s*x + c*y), used by the Jacobi eigensolver
  void (*plane_rot)(double* x, double* y, double c, double s, std::size_t n);
};

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
bool backend_available(Backend b);

// Active table, selected once at first use: GRACE_KERNELS env override if set
// (scalar|avx2|neon), otherwise the widest available vector backend.
const KernelTable& table();
Backend active_backend();

// Direct access for equivalence tests; throws std::runtime_error if the
// backend is not available on this machine.
const KernelTable& table_for(Backend b);

inline void add(double* out, const double* a, const double* b, std::size_t n) {
  table().add(out, a, b, n);
}
inline void sub(double* out, const double* a, const double* b, std::size_t n) {
  table().sub(out, a, b, n);
}
inline void mul(double* out, const double* a, const double* b, std::size_t n) {
  table().mul(out, a, b, n);
}
inline void mul_accum(double* out, const double* a, const double* b,
                      std::size_t n) {
  table().mul_accum(out, a, b, n);
}
inline void scale(double* out, const double* x, double s, std::size_t n) {
  table().scale(out, x, s, n);
}
inline void axpy(double* y, double s, const double* x, std::size_t n) {
  table().axpy(y, s, x, n);
}
inline void relu(double* out, const double* x, std::size_t n) {
  table().relu(out, x, n);
}
inline void relu_grad_accum(double* dx, const double* g, const double* x,
                            std::size_t n) {
  table().relu_grad_accum(dx, g, x, n);
}
inline void threshold_keep(double* out, const double* x, double cutoff,
                           std::size_t n) {
  table().threshold_keep(out, x, cutoff, n);
}
inline void threshold_grad_accum(double* dx, const double* g, const double* x,
                                 double cutoff, std::size_t n) {
  table().threshold_grad_accum(dx, g, x, cutoff, n);
}
inline double sum(const double* x, std::size_t n) { return table().sum(x, n); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return table().dot(x, y, n);
}
inline double abs_sum(const double* x, std::size_t n) {
  return table().abs_sum(x, n);
}
inline double max_abs(const double* x, std::size_t n) {
  return table().max_abs(x, n);
}
inline void plane_rot(double* x, double* y, double c, double s,
                      std::size_t n) {
  table().plane_rot(x, y, c, s, n);
}

}  // namespace grace::kernels
