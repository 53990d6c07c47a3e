#include <cmath>
#include <vector>

#include "doctest.h"

#include "grace/kernels.hpp"
#include "grace/rng.hpp"

using namespace grace;
namespace k = grace::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() * (1.0 + 10.0 * rng.uniform());
  return v;
}

// every size with an awkward tail plus a few large ones
const std::vector<std::size_t> kSizes = {0,  1,  2,  3,  4,   5,   7,  8,
                                         15, 16, 17, 31, 64,  67,  255,
                                         256, 1000};

}  // namespace

TEST_CASE("vector backends match the scalar reference bit for bit") {
  const k::KernelTable& ref = k::table_for(k::Backend::scalar);

  for (k::Backend b : {k::Backend::avx2, k::Backend::neon}) {
    if (!k::backend_available(b)) continue;
    INFO("backend ", k::backend_name(b));
    const k::KernelTable& vec = k::table_for(b);

    for (std::size_t n : kSizes) {
      auto x = random_vec(n, 100 + n);
      auto y = random_vec(n, 200 + n);
      std::vector<double> out_ref(n, 0.5), out_vec(n, 0.5);

      vec.add(out_vec.data(), x.data(), y.data(), n);
      ref.add(out_ref.data(), x.data(), y.data(), n);
      CHECK(out_ref == out_vec);

      vec.sub(out_vec.data(), x.data(), y.data(), n);
      ref.sub(out_ref.data(), x.data(), y.data(), n);
      CHECK(out_ref == out_vec);

      vec.mul(out_vec.data(), x.data(), y.data(), n);
      ref.mul(out_ref.data(), x.data(), y.data(), n);
      CHECK(out_ref == out_vec);

      out_ref.assign(n, 0.25);
      out_vec.assign(n, 0.25);
      vec.mul_accum(out_vec.data(), x.data(), y.data(), n);
      ref.mul_accum(out_ref.data(), x.data(), y.data(), n);
      CHECK(out_ref == out_vec);

      vec.scale(out_vec.data(), x.data(), -1.7, n);
      ref.scale(out_ref.data(), x.data(), -1.7, n);
      CHECK(out_ref == out_vec);

      out_ref = y;
      out_vec = y;
      vec.axpy(out_vec.data(), 0.3, x.data(), n);
      ref.axpy(out_ref.data(), 0.3, x.data(), n);
      CHECK(out_ref == out_vec);

      vec.relu(out_vec.data(), x.data(), n);
      ref.relu(out_ref.data(), x.data(), n);
      CHECK(out_ref == out_vec);

      out_ref.assign(n, 0.125);
      out_vec.assign(n, 0.125);
      vec.relu_grad_accum(out_vec.data(), y.data(), x.data(), n);
      ref.relu_grad_accum(out_ref.data(), y.data(), x.data(), n);
      CHECK(out_ref == out_vec);

      vec.threshold_keep(out_vec.data(), x.data(), 0.4, n);
      ref.threshold_keep(out_ref.data(), x.data(), 0.4, n);
      CHECK(out_ref == out_vec);

      out_ref.assign(n, -0.5);
      out_vec.assign(n, -0.5);
      vec.threshold_grad_accum(out_vec.data(), y.data(), x.data(), 0.4, n);
      ref.threshold_grad_accum(out_ref.data(), y.data(), x.data(), 0.4, n);
      CHECK(out_ref == out_vec);

      CHECK(vec.sum(x.data(), n) == ref.sum(x.data(), n));
      CHECK(vec.dot(x.data(), y.data(), n) == ref.dot(x.data(), y.data(), n));
      CHECK(vec.abs_sum(x.data(), n) == ref.abs_sum(x.data(), n));
      CHECK(vec.max_abs(x.data(), n) == ref.max_abs(x.data(), n));

      auto xr = x, yr = y, xv = x, yv = y;
      ref.plane_rot(xr.data(), yr.data(), 0.8, 0.6, n);
      vec.plane_rot(xv.data(), yv.data(), 0.8, 0.6, n);
      CHECK(xr == xv);
      CHECK(yr == yv);
    }
  }
}

TEST_CASE("reduction follows the documented four-lane order") {
  // catastrophic-cancellation values make any reordering visible
  for (std::size_t n : {5ul, 8ul, 11ul, 26ul}) {
    std::vector<double> x(n);
    Rng rng(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = (i % 2 ? 1e16 : -1e16) + rng.normal();

    double lane[4] = {0, 0, 0, 0};
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4)
      for (int l = 0; l < 4; ++l) lane[l] += x[i + l];
    for (std::size_t i = n4; i < n; ++i) lane[i - n4] += x[i];
    const double expected = (lane[0] + lane[1]) + (lane[2] + lane[3]);

    CHECK(k::sum(x.data(), n) == expected);
    CHECK(k::table_for(k::Backend::scalar).sum(x.data(), n) == expected);
  }
}

TEST_CASE("active backend reports a valid name") {
  CHECK(k::backend_available(k::active_backend()));
}
