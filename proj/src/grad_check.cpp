#include "grace/grad_check.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace grace {

double grad_check(const ScalarFunction& f, const Matrix& x, double h) {
  if (!(h >= 1e-7 && h <= 1e-3))
    throw std::invalid_argument("grad_check: h must lie in [1e-7, 1e-3]");

  Matrix analytic = f.gradient(x);
  if (!analytic.same_shape(x))
    throw std::invalid_argument("grad_check: gradient shape " +
                                analytic.shape_str() + " does not match x " +
                                x.shape_str());

  double worst = 0.0;
  Matrix probe = x;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      const double orig = probe(i, j);
      probe(i, j) = orig + h;
      const double fp = f.value(probe);
      probe(i, j) = orig - h;
      const double fm = f.value(probe);
      probe(i, j) = orig;
      if (!std::isfinite(fp) || !std::isfinite(fm))
        throw std::runtime_error("grad_check: non-finite value at entry (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ")");
      const double numeric = (fp - fm) / (2.0 * h);
      const double ana = analytic(i, j);
      const double denom =
          std::max({std::fabs(ana), std::fabs(numeric), 1e-8});
      const double rel = std::fabs(numeric - ana) / denom;
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

}  // namespace grace
