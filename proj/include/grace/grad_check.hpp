#pragma once

#include <functional>

#include "grace/matrix.hpp"

namespace grace {

/// A scalar function of one matrix argument together with its analytic
/// gradient (normally produced by a Tape backward pass).
struct ScalarFunction {
  std::function<double(const Matrix&)> value;
  std::function<Matrix(const Matrix&)> gradient;
};

// Central-difference check of f.gradient against (f(x+h)-f(x-h))/(2h) per
// entry. Returns the maximum relative error with denominator
// max(|analytic|, |numeric|, 1e-8). h must lie in [1e-7, 1e-3]; a non-finite
// function value is reported with the offending entry index.
double grad_check(const ScalarFunction& f, const Matrix& x, double h);

}  // namespace grace
