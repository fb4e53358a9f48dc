#pragma once

#include <utility>

#include "nnac/linalg.hpp"

namespace nnac::ann {

/// Central-difference Jacobian of f at x: column i is
/// (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
template <typename F>
Matrix finite_diff_jacobian(F&& f, const Vector& x, double eps) {
  Vector probe = x;
  Matrix jac;
  for (Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + eps;
    const Vector plus = f(probe);
    probe(i) = x(i) - eps;
    const Vector minus = f(probe);
    probe(i) = x(i);
    if (i == 0) jac.resize(plus.size(), x.size());
    jac.col(i) = (plus - minus) / (2.0 * eps);
  }
  return jac;
}

}  // namespace nnac::ann
