#pragma once

namespace nnac::ampc {

struct ArmijoParams {
  double eta0 = 1.0;
  double shrink = 0.5;
  double c = 1e-4;
  int max_shrinks = 50;

  void validate() const;
};

/// Largest eta in {eta0 shrink^m, m = 0..max_shrinks} with
///   loss(eta) <= loss(0) - c eta slope,
/// or 0 when none qualifies. For steepest descent the slope is ||g||^2; for a
/// general descent direction d it is -g.d. A zero slope accepts eta0.
template <typename Loss>
double armijo_search(Loss&& loss, double slope, const ArmijoParams& p) {
  if (slope == 0.0) return p.eta0;
  const double base = loss(0.0);
  double eta = p.eta0;
  for (int m = 0; m <= p.max_shrinks; ++m) {
    if (loss(eta) <= base - p.c * eta * slope) return eta;
    eta *= p.shrink;
  }
  return 0.0;
}

}  // namespace nnac::ampc
