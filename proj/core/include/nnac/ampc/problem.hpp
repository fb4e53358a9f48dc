#pragma once

#include "nnac/linalg.hpp"

namespace nnac::ampc {

/// Horizons, weighting, bounds and stop thresholds of one MPC problem.
struct MpcProblem {
  Index N = 15;   // prediction horizon
  Index Nu = 3;   // control horizon
  double lambda = 1.0;
  double u_min = -1.5;
  double u_max = 1.5;
  double du_max = 0.3;
  double y_min = -1.5;
  double y_max = 1.5;
  int max_internal_iters = 10;
  double du_tol = 1e-7;    // on ||U^i - U^(i-1)||_inf
  double err_tol = 1e-15;  // on ||Y_sp - Y||^2 / N

  /// Throws ConfigError.
  void validate() const;
};

/// Linearisation of the predicted output trajectory around a control vector:
///   Y(U) ~= y_pred + sensitivity (U - controls)
struct TrajectoryLinearization {
  Vector y_pred;       // N
  Matrix sensitivity;  // N x Nu
  Vector controls;     // Nu
};

/// Clamps a candidate control into the box and the rate limit around u_prev
/// so that u_min <= u <= u_max and |u - u_prev| <= du_max hold exactly in
/// floating point. Requires u_prev inside the box.
double clamp_control(double u, double u_prev, const MpcProblem& problem);

}  // namespace nnac::ampc
