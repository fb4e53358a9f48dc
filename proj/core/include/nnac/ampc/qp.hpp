#pragma once

#include "nnac/ampc/problem.hpp"
#include "nnac/linalg.hpp"

namespace nnac::ampc {

/// min 1/2 x'Qx + f'x  s.t.  Gx <= b, by Hildreth's dual coordinate ascent
/// started from the unconstrained minimiser. Q must be positive definite.
struct HildrethResult {
  Vector x;
  Vector multipliers;
  int sweeps = 0;
  bool converged = true;
};

struct HildrethOptions {
  int max_sweeps = 4000;
  double tolerance = 1e-13;  // relative change of the multipliers
};

HildrethResult hildreth(const Matrix& Q, const Vector& f, const Matrix& G, const Vector& b,
                        const HildrethOptions& options = {});

/// Same problem by a primal active-set method started from a feasible x0.
/// Exact after finitely many working-set changes; slower per call than
/// hildreth but insensitive to the conditioning of G Q^-1 G'. Throws Error if
/// x0 is infeasible or the iteration cap is hit.
Vector active_set_qp(const Matrix& Q, const Vector& f, const Matrix& G, const Vector& b, const Vector& x0,
                     int max_iterations = 500);

/// n x n lower-triangular matrix of ones (U = J dU + u_prev).
Matrix lower_triangular_ones(Index n);

struct QpSolution {
  Vector du;                      // Nu control increments
  bool output_softened = false;   // y bounds moved into a penalty
  bool regularized = false;       // Hessian needed a ridge
  int sweeps = 0;
};

/// Penalty weight on output-bound violation when the hard problem is
/// infeasible.
inline constexpr double kOutputSoftPenalty = 1e6;

/// Minimises ||Y_sp - (y_pred + H (U - controls))||^2 + lambda ||dU||^2 over the
/// increments dU, with U = J dU + u_prev, subject to the input box, the rate
/// bound and the output box.
QpSolution solve_qp(const TrajectoryLinearization& lin, const Vector& y_sp,
                    const MpcProblem& problem, double u_prev);

/// Objective of solve_qp at a given dU; used by tests and diagnostics.
double qp_objective(const TrajectoryLinearization& lin, const Vector& y_sp,
                    const MpcProblem& problem, double u_prev, const Vector& du);

}  // namespace nnac::ampc
