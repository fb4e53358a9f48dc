#include "nnac/ampc/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <spdlog/spdlog.h>

#include "nnac/errors.hpp"

namespace nnac::ampc {

void MpcProblem::validate() const {
  if (N < 1 || Nu < 1 || Nu > N) throw ConfigError("MPC horizons need 1 <= Nu <= N");
  if (!(lambda >= 0.0)) throw ConfigError("MPC lambda must be non-negative");
  if (!(u_min < u_max)) throw ConfigError("MPC needs u_min < u_max");
  if (!(du_max > 0.0)) throw ConfigError("MPC du_max must be positive");
  if (!(y_min < y_max)) throw ConfigError("MPC needs y_min < y_max");
  if (max_internal_iters < 1) throw ConfigError("MPC needs at least one internal iteration");
  if (!(du_tol > 0.0 && err_tol > 0.0)) throw ConfigError("MPC tolerances must be positive");
}

double clamp_control(double u, double u_prev, const MpcProblem& p) {
  double lo = std::max(p.u_min, u_prev - p.du_max);
  double hi = std::min(p.u_max, u_prev + p.du_max);
  // u_prev +- du_max is rounded; step inward until the checks hold as written
  while (hi - u_prev > p.du_max) hi = std::nextafter(hi, -std::numeric_limits<double>::infinity());
  while (u_prev - lo > p.du_max) lo = std::nextafter(lo, std::numeric_limits<double>::infinity());
  if (!std::isfinite(u)) return std::clamp(u_prev, lo, hi);
  return std::clamp(u, lo, hi);
}

Matrix lower_triangular_ones(Index n) {
  return Matrix::Ones(n, n).triangularView<Eigen::Lower>();
}

HildrethResult hildreth(const Matrix& Q, const Vector& f, const Matrix& G, const Vector& b,
                        const HildrethOptions& options) {
  HildrethResult res;
  const Eigen::LLT<Matrix> llt(Q);
  res.x = -llt.solve(f);
  res.multipliers = Vector::Zero(G.rows());
  if (G.rows() == 0 || ((G * res.x - b).array() <= 0.0).all()) return res;

  const Matrix QinvGt = llt.solve(G.transpose());
  const Matrix P = G * QinvGt;
  const Vector d = b + G * llt.solve(f);
  Vector& lam = res.multipliers;
  res.converged = false;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    res.sweeps = sweep;
    double change = 0.0;
    for (Index i = 0; i < P.rows(); ++i) {
      if (P(i, i) <= 0.0) continue;
      const double w = -(d(i) + P.row(i).dot(lam) - P(i, i) * lam(i)) / P(i, i);
      const double next = std::max(0.0, w);
      change += (next - lam(i)) * (next - lam(i));
      lam(i) = next;
    }
    const double scale = std::max(lam.squaredNorm(), 1e-300);
    if (!std::isfinite(scale)) break;
    if (change <= options.tolerance * options.tolerance * scale) {
      res.converged = true;
      break;
    }
  }
  res.x = res.x - QinvGt * lam;
  return res;
}

Vector active_set_qp(const Matrix& Q, const Vector& f, const Matrix& G, const Vector& b, const Vector& x0,
                     int max_iterations) {
  constexpr double kTol = 1e-10;
  const Index n = Q.rows();
  if ((G * x0 - b).maxCoeff() > kTol * std::max(1.0, b.cwiseAbs().maxCoeff()))
    throw Error("active_set_qp: starting point is infeasible");
  Vector x = x0;
  std::vector<Index> work;
  for (int it = 0; it < max_iterations; ++it) {
    const auto m = static_cast<Index>(work.size());
    Matrix K = Matrix::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = Q;
    for (Index j = 0; j < m; ++j) {
      K.block(n + j, 0, 1, n) = G.row(work[j]);
      K.block(0, n + j, n, 1) = G.row(work[j]).transpose();
    }
    Vector rhs = Vector::Zero(n + m);
    rhs.head(n) = -(Q * x + f);
    const Vector sol = K.fullPivLu().solve(rhs);
    const Vector step = sol.head(n);
    double alpha = 1.0;
    Index blocking = -1;
    for (Index i = 0; i < G.rows(); ++i) {
      if (std::find(work.begin(), work.end(), i) != work.end()) continue;
      const double slope = G.row(i).dot(step);
      if (slope <= 0.0) continue;
      const double room = std::max(0.0, b(i) - G.row(i).dot(x)) / slope;
      if (room < alpha) {
        alpha = room;
        blocking = i;
      }
    }
    x += alpha * step;
    if (blocking >= 0) {
      work.push_back(blocking);
      continue;
    }
    // x now minimises over the working set; drop the most negative multiplier
    if (m == 0) return x;
    Index worst = 0;
    if (sol.tail(m).minCoeff(&worst) >= -kTol) return x;
    work.erase(work.begin() + worst);
  }
  throw Error("active_set_qp: iteration cap reached");
}

namespace {

struct Condensed {
  Matrix A;   // H J
  Vector c;   // residual at dU = 0
  Vector y0;  // predicted outputs at dU = 0
};

Condensed condense(const TrajectoryLinearization& lin, const Vector& y_sp, double u_prev, Index Nu) {
  Condensed out;
  const Matrix J = lower_triangular_ones(Nu);
  out.A = lin.sensitivity * J;
  out.y0 = lin.y_pred + lin.sensitivity * (Vector::Constant(Nu, u_prev) - lin.controls);
  out.c = y_sp - out.y0;
  return out;
}

void check_shapes(const TrajectoryLinearization& lin, const Vector& y_sp, const MpcProblem& p) {
  if (lin.y_pred.size() != p.N || lin.sensitivity.rows() != p.N || lin.sensitivity.cols() != p.Nu ||
      lin.controls.size() != p.Nu || y_sp.size() != p.N)
    throw DimensionMismatch("solve_qp: linearisation shapes do not match N x Nu");
}

bool feasible(const Matrix& G, const Vector& b, const Vector& x, double tol) {
  return ((G * x - b).array() <= tol).all();
}

}  // namespace

double qp_objective(const TrajectoryLinearization& lin, const Vector& y_sp, const MpcProblem& p,
                    double u_prev, const Vector& du) {
  const auto cd = condense(lin, y_sp, u_prev, p.Nu);
  return (cd.c - cd.A * du).squaredNorm() + p.lambda * du.squaredNorm();
}

QpSolution solve_qp(const TrajectoryLinearization& lin, const Vector& y_sp, const MpcProblem& p,
                    double u_prev) {
  check_shapes(lin, y_sp, p);
  const Index nu = p.Nu;
  const Index n = p.N;
  const auto cd = condense(lin, y_sp, u_prev, nu);
  const Matrix J = lower_triangular_ones(nu);

  QpSolution sol;
  Matrix Q = 2.0 * (cd.A.transpose() * cd.A + p.lambda * Matrix::Identity(nu, nu));
  const Vector f = -2.0 * cd.A.transpose() * cd.c;
  if (Eigen::LLT<Matrix>(Q).info() != Eigen::Success || Q.diagonal().minCoeff() <= 0.0 ||
      Eigen::FullPivLU<Matrix>(Q).rank() < nu) {
    Q += 1e-8 * Matrix::Identity(nu, nu);
    sol.regularized = true;
    spdlog::debug("solve_qp: singular Hessian regularised");
  }

  // input box, rate bound, output box: G dU <= b
  Matrix G(4 * nu + 2 * n, nu);
  Vector b(4 * nu + 2 * n);
  G << J, -J, Matrix::Identity(nu, nu), -Matrix::Identity(nu, nu), cd.A, -cd.A;
  b << Vector::Constant(nu, p.u_max - u_prev), Vector::Constant(nu, u_prev - p.u_min),
      Vector::Constant(nu, p.du_max), Vector::Constant(nu, p.du_max),
      Vector::Constant(n, p.y_max) - cd.y0, cd.y0 - Vector::Constant(n, p.y_min);

  constexpr double kFeasTol = 1e-7;
  auto hard = hildreth(Q, f, G, b);
  sol.sweeps = hard.sweeps;
  if (hard.converged && feasible(G, b, hard.x, kFeasTol)) {
    sol.du = hard.x;
    return sol;
  }

  // Output bounds unreachable: add one slack s >= 0 shared by all output
  // rows, penalised by kOutputSoftPenalty s^2.
  sol.output_softened = true;
  const Index m = nu + 1;
  Matrix Qs = Matrix::Zero(m, m);
  Qs.topLeftCorner(nu, nu) = Q;
  Qs(nu, nu) = 2.0 * kOutputSoftPenalty;
  Vector fs = Vector::Zero(m);
  fs.head(nu) = f;
  Matrix Gs = Matrix::Zero(G.rows() + 1, m);
  Gs.topLeftCorner(G.rows(), nu) = G;
  Gs.block(4 * nu, nu, 2 * n, 1) = -Vector::Ones(2 * n);
  Gs(G.rows(), nu) = -1.0;
  Vector bs(G.rows() + 1);
  bs << b, 0.0;
  auto soft = hildreth(Qs, fs, Gs, bs);
  sol.sweeps += soft.sweeps;
  if (soft.converged && feasible(Gs, bs, soft.x, kFeasTol)) {
    sol.du = soft.x.head(nu);
    return sol;
  }
  // Dual ascent stalls on the penalised problem; dU = 0 with the slack at the
  // largest output-bound excess is feasible, so start the active-set solve there.
  Vector start = Vector::Zero(m);
  start(nu) = std::max(0.0, -b.tail(2 * n).minCoeff());
  sol.du = active_set_qp(Qs, fs, Gs, bs, start).head(nu);
  return sol;
}

}  // namespace nnac::ampc
