#include "orthoreg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace orthoreg {

namespace {

void require_problem(const MatrixXd& e, const VectorXd& y, double rho, const char* what) {
  require_square(e, what);
  require_finite(e, what);
  if (y.size() != e.rows()) {
    throw DimensionError(std::string(what) + ": right-hand side has length " +
                         std::to_string(y.size()) + ", expected " + std::to_string(e.rows()));
  }
  if (!std::isfinite(rho) || rho < 0.0) {
    throw DomainError(std::string(what) + ": rho must be a finite nonnegative number");
  }
}

VectorXd soft_threshold(const VectorXd& v, double t) {
  return v.array().sign() * (v.array().abs() - t).max(0.0);
}

// Golden-section minimization of phi on [0, 1].
template <typename F>
double golden_section(F&& phi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void SolverOptions::validate() const {
  if (max_iter < 1) throw DomainError("SolverOptions: max_iter must be at least 1");
  if (!(tol > 0.0)) throw DomainError("SolverOptions: tol must be positive");
}

VectorXd tikhonov(const MatrixXd& e, const VectorXd& y, double rho) {
  require_problem(e, y, rho, "tikhonov");
  MatrixXd normal = e.transpose() * e;
  normal.diagonal().array() += rho * rho;
  return solve_gaussian(normal, e.transpose() * y);
}

double bpdn_objective(const MatrixXd& e, const VectorXd& y, double rho, const VectorXd& x) {
  return (e * x - y).norm() + rho * x.lpNorm<1>();
}

double dantzig_objective(const MatrixXd& e, const VectorXd& y, double rho, const VectorXd& x) {
  return (e.transpose() * (e * x - y)).lpNorm<Eigen::Infinity>() + rho * x.lpNorm<1>();
}

L1Solution bpdn(const MatrixXd& e, const VectorXd& y, double rho, const SolverOptions& opts) {
  require_problem(e, y, rho, "bpdn");
  opts.validate();
  const Eigen::Index n = e.rows();

  // With rho = 0 any solution of E x = y is optimal.
  VectorXd least_squares;
  bool have_ls = true;
  try {
    least_squares = solve_gaussian(e, y);
  } catch (const SingularMatrixError&) {
    have_ls = false;
  }
  if (rho == 0.0 && have_ls) {
    return {least_squares, bpdn_objective(e, y, rho, least_squares), 0, true};
  }

  constexpr int kInnerSteps = 200;
  constexpr int kStallWindow = 10;
  const MatrixXd gram = e.transpose() * e;
  const VectorXd ety = e.transpose() * y;
  const double smax = svd(e).sigma(0);
  const double lipschitz = std::max(smax * smax, 1e-300);
  auto objective = [&](const VectorXd& x) { return bpdn_objective(e, y, rho, x); };

  // Start from 0: the least-squares point of an ill-conditioned E is a poor
  // starting point even when its objective happens to be lower.
  L1Solution out{VectorXd::Zero(n), objective(VectorXd::Zero(n)), 0, false};

  int small_decreases = 0;
  while (out.iterations < opts.max_iter) {
    ++out.iterations;
    const double rnorm = std::max((e * out.x - y).norm(), 1e-300);
    // Lasso surrogate: 0.5 ||E x - y||^2 + rho ||r_k|| ||x||_1.
    const double lambda = rho * rnorm;
    VectorXd x = out.x;
    VectorXd x_prev = x;
    VectorXd z = x;
    double t = 1.0;
    for (int k = 0; k < kInnerSteps; ++k) {
      const VectorXd grad = gram * z - ety;
      x = soft_threshold(z - grad / lipschitz, lambda / lipschitz);
      if (opts.acceleration) {
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        z = x + ((t - 1.0) / t_next) * (x - x_prev);
        t = t_next;
      } else {
        z = x;
      }
      x_prev = x;
    }
    const double f = objective(x);
    if (!std::isfinite(f)) break;
    const double previous = out.objective;
    if (f < out.objective) {
      out.x = x;
      out.objective = f;
    }
    const double rel = (previous - out.objective) / std::max(std::abs(previous), 1e-300);
    small_decreases = rel < opts.tol ? small_decreases + 1 : 0;
    if (small_decreases >= kStallWindow) {
      out.converged = true;
      break;
    }
  }

  // Polish along the segments towards 0 and towards the least-squares point.
  std::vector<VectorXd> anchors{VectorXd::Zero(n)};
  for (const auto& anchor : anchors) {
    const VectorXd base = out.x;
    const VectorXd dir = anchor - base;
    auto phi = [&](double s) { return objective(base + s * dir); };
    const double s = golden_section(phi, 1e-10);
    const double f = phi(s);
    if (f < out.objective) {
      out.x = base + s * dir;
      out.objective = f;
    }
  }
  if (have_ls && objective(least_squares) < out.objective) {
    out.x = least_squares;
    out.objective = objective(least_squares);
  }
  return out;
}

LpProblem dantzig_lp(const MatrixXd& e, const VectorXd& y, double rho) {
  require_problem(e, y, rho, "dantzig_lp");
  const Eigen::Index n = e.rows();
  const MatrixXd gram = e.transpose() * e;
  const VectorXd ety = e.transpose() * y;

  // Variables: [x+ (n), x- (n), t].
  VectorXd c(2 * n + 1);
  c.head(2 * n).setConstant(rho);
  c(2 * n) = 1.0;
  MatrixXd a(2 * n, 2 * n + 1);
  a.block(0, 0, n, n) = gram;
  a.block(0, n, n, n) = -gram;
  a.block(0, 2 * n, n, 1).setConstant(-1.0);
  a.block(n, 0, n, n) = -gram;
  a.block(n, n, n, n) = gram;
  a.block(n, 2 * n, n, 1).setConstant(-1.0);
  VectorXd b(2 * n);
  b.head(n) = ety;
  b.tail(n) = -ety;
  return LpProblem::nonnegative(std::move(c), std::move(a), std::move(b));
}

L1Solution dantzig(const MatrixXd& e, const VectorXd& y, double rho, const SolverOptions& opts) {
  opts.validate();
  const LpProblem lp = dantzig_lp(e, y, rho);
  const Eigen::Index n = e.rows();
  const LpResult r = lp_solve(lp);
  if (r.status != LpStatus::optimal) {
    throw ConvergenceError("dantzig: linear program ended with status " +
                           std::string(to_string(r.status)));
  }
  VectorXd x = r.x.head(n) - r.x.segment(n, n);
  const double f = dantzig_objective(e, y, rho, x);
  return {std::move(x), f, r.pivots, true};
}

}  // namespace orthoreg
