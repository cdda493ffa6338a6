#ifndef ORTHOREG_BASELINES_HPP
#define ORTHOREG_BASELINES_HPP

// Comparison regularizers for E x = y: Tikhonov with T = rho I, basis
// pursuit denoising with an unsquared data term, and the Dantzig selector.

#include "orthoreg/linalg.hpp"
#include "orthoreg/lp.hpp"

namespace orthoreg {

struct SolverOptions {
  long max_iter = 200;
  double tol = 1e-10;
  bool acceleration = true;  // FISTA momentum in the inner l1 steps

  void validate() const;
};

struct L1Solution {
  VectorXd x;
  double objective = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// (E^T E + rho^2 I)^{-1} E^T y by Gaussian elimination on the normal equations.
VectorXd tikhonov(const MatrixXd& e, const VectorXd& y, double rho);

/// ||E x - y||_2 + rho ||x||_1.
double bpdn_objective(const MatrixXd& e, const VectorXd& y, double rho, const VectorXd& x);

/// ||E^T (E x - y)||_inf + rho ||x||_1.
double dantzig_objective(const MatrixXd& e, const VectorXd& y, double rho, const VectorXd& x);

/// Approximate minimizer of bpdn_objective.
///
/// Majorize-minimize: at x_k the data term is bounded by
/// ||r||^2 / (2 ||r_k||) + ||r_k|| / 2, so each outer step is a lasso problem
/// with weight rho ||r_k||, solved by a few proximal-gradient steps. The
/// result is then polished by golden-section searches towards 0 and towards
/// the least-squares solution, and never has a higher objective than either.
L1Solution bpdn(const MatrixXd& e, const VectorXd& y, double rho, const SolverOptions& opts = {});

/// Dantzig selector through the LP
///   min t + rho 1^T (x+ + x-)  s.t.  -t <= E^T (E (x+ - x-) - y) <= t,  x+, x-, t >= 0.
/// Throws ConvergenceError if the LP does not reach optimality.
L1Solution dantzig(const MatrixXd& e, const VectorXd& y, double rho, const SolverOptions& opts = {});

/// The LP used by dantzig, exposed for inspection and testing.
LpProblem dantzig_lp(const MatrixXd& e, const VectorXd& y, double rho);

}  // namespace orthoreg

#endif  // ORTHOREG_BASELINES_HPP
