#ifndef ORTHOREG_LP_HPP
#define ORTHOREG_LP_HPP

#include <limits>
#include <string_view>

#include "orthoreg/linalg.hpp"

namespace orthoreg {

/// minimize c^T x  subject to  A x <= b,  lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LpProblem {
  VectorXd objective;
  MatrixXd constraints;
  VectorXd rhs;
  VectorXd lower;
  VectorXd upper;

  /// Problem with x >= 0 and no upper bounds.
  static LpProblem nonnegative(VectorXd c, MatrixXd a, VectorXd b);

  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  VectorXd x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  long pivots = 0;
  double max_violation = 0.0;  // largest violation of A x <= b and the bounds at x
};

/// Dense two-phase tableau simplex with Bland's smallest-index rule, which
/// cannot cycle. max_pivots = 0 picks a budget from the problem size.
LpResult lp_solve(const LpProblem& p, long max_pivots = 0);

}  // namespace orthoreg

#endif  // ORTHOREG_LP_HPP
