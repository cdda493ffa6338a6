#include "orthoreg/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace orthoreg {

LpProblem LpProblem::nonnegative(VectorXd c, MatrixXd a, VectorXd b) {
  const Eigen::Index n = c.size();
  return LpProblem{std::move(c), std::move(a), std::move(b), VectorXd::Zero(n),
                   VectorXd::Constant(n, std::numeric_limits<double>::infinity())};
}

void LpProblem::validate() const {
  const Eigen::Index n = objective.size();
  if (constraints.cols() != n || constraints.rows() != rhs.size() || lower.size() != n ||
      upper.size() != n) {
    throw DimensionError("LpProblem: inconsistent dimensions");
  }
  if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite() || !lower.allFinite()) {
    throw DomainError("LpProblem: objective, constraints, right-hand sides and lower bounds must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(upper(j)) || upper(j) < lower(j)) {
      throw DomainError("LpProblem: upper bound below lower bound for variable " + std::to_string(j));
    }
  }
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Dense tableau. Rows [0, m) are constraints, row m holds reduced costs with
// minus the objective value in the last column.
class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows) {}

  MatrixXd& data() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs() const { return t_.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    t_(r, c) = 1.0;
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void price(const VectorXd& cost) {
    const Eigen::Index m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  enum class Step { optimal, unbounded, pivoted };

  // One Bland iteration over columns [0, allowed).
  Step iterate(Eigen::Index allowed, double tol) {
    const Eigen::Index m = rows();
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < allowed; ++j) {
      if (t_(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Step::optimal;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = t_(i, enter);
      if (a <= tol) continue;
      const double ratio = t_(i, rhs()) / a;
      const bool tie = leave >= 0 && std::abs(ratio - best) <= 1e-12 * (1.0 + std::abs(best));
      if (leave < 0 || (!tie && ratio < best) ||
          (tie && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) return Step::unbounded;
    pivot(leave, enter);
    return Step::pivoted;
  }

 private:
  MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult lp_solve(const LpProblem& p, long max_pivots) {
  p.validate();
  const Eigen::Index n = p.objective.size();

  // Shift to x' = x - lower >= 0 and turn finite upper bounds into rows.
  std::vector<Eigen::Index> bounded;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(p.upper(j))) bounded.push_back(j);
  }
  const Eigen::Index m0 = p.constraints.rows();
  const Eigen::Index m = m0 + static_cast<Eigen::Index>(bounded.size());
  MatrixXd a = MatrixXd::Zero(m, n);
  VectorXd b(m);
  a.topRows(m0) = p.constraints;
  b.head(m0) = p.rhs - p.constraints * p.lower;
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const auto row = m0 + static_cast<Eigen::Index>(k);
    a(row, bounded[k]) = 1.0;
    b(row) = p.upper(bounded[k]) - p.lower(bounded[k]);
  }

  std::vector<Eigen::Index> needs_artificial;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) needs_artificial.push_back(i);
  }
  const Eigen::Index structural = n + m;  // variables then slacks
  const Eigen::Index cols = structural + static_cast<Eigen::Index>(needs_artificial.size());
  Tableau tab(m, cols);
  MatrixXd& t = tab.data();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b(i) < 0.0 ? -1.0 : 1.0;
    t.row(i).head(n) = s * a.row(i);
    t(i, n + i) = s;
    t(i, tab.rhs()) = s * b(i);
    tab.basis()[static_cast<std::size_t>(i)] = n + i;
  }
  for (std::size_t k = 0; k < needs_artificial.size(); ++k) {
    const Eigen::Index i = needs_artificial[k];
    const Eigen::Index col = structural + static_cast<Eigen::Index>(k);
    t(i, col) = 1.0;
    tab.basis()[static_cast<std::size_t>(i)] = col;
  }

  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff(),
                                 p.objective.cwiseAbs().maxCoeff()});
  const double tol = 1e-11 * scale;
  if (max_pivots <= 0) max_pivots = 200 * (m + cols + 10);

  LpResult out;
  auto run = [&](Eigen::Index allowed) {
    for (;;) {
      if (out.pivots >= max_pivots) return Tableau::Step::pivoted;
      const auto step = tab.iterate(allowed, tol);
      if (step != Tableau::Step::pivoted) return step;
      ++out.pivots;
    }
  };

  if (!needs_artificial.empty()) {
    VectorXd phase1 = VectorXd::Zero(cols);
    phase1.tail(cols - structural).setOnes();
    tab.price(phase1);
    const auto step = run(cols);
    if (step == Tableau::Step::pivoted) {
      out.status = LpStatus::iteration_limit;
      return out;
    }
    const double infeasibility = -t(m, tab.rhs());
    if (infeasibility > 1e-9 * scale * (1.0 + b.cwiseAbs().maxCoeff())) {
      out.status = LpStatus::infeasible;
      return out;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < structural) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < structural; ++j) {
        if (std::abs(t(i, j)) > tol) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
  }

  VectorXd phase2 = VectorXd::Zero(cols);
  phase2.head(n) = p.objective;
  tab.price(phase2);
  const auto step = run(structural);
  if (step == Tableau::Step::pivoted) {
    out.status = LpStatus::iteration_limit;
    return out;
  }
  if (step == Tableau::Step::unbounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  VectorXd shifted = VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    shifted(tab.basis()[static_cast<std::size_t>(i)]) = t(i, tab.rhs());
  }
  out.status = LpStatus::optimal;
  out.x = p.lower + shifted.head(n).cwiseMax(0.0);
  out.objective = p.objective.dot(out.x);
  const VectorXd slack = p.rhs - p.constraints * out.x;
  double viol = slack.size() > 0 ? std::max(0.0, -slack.minCoeff()) : 0.0;
  viol = std::max(viol, (p.lower - out.x).maxCoeff());
  viol = std::max(viol, (out.x - p.upper).maxCoeff());
  out.max_violation = viol;
  return out;
}

}  // namespace orthoreg
