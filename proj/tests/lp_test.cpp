#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "orthoreg/lp.hpp"

namespace orthoreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(LpSolve, SingleLowerBoundedVariable) {
  // minimize x subject to x >= 3, written as -x <= -3.
  auto p = LpProblem::nonnegative(Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, -1.0),
                                  Eigen::VectorXd::Constant(1, -3.0));
  const auto r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x(0), 3.0, 1e-12);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
}

TEST(LpSolve, TextbookVertex) {
  // maximize 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18: optimum (2, 6), value 36.
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  auto p = LpProblem::nonnegative(Eigen::Vector2d(-3, -5), a, Eigen::Vector3d(4, 12, 18));
  const auto r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x(0), 2.0, 1e-12);
  EXPECT_NEAR(r.x(1), 6.0, 1e-12);
  EXPECT_NEAR(r.objective, -36.0, 1e-12);
  EXPECT_LE(r.max_violation, 1e-12);
}

TEST(LpSolve, DetectsInfeasibility) {
  auto p = LpProblem::nonnegative(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1),
                                  Eigen::VectorXd::Constant(1, -1.0));
  EXPECT_EQ(lp_solve(p).status, LpStatus::infeasible);
}

TEST(LpSolve, DetectsUnboundedness) {
  auto p = LpProblem::nonnegative(Eigen::Vector2d(-1, 0), Eigen::MatrixXd(Eigen::RowVector2d(0, 1)),
                                  Eigen::VectorXd::Ones(1));
  EXPECT_EQ(lp_solve(p).status, LpStatus::unbounded);
}

TEST(LpSolve, HonoursGeneralBounds) {
  LpProblem p;
  p.objective = Eigen::Vector2d(-1, 1);
  p.constraints = Eigen::MatrixXd::Zero(0, 2);
  p.rhs = Eigen::VectorXd::Zero(0);
  p.lower = Eigen::Vector2d(1, -2);
  p.upper = Eigen::Vector2d(5, kInf);
  const auto r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.x(0), 5.0, 1e-12);
  EXPECT_NEAR(r.x(1), -2.0, 1e-12);
}

// Beale's example cycles under the textbook largest-coefficient rule.
TEST(LpSolve, DegenerateCyclingExampleTerminates) {
  Eigen::MatrixXd a(3, 4);
  a << 0.25, -8, -1, 9,
       0.5, -12, -0.5, 3,
       0, 0, 1, 0;
  auto p = LpProblem::nonnegative(Eigen::Vector4d(-0.75, 20, -0.5, 6), a, Eigen::Vector3d(0, 0, 1));
  const auto r = lp_solve(p);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.objective, -1.25, 1e-12);
}

TEST(LpSolve, PivotBudget) {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 2, 3, 2;
  auto p = LpProblem::nonnegative(Eigen::Vector2d(-3, -5), a, Eigen::Vector3d(4, 12, 18));
  EXPECT_EQ(lp_solve(p, 1).status, LpStatus::iteration_limit);
}

TEST(LpSolve, RejectsMalformedProblems) {
  auto p = LpProblem::nonnegative(Eigen::Vector2d(1, 1), Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Ones(1));
  EXPECT_THROW(lp_solve(p), DimensionError);
  LpProblem q = LpProblem::nonnegative(Eigen::VectorXd::Ones(1), Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Ones(1));
  q.lower(0) = -kInf;
  EXPECT_THROW(lp_solve(q), DomainError);
}

// Two-variable LPs against enumeration of all pairwise constraint intersections.
TEST(LpSolve, MatchesVertexEnumeration) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1, 1);
  int solved = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 4;
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
      a(i, 0) = u(rng);
      a(i, 1) = u(rng);
      b(i) = 1 + u(rng);
    }
    const Eigen::Vector2d c(u(rng), u(rng));
    LpProblem p;
    p.objective = c;
    p.constraints = a;
    p.rhs = b;
    p.lower = Eigen::Vector2d(-3, -3);
    p.upper = Eigen::Vector2d(3, 3);

    // All half-planes, bounds included, as rows of [A | b].
    Eigen::MatrixXd rows(m + 4, 2);
    Eigen::VectorXd rhs(m + 4);
    rows.topRows(m) = a;
    rhs.head(m) = b;
    rows.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    rhs.tail(4) << 3, 3, 3, 3;
    double best = kInf;
    for (int i = 0; i < m + 4; ++i) {
      for (int j = i + 1; j < m + 4; ++j) {
        Eigen::Matrix2d k;
        k << rows.row(i), rows.row(j);
        if (std::abs(k.determinant()) < 1e-12) continue;
        const Eigen::Vector2d v = k.inverse() * Eigen::Vector2d(rhs(i), rhs(j));
        if (((rows * v - rhs).array() <= 1e-9).all()) best = std::min(best, c.dot(v));
      }
    }
    const auto r = lp_solve(p);
    // x = 0 is always feasible (b > 0), so the box keeps every instance bounded and feasible.
    ASSERT_EQ(r.status, LpStatus::optimal);
    EXPECT_NEAR(r.objective, best, 1e-9);
    EXPECT_LE(r.max_violation, 1e-9);
    ++solved;
  }
  EXPECT_EQ(solved, 200);
}

}  // namespace
}  // namespace orthoreg
