#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "orthoreg/measures.hpp"
#include "orthoreg/projection.hpp"
#include "test_support.hpp"

namespace orthoreg {
namespace {

using test::random_matrix;
using test::random_orthogonal;

constexpr double kTwoPi = 2 * std::numbers::pi;

double orthogonality_defect(const Eigen::MatrixXd& h) {
  return (h.transpose() * h - Eigen::MatrixXd::Identity(h.rows(), h.cols())).norm();
}

TEST(PolarProject, OrthogonalIsFixedPoint) {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXd q = random_orthogonal(n, rng);
    EXPECT_LT((polar_project(q).system - q).norm(), 1e-10);
  }
}

TEST(PolarProject, PositiveDiagonalGivesIdentity) {
  const Eigen::MatrixXd d = Eigen::Vector2d(3, 0.5).asDiagonal();
  const auto p = polar_project(d);
  EXPECT_LT((p.system - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(p.manifold, 1);
}

TEST(PolarProject, Properties) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    const Eigen::MatrixXd h = polar_project(g).system;
    EXPECT_LT(orthogonality_defect(h), 1e-12);
    EXPECT_LT((polar_project(h).system - h).norm(), 1e-12);
    EXPECT_LT((polar_project(Eigen::MatrixXd(g.transpose())).system - h.transpose()).norm(), 1e-10);
    // G = H P with P symmetric positive definite.
    const Eigen::MatrixXd p = h.transpose() * g;
    EXPECT_LT((p - p.transpose()).norm(), 1e-10 * g.norm());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (p + p.transpose())).eigenvalues().minCoeff(), 0);
  }
}

TEST(PolarProject, RejectsSingularInput) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(polar_project(a), SingularMatrixError);
  EXPECT_THROW(polar_project(Eigen::MatrixXd::Zero(3, 3)), SingularMatrixError);
}

// Dense sweep of the 2x2 orthogonal group (rotations and reflections) at
// angular step 1e-4: nothing beats the polar factor in either measure.
TEST(PolarProject, BeatsEveryTwoByTwoOrthogonalSystem) {
  const Eigen::MatrixXd g = test::rotation(0.7) * Eigen::Vector2d(2, 1).asDiagonal();
  const Eigen::MatrixXd h = polar_project(g).system;
  const double best_ls = epsilon_ls(g, h);
  const double best_bo = epsilon_bo(g, h);
  double grid_ls = INFINITY;
  double grid_bo = INFINITY;
  Eigen::MatrixXd arg;
  for (double t = 0; t < kTwoPi; t += 1e-4) {
    for (const Eigen::MatrixXd& q : {test::rotation(t), test::reflection(t)}) {
      const double ls = epsilon_ls(g, q);
      if (ls < grid_ls) grid_ls = ls, arg = q;
      grid_bo = std::min(grid_bo, epsilon_bo(g, q));
    }
  }
  EXPECT_GE(grid_ls - best_ls, -1e-9);
  EXPECT_GE(grid_bo - best_bo, -1e-9);
  EXPECT_LT((arg - h).norm(), 1e-4);
}

TEST(BiorthogonalizationTargets, CoincideWithPolarProjection) {
  std::mt19937_64 rng(33);
  for (int n = 1; n <= 7; ++n) {
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    EXPECT_EQ(biorthogonalization_targets(g).system, polar_project(g).system);
  }
  const Eigen::MatrixXd q = random_orthogonal(4, rng);
  EXPECT_LT((biorthogonalization_targets(q).system - q).norm(), 1e-10);
}

// The biorthogonal system of g has the same polar factor, so the target is
// shared by a system and its dual.
TEST(BiorthogonalizationTargets, SharedWithDualSystem) {
  std::mt19937_64 rng(34);
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    EXPECT_LT((polar_project(biorthogonal(g)).system - polar_project(g).system).norm(), 1e-9);
  }
}

TEST(ManifoldOf, Examples) {
  std::mt19937_64 rng(35);
  const Eigen::MatrixXd a = random_matrix(5, 5, rng);
  EXPECT_EQ(manifold_of(Eigen::MatrixXd(a.transpose() * a + Eigen::MatrixXd::Identity(5, 5))), 1);
  Eigen::MatrixXd flipped = Eigen::MatrixXd::Identity(4, 4);
  flipped.col(2) *= -1;
  EXPECT_EQ(manifold_of(flipped), -1);
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 2, 4;
  EXPECT_THROW(manifold_of(s), SingularMatrixError);
}

TEST(ManifoldOf, SignRuleMatchesProjection) {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 8;
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    const auto p = polar_project(g);
    EXPECT_EQ(manifold_of(g), det_sign(p.system));
    EXPECT_EQ(p.manifold, g.determinant() > 0 ? 1 : -1);
  }
}

TEST(InverseSqrtBinomials, FirstCoefficients) {
  const auto c = inverse_sqrt_binomials<double>(5);
  EXPECT_EQ(c[0], 1.0);
  EXPECT_EQ(c[1], -0.5);
  EXPECT_EQ(c[2], 0.375);
  EXPECT_EQ(c[3], -0.3125);
  EXPECT_EQ(c[4], 35.0 / 128);
}

TEST(SeriesProject, OrthogonalNeedsNoTerms) {
  std::mt19937_64 rng(37);
  const Eigen::MatrixXd q = random_orthogonal(5, rng);
  const auto s = series_project(q, 1e-8);
  EXPECT_EQ(s.certificate.terms_used, 0);
  EXPECT_TRUE(s.certificate.certified);
  EXPECT_EQ(s.projection.system, q);
}

TEST(SeriesProject, ScaledIdentity) {
  const Eigen::MatrixXd g = 1.01 * Eigen::MatrixXd::Identity(2, 2);
  const auto s = series_project(g, 1e-12);
  EXPECT_LE(s.certificate.terms_used, 10);
  EXPECT_FALSE(s.certificate.fell_back_to_svd);
  EXPECT_LT((s.projection.system - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  // Scalar oracle: 1.01 * sum_n binom(-1/2, n) r^n with r = 1.01^2 - 1.
  const double r = 1.01 * 1.01 - 1;
  const auto c = inverse_sqrt_binomials<double>(s.certificate.terms_used + 1);
  double partial = 0;
  for (int k = 0; k <= s.certificate.terms_used; ++k) partial += c[static_cast<std::size_t>(k)] * std::pow(r, k);
  EXPECT_NEAR(s.projection.system(0, 0), 1.01 * partial, 1e-15);
}

TEST(SeriesProject, AgreesWithSvdRouteOnNearOrthogonalInput) {
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 7;
    const Eigen::MatrixXd g = random_orthogonal(n, rng) + 0.05 / n * random_matrix(n, n, rng);
    const auto s = series_project(g, 1e-8);
    ASSERT_TRUE(s.certificate.certified);
    EXPECT_LE(s.certificate.truncation_bound, 1e-8);
    EXPECT_LT((s.projection.system - polar_project(g).system).norm(), 1e-8);
    EXPECT_EQ(s.projection.manifold, manifold_of(g));
  }
}

TEST(SeriesProject, FallsBackWhenTooManyTermsNeeded) {
  const Eigen::MatrixXd g = Eigen::Vector2d(std::sqrt(1.99), 1.0).asDiagonal();
  const auto s = series_project(g, 1e-12);
  EXPECT_TRUE(s.certificate.certified);
  EXPECT_TRUE(s.certificate.fell_back_to_svd);
  EXPECT_LT((s.projection.system - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(SeriesProject, RefusesUncertifiedInput) {
  const Eigen::MatrixXd g = 2.0 * Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(series_project(g, 1e-8), CertificationError);
  EXPECT_THROW(series_project(Eigen::MatrixXd::Identity(2, 2), 0.0), DomainError);
}

}  // namespace
}  // namespace orthoreg
