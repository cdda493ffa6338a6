#ifndef ORTHOREG_MEASURES_HPP
#define ORTHOREG_MEASURES_HPP

// Biorthogonality and least-squares distance measures between two systems,
// together with their gradients with respect to a single vector of the
// second system. Systems are passed in matrix form (vector k is column k).

#include <string>

#include "orthoreg/linalg.hpp"

namespace orthoreg {

namespace detail {

template <typename DA, typename DB>
void require_same_system_shape(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                               const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw DimensionError(std::string(what) + ": systems have dimensions " +
                         std::to_string(a.rows()) + " and " + std::to_string(b.rows()));
  }
}

template <typename Derived>
void require_index(const Eigen::MatrixBase<Derived>& a, Eigen::Index k, const char* what) {
  if (k < 0 || k >= a.cols()) {
    throw DimensionError(std::string(what) + ": vector index " + std::to_string(k) +
                         " out of range [0, " + std::to_string(a.cols()) + ")");
  }
}

}  // namespace detail

/// Biorthogonality measure sum_{k,j} (<a_k, b_j> - delta_{kj})^2 = ||A^T B - I||_F^2.
/// Zero exactly when b is the biorthogonal system of a.
template <typename DA, typename DB>
typename DA::Scalar epsilon_bo(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  detail::require_same_system_shape(a, b, "epsilon_bo");
  Matrix<Scalar> m = a.transpose() * b;
  m -= Matrix<Scalar>::Identity(a.rows(), a.cols());
  return m.squaredNorm();
}

/// Least-squares distance sum_k ||a_k - b_k||^2 = ||A - B||_F^2.
template <typename DA, typename DB>
typename DA::Scalar epsilon_ls(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  detail::require_same_system_shape(a, b, "epsilon_ls");
  return (a - b).squaredNorm();
}

/// The gradient primitive 2 sum_j (<g_j, h_k> - delta_{jk}) g_j, with k zero-based.
///
/// Algebraically this is the gradient of epsilon_bo(g, h) in h_k. It matches the
/// gradient of epsilon_ls(g, h) only after restricting h to the orthogonal
/// group, where the two measures coincide. See grad_epsilon_ls_distance for the
/// unrestricted gradient of the distance.
template <typename DG, typename DH>
Vector<typename DG::Scalar> grad_epsilon_ls(const Eigen::MatrixBase<DG>& g,
                                            const Eigen::MatrixBase<DH>& h, Eigen::Index k) {
  using Scalar = typename DG::Scalar;
  detail::require_same_system_shape(g, h, "grad_epsilon_ls");
  detail::require_index(h, k, "grad_epsilon_ls");
  Vector<Scalar> coeff = g.transpose() * h.col(k);
  coeff(k) -= Scalar(1);
  return Scalar(2) * (g * coeff);
}

/// Gradient of epsilon_ls(g, h) in h_k: 2 (h_k - g_k).
template <typename DG, typename DH>
Vector<typename DG::Scalar> grad_epsilon_ls_distance(const Eigen::MatrixBase<DG>& g,
                                                     const Eigen::MatrixBase<DH>& h,
                                                     Eigen::Index k) {
  using Scalar = typename DG::Scalar;
  detail::require_same_system_shape(g, h, "grad_epsilon_ls_distance");
  detail::require_index(h, k, "grad_epsilon_ls_distance");
  return Scalar(2) * (h.col(k) - g.col(k));
}

/// Gradient of epsilon_bo(h, h) in h_k:
///   4 (<h_k, h_k> - 1) h_k + 4 sum_{j != k} <h_j, h_k> h_j.
/// Every cross term <h_j, h_k>^2 occurs twice in the double sum (as (j,k) and
/// (k,j)), hence the factor 4 on the off-diagonal part.
template <typename DH>
Vector<typename DH::Scalar> grad_epsilon_bo_self(const Eigen::MatrixBase<DH>& h, Eigen::Index k) {
  using Scalar = typename DH::Scalar;
  require_square(h, "grad_epsilon_bo_self");
  detail::require_index(h, k, "grad_epsilon_bo_self");
  Vector<Scalar> coeff = h.transpose() * h.col(k);
  coeff(k) -= Scalar(1);
  return Scalar(4) * (h * coeff);
}

/// All N gradients of epsilon_bo(h, h) at once, column k being the gradient in h_k.
template <typename DH>
Matrix<typename DH::Scalar> grad_epsilon_bo_self_all(const Eigen::MatrixBase<DH>& h) {
  using Scalar = typename DH::Scalar;
  return Scalar(4) * (h * gram_residual(h));
}

}  // namespace orthoreg

#endif  // ORTHOREG_MEASURES_HPP
