#ifndef ORTHOREG_PROJECTION_HPP
#define ORTHOREG_PROJECTION_HPP

// Projection of a system onto the orthogonal group O(N). The polar factor
// U V^T of G = U S V^T is simultaneously the nearest orthogonal system in
// epsilon_ls to g and to its biorthogonal system, and the most biorthogonal
// orthogonal system to either of them. For nearly orthogonal G the same
// factor is G (I + R)^{-1/2}, R = G^T G - I, which can be summed as a
// binomial series without any SVD.

#include <cmath>
#include <cstddef>
#include <limits>

#include "orthoreg/linalg.hpp"

namespace orthoreg {

/// Default relative rank tolerance: polar_project rejects inputs with
/// sigma_min <= kPolarRankTolerance * sigma_max.
inline constexpr double kPolarRankTolerance = 1e-14;

/// Hard cap on the number of series terms before falling back to the SVD.
inline constexpr int kMaxSeriesTerms = 200;

template <typename Scalar>
struct OrthogonalSystem {
  Matrix<Scalar> system;
  int manifold = 1;  // det sign: +1 for SO(N), -1 for the reflection component
};

struct SeriesCertificate {
  double gershgorin_bound = 0.0;  // upper bound on the spectral radius of R
  bool certified = false;
  int terms_used = 0;             // highest power of R kept
  double truncation_bound = 0.0;  // bound on sum_{n > terms_used} |binom(-1/2, n)| r^n
  bool fell_back_to_svd = false;
};

template <typename Scalar>
struct SeriesProjection {
  OrthogonalSystem<Scalar> projection;
  SeriesCertificate certificate;
};

/// Polar factor U V^T of g. Throws SingularMatrixError when
/// sigma_min <= rank_tol * sigma_max, since the factor is then not unique.
/// rank_tol = 0 rejects only exactly singular input.
template <typename Derived>
OrthogonalSystem<typename Derived::Scalar> polar_project(
    const Eigen::MatrixBase<Derived>& g,
    typename Derived::Scalar rank_tol = typename Derived::Scalar(kPolarRankTolerance)) {
  using Scalar = typename Derived::Scalar;
  const auto f = svd(g);
  const Scalar smax = f.sigma(0);
  const Scalar smin = f.sigma(f.sigma.size() - 1);
  if (smin == Scalar(0) || smin <= rank_tol * smax) {
    throw SingularMatrixError("polar_project: system is rank-deficient, polar factor is not unique");
  }
  OrthogonalSystem<Scalar> out{f.u * f.v.transpose(), 1};
  out.manifold = det_sign(out.system);
  return out;
}

/// Connected component of O(N) that the projection of g lands in: sgn det(g).
template <typename Derived>
int manifold_of(const Eigen::MatrixBase<Derived>& g) {
  const int s = det_sign(g);
  if (s == 0) throw SingularMatrixError("manifold_of: system is singular");
  return s;
}

/// Coefficients binom(-1/2, n) for n = 0..count-1.
template <typename Scalar>
std::vector<Scalar> inverse_sqrt_binomials(int count) {
  std::vector<Scalar> c(static_cast<std::size_t>(std::max(count, 1)));
  c[0] = Scalar(1);
  for (int n = 1; n < count; ++n) {
    c[static_cast<std::size_t>(n)] =
        c[static_cast<std::size_t>(n - 1)] * (Scalar(-0.5) - Scalar(n) + Scalar(1)) / Scalar(n);
  }
  return c;
}

/// Gershgorin bound max_i sum_j |R_ij| on the spectral radius of a symmetric R.
template <typename Derived>
typename Derived::Scalar gershgorin_bound(const Eigen::MatrixBase<Derived>& r) {
  return r.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Truncated series G sum_{n<=m} binom(-1/2, n) R^n. The number of terms m is
/// the smallest with |binom(-1/2, m+1)| r^{m+1} / (1 - r) <= tol, where r is
/// the Gershgorin bound on R. Refuses (CertificationError) when r >= 1. If more
/// than kMaxSeriesTerms terms would be needed the SVD route is used instead and
/// the certificate says so.
template <typename Derived>
SeriesProjection<typename Derived::Scalar> series_project(const Eigen::MatrixBase<Derived>& g,
                                                          double tol) {
  using Scalar = typename Derived::Scalar;
  require_square(g, "series_project");
  require_finite(g, "series_project");
  if (!(tol > 0)) throw DomainError("series_project: tolerance must be positive");

  const Matrix<Scalar> r = gram_residual(g);
  SeriesProjection<Scalar> out;
  auto& cert = out.certificate;
  cert.gershgorin_bound = static_cast<double>(gershgorin_bound(r));
  if (!(cert.gershgorin_bound < 1.0)) {
    throw CertificationError("series_project: not nearly orthogonal (Gershgorin bound " +
                             std::to_string(cert.gershgorin_bound) + " >= 1)");
  }
  cert.certified = true;

  const double rb = cert.gershgorin_bound;
  const auto coeffs = inverse_sqrt_binomials<double>(kMaxSeriesTerms + 2);
  int m = 0;
  double tail = std::abs(coeffs[1]) * rb / (1.0 - rb);
  while (tail > tol && m < kMaxSeriesTerms) {
    ++m;
    tail = std::abs(coeffs[static_cast<std::size_t>(m + 1)]) * std::pow(rb, m + 1) / (1.0 - rb);
  }
  if (tail > tol) {
    cert.fell_back_to_svd = true;
    cert.terms_used = m;
    cert.truncation_bound = tail;
    out.projection = polar_project(g);
    return out;
  }
  cert.terms_used = m;
  cert.truncation_bound = tail;

  // Horner evaluation of sum_{n=0}^{m} c_n R^n.
  const Eigen::Index n = g.rows();
  Matrix<Scalar> acc = Scalar(coeffs[static_cast<std::size_t>(m)]) * Matrix<Scalar>::Identity(n, n);
  for (int k = m - 1; k >= 0; --k) {
    Matrix<Scalar> next = r * acc;
    next.diagonal().array() += Scalar(coeffs[static_cast<std::size_t>(k)]);
    acc = std::move(next);
  }
  out.projection.system = m == 0 ? Matrix<Scalar>(g) : Matrix<Scalar>(g * acc);
  out.projection.manifold = det_sign(out.projection.system);
  return out;
}

/// The orthogonal system maximally biorthogonal to g (and to its biorthogonal
/// system). It coincides with the nearest orthogonal system, so this is
/// polar_project under a name that states the biorthogonalization intent.
template <typename Derived>
OrthogonalSystem<typename Derived::Scalar> biorthogonalization_targets(
    const Eigen::MatrixBase<Derived>& g) {
  return polar_project(g);
}

}  // namespace orthoreg

#endif  // ORTHOREG_PROJECTION_HPP
