#ifndef ORTHOREG_LINALG_HPP
#define ORTHOREG_LINALG_HPP

// Dense real linear algebra primitives: one-sided Jacobi SVD, pivoted
// elimination, inverse-transpose and Gram residuals. Everything is templated
// on the scalar type and accepts arbitrary Eigen expressions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "orthoreg/errors.hpp"

namespace orthoreg {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

/// Pivots below this fraction of ||A||_F count as numerically zero in
/// det_sign and biorthogonal.
inline constexpr double kPivotTolerance = 1e-14;

/// Singular value treated as exactly zero by condition_number.
inline constexpr double kZeroSingularValue = 1e-300;

template <typename Scalar>
struct SvdFactors {
  Matrix<Scalar> u;
  Vector<Scalar> sigma;  // descending, nonnegative
  Matrix<Scalar> v;

  Matrix<Scalar> reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }
};

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": matrix has non-finite entries");
  }
}

/// Splits the matrix form of a system into its vectors (column k -> vector k).
template <typename Derived>
std::vector<Vector<typename Derived::Scalar>> columns_of(const Eigen::MatrixBase<Derived>& a) {
  std::vector<Vector<typename Derived::Scalar>> out;
  out.reserve(static_cast<std::size_t>(a.cols()));
  for (Eigen::Index k = 0; k < a.cols(); ++k) out.emplace_back(a.col(k));
  return out;
}

/// Assembles the matrix form of a system of N vectors of length N.
template <typename Scalar>
Matrix<Scalar> from_columns(const std::vector<Vector<Scalar>>& vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Matrix<Scalar> a(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (vectors[static_cast<std::size_t>(k)].size() != n) {
      throw DimensionError("from_columns: a system of N vectors needs vectors of length N");
    }
    a.col(k) = vectors[static_cast<std::size_t>(k)];
  }
  return a;
}

/// Singular value decomposition of a square matrix by one-sided (Hestenes)
/// Jacobi rotations. Column pairs are rotated until every pair is orthogonal
/// to working precision relative to the column norms, which keeps the small
/// singular values of graded matrices accurate.
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "svd");
  require_finite(a, "svd");
  const Eigen::Index n = a.rows();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  Matrix<Scalar> w = a;
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const long max_sweeps = 30L * n * n;
  bool converged = false;
  for (long sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar alpha = w.col(p).squaredNorm();
        const Scalar beta = w.col(q).squaredNorm();
        const Scalar gamma = w.col(p).dot(w.col(q));
        if (gamma == Scalar(0) || std::abs(gamma) <= eps * std::sqrt(alpha) * std::sqrt(beta)) {
          continue;
        }
        converged = false;
        const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
        const Scalar t = (zeta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = c * t;
        for (Eigen::Index i = 0; i < n; ++i) {
          const Scalar wp = w(i, p);
          const Scalar wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
          const Scalar vp = v(i, p);
          const Scalar vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("svd: Jacobi sweeps did not converge within " +
                           std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Vector<Scalar> norms = w.colwise().norm().transpose();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return norms(i) > norms(j); });

  SvdFactors<Scalar> out{Matrix<Scalar>::Zero(n, n), Vector<Scalar>(n), Matrix<Scalar>(n, n)};
  std::vector<bool> filled(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.sigma(k) = norms(src);
    out.v.col(k) = v.col(src);
    if (norms(src) > std::numeric_limits<Scalar>::min()) {
      out.u.col(k) = w.col(src) / norms(src);
      filled[static_cast<std::size_t>(k)] = true;
    }
  }
  // Exactly zero columns: complete U with canonical vectors orthogonalized
  // against the columns already present.
  Eigen::Index next_canonical = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (filled[static_cast<std::size_t>(k)]) continue;
    for (; next_canonical < n; ++next_canonical) {
      Vector<Scalar> cand = Vector<Scalar>::Unit(n, next_canonical);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < n; ++j) {
          if (filled[static_cast<std::size_t>(j)]) cand -= out.u.col(j).dot(cand) * out.u.col(j);
        }
      }
      const Scalar nrm = cand.norm();
      if (nrm > Scalar(0.5)) {
        out.u.col(k) = cand / nrm;
        filled[static_cast<std::size_t>(k)] = true;
        ++next_canonical;
        break;
      }
    }
  }
  return out;
}

/// sigma_max / sigma_min, or +infinity when sigma_min is zero.
template <typename Derived>
typename Derived::Scalar condition_number(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto f = svd(a);
  const Scalar smin = f.sigma(f.sigma.size() - 1);
  if (smin <= Scalar(kZeroSingularValue)) return std::numeric_limits<Scalar>::infinity();
  return f.sigma(0) / smin;
}

namespace detail {

/// In-place LU factorization with partial pivoting, PA = LU.
template <typename Scalar>
struct PivotedLu {
  Matrix<Scalar> lu;
  std::vector<Eigen::Index> perm;  // row i of PA is row perm[i] of A
  int parity = 1;
  Scalar min_abs_pivot = std::numeric_limits<Scalar>::infinity();
  Eigen::Index zero_pivot_at = -1;  // first column with an exactly zero pivot

  explicit PivotedLu(Matrix<Scalar> a) : lu(std::move(a)), perm(static_cast<std::size_t>(lu.rows())) {
    const Eigen::Index n = lu.rows();
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index piv = k;
      lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&piv);
      piv += k;
      if (piv != k) {
        lu.row(k).swap(lu.row(piv));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
        parity = -parity;
      }
      const Scalar p = lu(k, k);
      min_abs_pivot = std::min(min_abs_pivot, std::abs(p));
      if (p == Scalar(0)) {
        if (zero_pivot_at < 0) zero_pivot_at = k;
        continue;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Scalar m = lu(i, k) / p;
        lu(i, k) = m;
        if (m != Scalar(0)) lu.row(i).tail(n - k - 1) -= m * lu.row(k).tail(n - k - 1);
      }
    }
  }

  Matrix<Scalar> solve(const Matrix<Scalar>& rhs) const {
    const Eigen::Index n = lu.rows();
    Matrix<Scalar> x(n, rhs.cols());
    for (Eigen::Index i = 0; i < n; ++i) x.row(i) = rhs.row(perm[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) x.row(i) -= lu(i, j) * x.row(j);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index j = i + 1; j < n; ++j) x.row(i) -= lu(i, j) * x.row(j);
      x.row(i) /= lu(i, i);
    }
    return x;
  }
};

}  // namespace detail

/// Sign of det(a) from pivoted elimination; 0 when some pivot falls below
/// kPivotTolerance * ||a||_F.
template <typename Derived>
int det_sign(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "det_sign");
  const detail::PivotedLu<Scalar> f{Matrix<Scalar>(a)};
  const Scalar threshold = Scalar(kPivotTolerance) * a.norm();
  if (f.zero_pivot_at >= 0 || f.min_abs_pivot < threshold) return 0;
  int sign = f.parity;
  for (Eigen::Index k = 0; k < f.lu.rows(); ++k) {
    if (f.lu(k, k) < Scalar(0)) sign = -sign;
  }
  return sign;
}

/// Gaussian elimination with partial pivoting. Ill-conditioned systems still
/// produce a best-effort answer; only an exactly zero pivot is an error.
template <typename DerivedA, typename DerivedY>
Vector<typename DerivedA::Scalar> solve_gaussian(const Eigen::MatrixBase<DerivedA>& a,
                                                 const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedA::Scalar;
  require_square(a, "solve_gaussian");
  if (y.size() != a.rows()) {
    throw DimensionError("solve_gaussian: right-hand side has length " + std::to_string(y.size()) +
                         ", expected " + std::to_string(a.rows()));
  }
  const detail::PivotedLu<Scalar> f{Matrix<Scalar>(a)};
  if (f.zero_pivot_at >= 0) {
    throw SingularMatrixError("solve_gaussian: zero pivot in column " +
                              std::to_string(f.zero_pivot_at));
  }
  Vector<Scalar> x = f.solve(Matrix<Scalar>(y));
  if (!x.allFinite()) throw SingularMatrixError("solve_gaussian: solution overflowed");
  return x;
}

/// The biorthogonal system (A^{-1})^T, i.e. the unique B with B^T A = I.
template <typename Derived>
Matrix<typename Derived::Scalar> biorthogonal(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "biorthogonal");
  const detail::PivotedLu<Scalar> f{Matrix<Scalar>(a.transpose())};
  if (f.zero_pivot_at >= 0 || f.min_abs_pivot < Scalar(kPivotTolerance) * a.norm()) {
    throw SingularMatrixError("biorthogonal: matrix is numerically singular");
  }
  return f.solve(Matrix<Scalar>::Identity(a.rows(), a.cols()));
}

/// Grammian residual A^T A - I, symmetrized.
template <typename Derived>
Matrix<typename Derived::Scalar> gram_residual(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_square(a, "gram_residual");
  Matrix<Scalar> r = a.transpose() * a;
  r -= Matrix<Scalar>::Identity(a.rows(), a.cols());
  return Scalar(0.5) * (r + r.transpose());
}

}  // namespace orthoreg

#endif  // ORTHOREG_LINALG_HPP
