#ifndef ORTHOREG_REGULARIZERS_HPP
#define ORTHOREG_REGULARIZERS_HPP

// Structure-preserving regularizers. Both produce a regularized system H(rho)
// that replaces G in G x = y:
//
//  * homotopy_system: the straight path (1 - rho) g + rho z from g to its polar
//    factor z, rho in [0, 1];
//  * solve_quartic: the minimizer of epsilon_ls(g, h) + rho epsilon_bo(h, h),
//    rho >= 0, by backtracking gradient descent started at h = g.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "orthoreg/linalg.hpp"
#include "orthoreg/measures.hpp"
#include "orthoreg/projection.hpp"

namespace orthoreg {

enum class ParamKind { homotopy, quartic_weight, baseline_weight };

/// A regularization parameter tagged with the method it parameterizes.
/// Homotopy parameters live in [0, 1], weights in [0, inf).
class HomotopyParam {
 public:
  HomotopyParam(double rho, ParamKind kind) : rho_(rho), kind_(kind) {
    if (!std::isfinite(rho) || rho < 0.0 || (kind == ParamKind::homotopy && rho > 1.0)) {
      throw DomainError("HomotopyParam: rho = " + std::to_string(rho) + " outside the domain of " +
                        (kind == ParamKind::homotopy ? "[0, 1]" : "[0, inf)"));
    }
  }

  static HomotopyParam homotopy(double rho) { return {rho, ParamKind::homotopy}; }
  static HomotopyParam quartic(double rho) { return {rho, ParamKind::quartic_weight}; }
  static HomotopyParam baseline(double rho) { return {rho, ParamKind::baseline_weight}; }

  double rho() const { return rho_; }
  ParamKind kind() const { return kind_; }

 private:
  double rho_;
  ParamKind kind_;
};

struct OptimizerReport {
  long iterations = 0;
  double final_objective = 0.0;
  double final_gradient_norm = 0.0;
  double gradient_tolerance = 0.0;  // the threshold final_gradient_norm was compared with
  bool converged = false;
  double initial_step = 1.0;
  double final_step = 1.0;
};

/// Raised when the quartic objective stops being finite; carries the
/// optimizer state at the point of failure.
class DivergenceError : public ConvergenceError {
 public:
  DivergenceError(const std::string& what, OptimizerReport report)
      : ConvergenceError(what), report_(report) {}
  const OptimizerReport& report() const { return report_; }

 private:
  OptimizerReport report_;
};

template <typename Scalar>
struct QuarticSolution {
  Matrix<Scalar> system;
  OptimizerReport report;
};

namespace detail {

inline void require_kind(const HomotopyParam& p, ParamKind kind, const char* what) {
  if (p.kind() != kind) throw DomainError(std::string(what) + ": parameter has the wrong kind");
}

// Smallest t > 0 where d/dt [t (c1 + t (c2 + t (c3 + t c4)))] changes sign,
// given c1 < 0; +inf if the polynomial keeps decreasing. The derivative is
// monotone between the roots of its own derivative, so bracket there and bisect.
inline double first_line_minimum(double c1, double c2, double c3, double c4) {
  auto slope = [&](double t) { return c1 + t * (2 * c2 + t * (3 * c3 + t * 4 * c4)); };
  auto bisect = [&](double lo, double hi) {
    for (int i = 0; i < 200 && lo < hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (slope(mid) < 0 ? lo : hi) = mid;
    }
    return hi;
  };

  // Turning points of the slope: roots of 2 c2 + 6 c3 t + 12 c4 t^2.
  double turns[2];
  int count = 0;
  const double qa = 12 * c4, qb = 6 * c3, qc = 2 * c2;
  if (qa != 0) {
    const double disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
      const double r = std::sqrt(disc);
      const double q = -0.5 * (qb + std::copysign(r, qb));
      double r1 = q / qa, r2 = q != 0 ? qc / q : r1;
      if (r1 > r2) std::swap(r1, r2);
      if (r1 > 0) turns[count++] = r1;
      if (r2 > 0 && r2 != r1) turns[count++] = r2;
    }
  } else if (qb != 0 && -qc / qb > 0) {
    turns[count++] = -qc / qb;
  }

  double lo = 0;
  for (int i = 0; i < count; ++i) {
    if (slope(turns[i]) >= 0) return bisect(lo, turns[i]);
    lo = turns[i];
  }
  double hi = std::max(1.0, 2 * lo);
  while (slope(hi) < 0) {
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
    hi *= 2;
  }
  return bisect(lo, hi);
}

}  // namespace detail

/// Point rho on the path from g to its precomputed polar factor z.
/// rho = 0 returns g and rho = 1 returns z, bit for bit.
template <typename DG, typename DZ>
Matrix<typename DG::Scalar> homotopy_system(const HomotopyParam& rho, const Eigen::MatrixBase<DG>& g,
                                            const Eigen::MatrixBase<DZ>& z) {
  using Scalar = typename DG::Scalar;
  detail::require_kind(rho, ParamKind::homotopy, "homotopy_system");
  detail::require_same_system_shape(g, z, "homotopy_system");
  const Scalar r = Scalar(rho.rho());
  if (r == Scalar(0)) return g;
  if (r == Scalar(1)) return z;
  return (Scalar(1) - r) * g + r * z;
}

/// Homotopy from g towards its polar factor. Only exactly singular g is
/// rejected: severely ill-conditioned systems are the intended input.
template <typename DG>
Matrix<typename DG::Scalar> homotopy_system(const HomotopyParam& rho, const Eigen::MatrixBase<DG>& g) {
  using Scalar = typename DG::Scalar;
  detail::require_kind(rho, ParamKind::homotopy, "homotopy_system");
  const auto z = polar_project(g, Scalar(0));
  return homotopy_system(rho, g, z.system);
}

/// The same path started from the biorthogonal system of g, which preserves
/// the geometry of the dual basis instead.
template <typename DG>
Matrix<typename DG::Scalar> biorthogonal_homotopy_system(const HomotopyParam& rho,
                                                         const Eigen::MatrixBase<DG>& g) {
  return homotopy_system(rho, biorthogonal(g));
}

/// epsilon_ls(g, h) + rho epsilon_bo(h, h).
template <typename DH, typename DG>
typename DH::Scalar quartic_objective(const Eigen::MatrixBase<DH>& h, const Eigen::MatrixBase<DG>& g,
                                      const HomotopyParam& rho) {
  using Scalar = typename DH::Scalar;
  detail::require_kind(rho, ParamKind::quartic_weight, "quartic_objective");
  return epsilon_ls(g, h) + Scalar(rho.rho()) * epsilon_bo(h, h);
}

/// Gradient of quartic_objective in h, in matrix form: 2 (H - G) + 4 rho H (H^T H - I).
template <typename DH, typename DG>
Matrix<typename DH::Scalar> quartic_gradient(const Eigen::MatrixBase<DH>& h,
                                             const Eigen::MatrixBase<DG>& g, const HomotopyParam& rho) {
  using Scalar = typename DH::Scalar;
  detail::require_kind(rho, ParamKind::quartic_weight, "quartic_gradient");
  detail::require_same_system_shape(g, h, "quartic_gradient");
  return Scalar(2) * (h - g) + Scalar(rho.rho()) * grad_epsilon_bo_self_all(h);
}

/// Minimizes quartic_objective(., g, rho) by gradient descent with Armijo
/// backtracking (c = 1e-4, halving), starting from `initial`.
///
/// The first trial step is 1; later iterations start from twice the previously
/// accepted step, capped at 1. Stops when ||grad||_F <= grad_tol (1 + |f|).
///
/// Along a search line the objective is a quartic polynomial in the step, so
/// the Armijo test uses f(h - tD) - f(h) expanded in powers of t. Subtracting
/// two evaluated objectives instead loses every decrease below about
/// eps * |f|, which stalls the descent near ||grad|| ~ sqrt(eps * |f|).
/// Every accepted step therefore decreases the objective in exact arithmetic;
/// the re-evaluated values can still move by an ulp or so.
///
/// The objective is convex for rho <= 1/2. Above that it has one local
/// minimum per sign pattern of the singular values, and a full Armijo step
/// can jump from one well into another. So each trial step is capped at the
/// first minimizer of the line polynomial, and a step never crosses a ridge
/// along its line. That alone does not stop one singular value from passing
/// its own ridge while the sum still decreases, so for rho > 1/2 a step that
/// flips a reliably computed sign of det H is also rejected. Gradient flow
/// from h = g never moves a singular value through zero.
template <typename DG, typename DI>
QuarticSolution<typename DG::Scalar> solve_quartic(const Eigen::MatrixBase<DG>& g,
                                                   const HomotopyParam& rho, double grad_tol,
                                                   long max_iter, const Eigen::MatrixBase<DI>& initial) {
  using Scalar = typename DG::Scalar;
  detail::require_kind(rho, ParamKind::quartic_weight, "solve_quartic");
  detail::require_same_system_shape(g, initial, "solve_quartic");
  require_finite(g, "solve_quartic");
  if (!(grad_tol > 0)) throw DomainError("solve_quartic: gradient tolerance must be positive");

  constexpr double kArmijo = 1e-4;
  constexpr double kBacktrack = 0.5;
  constexpr double kMinStep = 1e-30;

  const Scalar w = Scalar(rho.rho());
  const Eigen::Index n = g.rows();
  const Matrix<Scalar> eye = Matrix<Scalar>::Identity(n, n);

  QuarticSolution<Scalar> out{Matrix<Scalar>(initial), {}};
  OptimizerReport& rep = out.report;
  Matrix<Scalar>& h = out.system;
  Matrix<Scalar> diff = h - g;
  Matrix<Scalar> resid = h.transpose() * h - eye;
  Scalar f = diff.squaredNorm() + w * resid.squaredNorm();
  double step = 1.0;
  rep.initial_step = step;
  const bool guard_sign = w > Scalar(0.5);
  int sign = guard_sign ? det_sign(h) : 0;
  for (;;) {
    rep.final_objective = static_cast<double>(f);
    if (!std::isfinite(rep.final_objective)) {
      throw DivergenceError("solve_quartic: objective became non-finite", rep);
    }
    // R is symmetric up to rounding, so H R is the matrix-form gradient of epsilon_bo(h, h) / 4.
    const Matrix<Scalar> grad = Scalar(2) * diff + Scalar(4) * w * (h * resid);
    const Scalar gnorm2 = grad.squaredNorm();
    rep.final_gradient_norm = std::sqrt(static_cast<double>(gnorm2));
    rep.gradient_tolerance = grad_tol * (1.0 + std::abs(rep.final_objective));
    if (rep.final_gradient_norm <= rep.gradient_tolerance) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= max_iter) break;

    // With D = grad: (H - tD)^T (H - tD) - I = R + t A + t^2 B.
    const Matrix<Scalar> htd = h.transpose() * grad;
    const Matrix<Scalar> a = -(htd + htd.transpose());
    const Matrix<Scalar> b = grad.transpose() * grad;
    const Scalar c1 = Scalar(-2) * (diff.cwiseProduct(grad)).sum() + w * Scalar(2) * resid.cwiseProduct(a).sum();
    const Scalar c2 = gnorm2 + w * (a.squaredNorm() + Scalar(2) * resid.cwiseProduct(b).sum());
    const Scalar c3 = w * Scalar(2) * a.cwiseProduct(b).sum();
    const Scalar c4 = w * b.squaredNorm();
    auto change = [&](Scalar t) { return t * (c1 + t * (c2 + t * (c3 + t * c4))); };

    step = std::min(step, detail::first_line_minimum(static_cast<double>(c1), static_cast<double>(c2),
                                                     static_cast<double>(c3), static_cast<double>(c4)));
    bool accepted = false;
    while (step >= kMinStep) {
      const Scalar t = Scalar(step);
      const Scalar df = change(t);
      if (std::isfinite(static_cast<double>(df)) && df <= -Scalar(kArmijo) * t * gnorm2) {
        if (sign != 0) {
          const int next = det_sign(Matrix<Scalar>(h - t * grad));
          if (next == -sign) {
            step *= kBacktrack;
            continue;
          }
        }
        h -= t * grad;
        diff = h - g;
        resid = h.transpose() * h - eye;
        f = diff.squaredNorm() + w * resid.squaredNorm();
        if (guard_sign) sign = det_sign(h);
        accepted = true;
        break;
      }
      step *= kBacktrack;
    }
    ++rep.iterations;
    if (!accepted) break;  // no decrease left even in exact arithmetic along this line
    rep.final_step = step;
    step = std::min(1.0, 2.0 * step);
  }
  return out;
}

template <typename DG>
QuarticSolution<typename DG::Scalar> solve_quartic(const Eigen::MatrixBase<DG>& g,
                                                   const HomotopyParam& rho, double grad_tol,
                                                   long max_iter) {
  return solve_quartic(g, rho, grad_tol, max_iter, g);
}

}  // namespace orthoreg

#endif  // ORTHOREG_REGULARIZERS_HPP
