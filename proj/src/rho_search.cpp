#include "orthoreg/rho_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orthoreg/projection.hpp"
#include "orthoreg/regularizers.hpp"

namespace orthoreg {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::direct: return "direct";
    case Method::homotopy: return "homotopy";
    case Method::quartic: return "quartic";
    case Method::tikhonov: return "tikhonov";
    case Method::bpdn: return "bpdn";
    case Method::dantzig: return "dantzig";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw DomainError("unknown method '" + std::string(name) +
                    "' (expected direct, homotopy, quartic, tikhonov, bpdn or dantzig)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::direct,   Method::homotopy, Method::quartic,
                                           Method::tikhonov, Method::bpdn,     Method::dantzig};
  return methods;
}

bool builds_system(Method m) { return m == Method::homotopy || m == Method::quartic; }

void LinearProblem::validate() const {
  require_square(e, "LinearProblem");
  require_finite(e, "LinearProblem");
  if (y.size() != e.rows() || truth.size() != e.rows()) {
    throw DimensionError("LinearProblem: y and truth must have length " + std::to_string(e.rows()));
  }
}

MethodEvaluator::MethodEvaluator(Method method, LinearProblem problem, RhoSearchOptions opts)
    : method_(method), problem_(std::move(problem)), opts_(std::move(opts)) {
  problem_.validate();
  if (method_ == Method::homotopy) polar_ = polar_project(problem_.e, 0.0).system;
}

double MethodEvaluator::domain_max() const {
  switch (method_) {
    case Method::direct: return 0.0;
    case Method::homotopy: return 1.0;
    default: return opts_.weight_max;
  }
}

MatrixXd MethodEvaluator::system(double rho) const {
  const MatrixXd& e = problem_.e;
  switch (method_) {
    case Method::homotopy: return homotopy_system(HomotopyParam::homotopy(rho), e, polar_);
    case Method::quartic: {
      auto sol = solve_quartic(e, HomotopyParam::quartic(rho), opts_.quartic_grad_tol,
                               opts_.quartic_max_iter);
      return std::move(sol.system);
    }
    case Method::tikhonov: {
      MatrixXd normal = e.transpose() * e;
      normal.diagonal().array() += rho * rho;
      return normal;
    }
    case Method::dantzig: return e.transpose() * e;
    case Method::direct:
    case Method::bpdn: return e;
  }
  return e;
}

VectorXd MethodEvaluator::solve(double rho) const {
  const MatrixXd& e = problem_.e;
  const VectorXd& y = problem_.y;
  switch (method_) {
    case Method::direct: return solve_gaussian(e, y);
    case Method::homotopy:
    case Method::quartic: return solve_gaussian(system(rho), y);
    case Method::tikhonov: return tikhonov(e, y, rho);
    case Method::bpdn: return bpdn(e, y, rho, opts_.l1).x;
    case Method::dantzig: return dantzig(e, y, rho, opts_.l1).x;
  }
  return {};
}

double MethodEvaluator::residual(double rho) const {
  return (solve(rho) - problem_.truth).norm();
}

namespace {

class SafeObjective {
 public:
  explicit SafeObjective(const MethodEvaluator& ev, RhoSearchResult& stats) : ev_(ev), stats_(stats) {}

  double operator()(double rho) {
    ++stats_.evaluations;
    try {
      const double r = ev_.residual(rho);
      if (std::isfinite(r)) return r;
      stats_.last_failure = "non-finite residual";
    } catch (const Error& e) {
      stats_.last_failure = e.what();
    }
    ++stats_.failed_evaluations;
    return std::numeric_limits<double>::infinity();
  }

 private:
  const MethodEvaluator& ev_;
  RhoSearchResult& stats_;
};

}  // namespace

RhoSearchResult rho_search(const MethodEvaluator& evaluator, const RhoSearchOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("rho_search: tolerance must be positive");
  if (opts.grid_points < 3) throw DomainError("rho_search: need at least 3 grid points");

  RhoSearchResult out;
  SafeObjective f(evaluator, out);
  if (evaluator.method() == Method::direct) {
    out.residual = f(0.0);
    if (!std::isfinite(out.residual)) {
      throw ConvergenceError("rho_search: direct solve failed: " + out.last_failure.value_or(""));
    }
    return out;
  }

  const bool expandable = evaluator.method() != Method::homotopy;
  double hi = evaluator.domain_max();
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t best = 0;
  for (int expansion = 0;; ++expansion) {
    grid.resize(static_cast<std::size_t>(opts.grid_points));
    values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid[i] = hi * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
      values[i] = f(grid[i]);
    }
    best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    const bool on_edge = best + 1 == grid.size();
    if (!expandable || !on_edge || expansion >= opts.max_expansions) break;
    hi *= 4.0;
  }
  if (!std::isfinite(values[best])) {
    throw ConvergenceError("rho_search: every evaluation failed for " +
                           std::string(to_string(evaluator.method())) + ": " +
                           out.last_failure.value_or(""));
  }
  out.rho = grid[best];
  out.residual = values[best];

  // Golden-section refinement inside the neighbouring grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > opts.tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  for (const auto& [rho, value] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, f(mid)}}) {
    if (value < out.residual) {
      out.rho = rho;
      out.residual = value;
    }
  }
  return out;
}

RhoSearchResult rho_search(Method method, const LinearProblem& problem, const RhoSearchOptions& opts) {
  return rho_search(MethodEvaluator(method, problem, opts), opts);
}

}  // namespace orthoreg
