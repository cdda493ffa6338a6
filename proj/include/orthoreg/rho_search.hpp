#ifndef ORTHOREG_RHO_SEARCH_HPP
#define ORTHOREG_RHO_SEARCH_HPP

// Per-method regularized solves of E x = y at a given rho, and the line
// search that picks rho to minimize ||x*(rho) - xbar||_2.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orthoreg/baselines.hpp"
#include "orthoreg/linalg.hpp"

namespace orthoreg {

enum class Method { direct, homotopy, quartic, tikhonov, bpdn, dantzig };

std::string_view to_string(Method m);
/// Throws DomainError on an unknown name.
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

/// Methods that build a regularized system H(rho) and solve H x = y.
bool builds_system(Method m);

/// E x = y with known ground truth xbar.
struct LinearProblem {
  MatrixXd e;
  VectorXd y;
  VectorXd truth;

  void validate() const;
};

struct RhoSearchOptions {
  double tol = 1e-6;
  int grid_points = 64;
  double weight_max = 1.0;  // initial upper end of the domain for weight-type rho
  int max_expansions = 3;   // x4 growth of that domain while the minimizer sits on its edge
  double quartic_grad_tol = 1e-10;
  long quartic_max_iter = 20000;
  SolverOptions l1{};
};

/// Solves one LinearProblem with one method at arbitrary rho. Per-problem work
/// (polar factor, normal matrix) is done once at construction.
class MethodEvaluator {
 public:
  MethodEvaluator(Method method, LinearProblem problem, RhoSearchOptions opts = {});

  Method method() const { return method_; }
  const LinearProblem& problem() const { return problem_; }

  /// Regularized solution x*(rho).
  VectorXd solve(double rho) const;
  /// ||x*(rho) - xbar||_2.
  double residual(double rho) const;
  /// The matrix whose system is actually solved at rho: H(rho) for the
  /// structure-preserving methods, E^T E + rho^2 I for Tikhonov, E^T E for
  /// the Dantzig selector and E otherwise.
  MatrixXd system(double rho) const;
  /// Largest admissible rho before any domain expansion.
  double domain_max() const;

 private:
  Method method_;
  LinearProblem problem_;
  RhoSearchOptions opts_;
  MatrixXd polar_;  // homotopy only
};

struct RhoSearchResult {
  double rho = 0.0;
  double residual = 0.0;
  int evaluations = 0;
  int failed_evaluations = 0;
  std::optional<std::string> last_failure;
};

/// Coarse uniform grid over the method's rho domain followed by golden-section
/// refinement to opts.tol around the best grid point. Evaluations that throw
/// are skipped; if all of them fail the search throws ConvergenceError.
RhoSearchResult rho_search(const MethodEvaluator& evaluator, const RhoSearchOptions& opts = {});
RhoSearchResult rho_search(Method method, const LinearProblem& problem, const RhoSearchOptions& opts = {});

}  // namespace orthoreg

#endif  // ORTHOREG_RHO_SEARCH_HPP
