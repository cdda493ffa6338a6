#ifndef ORTHOREG_EXPERIMENT_HPP
#define ORTHOREG_EXPERIMENT_HPP

// Regularization benchmark on random real exponential (Vandermonde) bases:
// E_{ij} = sigma_j^{i-1} with sigma drawn uniformly and sorted, y = E xbar for
// a synthetic xbar, and every method tuned per trial to minimize ||x* - xbar||.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orthoreg/rho_search.hpp"
#include "orthoreg/rng.hpp"

namespace orthoreg {

enum class XbarKind { gaussian, ones, ones_plus_noise, sparse };

std::string_view to_string(XbarKind k);
XbarKind parse_xbar_kind(std::string_view name);

/// How the synthetic solution xbar is drawn.
///  gaussian:        i.i.d. N(0, 1) entries scaled to unit 2-norm
///  ones:            all entries 1
///  ones_plus_noise: 1 + noise_scale * N(0, 1) per entry
///  sparse:          `sparsity` entries N(0, 1) at uniformly drawn positions, rest 0
struct XbarSpec {
  XbarKind kind = XbarKind::ones_plus_noise;
  double noise_scale = 0.05;
  int sparsity = 3;
};

struct ExperimentConfig {
  int n = 18;
  int trials = 200;
  double sigma_low = 0.1;
  double sigma_high = 0.9;
  double rho_tol = 1e-6;
  std::uint64_t seed = 0;
  std::vector<Method> methods = all_methods();
  XbarSpec xbar{};
  int threads = 1;
  int grid_points = 64;
  double quartic_grad_tol = 1e-10;
  long quartic_max_iter = 20000;
  long l1_max_iter = 200;
  double l1_tol = 1e-10;

  void validate() const;
  RhoSearchOptions search_options() const;
};

/// Parses the flat `key = value` config format ('#' starts a comment).
/// Keys are the ExperimentConfig field names, plus xbar, xbar_noise and
/// xbar_sparsity; methods is a comma-separated list. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
std::string format_config(const ExperimentConfig& cfg);

/// E_{ij} = sigma_j^{i-1}, zero-based rows i = 0..N-1.
MatrixXd vandermonde_basis(const std::vector<double>& sigmas);

/// n uniform draws from [low, high], sorted ascending. Draws closer than 1e-12
/// to a neighbour are replaced by fresh draws until all gaps are at least that.
std::vector<double> sample_sigmas(int n, double low, double high, SplitMix64& rng);

VectorXd sample_xbar(int n, const XbarSpec& spec, SplitMix64& rng);

struct MethodOutcome {
  Method method = Method::direct;
  double rho = 0.0;
  double residual = 0.0;
  double condition = 0.0;  // condition number of the system actually solved at rho
  bool ok = false;
  std::string status = "ok";
  int evaluations = 0;
  int failed_evaluations = 0;
};

struct TrialRecord {
  std::uint64_t index = 0;
  std::vector<double> sigmas;
  std::vector<MethodOutcome> outcomes;  // in cfg.methods order

  const MethodOutcome* find(Method m) const;
};

/// Draws the trial's random instance from substream `index` of cfg.seed.
LinearProblem make_trial_problem(const ExperimentConfig& cfg, std::uint64_t index,
                                 std::vector<double>* sigmas = nullptr);

/// Runs every configured method on a given problem. Failures are recorded in
/// the outcome, never thrown.
TrialRecord run_trial_on(const ExperimentConfig& cfg, const LinearProblem& problem,
                         std::uint64_t index = 0, std::vector<double> sigmas = {});

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t index);

/// All trials, in index order. Trials are spread over cfg.threads workers;
/// the result does not depend on the thread count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

struct MethodSummary {
  Method method = Method::direct;
  double mean_residual = 0.0;
  double mean_rho = 0.0;
  double median_residual = 0.0;  // extension beyond the mean-only table
  int successes = 0;
  int failures = 0;
};

/// Per-method means over successful trials (failures are counted, not averaged).
std::vector<MethodSummary> aggregate(const std::vector<TrialRecord>& records);

void write_table1_csv(std::ostream& out, const std::vector<MethodSummary>& table);
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);

struct TradeoffPoint {
  double rho = 0.0;
  double residual = 0.0;
  double condition = 0.0;  // +inf when the regularized system is exactly singular
  bool ok = true;
};

/// 0 followed by `points - 1` log-spaced values from 1e-12 to 1.
std::vector<double> default_rho_grid(int points = 121);

std::vector<TradeoffPoint> tradeoff_curve(Method method, const LinearProblem& problem,
                                          const std::vector<double>& rho_grid,
                                          const RhoSearchOptions& opts = {});

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffPoint>& curve);

struct ElementSeries {
  int index = 0;                   // column of E (zero-based)
  std::vector<double> original;    // E(:, index)
  std::vector<double> regularized; // H(rho)(:, index)
};

std::vector<ElementSeries> element_curves(Method method, const MatrixXd& e, double rho,
                                          const std::vector<int>& indices,
                                          const RhoSearchOptions& opts = {});

void write_elements_csv(std::ostream& out, const std::vector<ElementSeries>& series);

}  // namespace orthoreg

#endif  // ORTHOREG_EXPERIMENT_HPP
