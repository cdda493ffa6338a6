#include "orthoreg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "orthoreg/io.hpp"

namespace orthoreg {

std::string_view to_string(XbarKind k) {
  switch (k) {
    case XbarKind::gaussian: return "gaussian";
    case XbarKind::ones: return "ones";
    case XbarKind::ones_plus_noise: return "ones_plus_noise";
    case XbarKind::sparse: return "sparse";
  }
  return "unknown";
}

XbarKind parse_xbar_kind(std::string_view name) {
  for (auto k : {XbarKind::gaussian, XbarKind::ones, XbarKind::ones_plus_noise, XbarKind::sparse}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown xbar kind '" + std::string(name) +
                    "' (expected gaussian, ones, ones_plus_noise or sparse)");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw DomainError("config: n must be at least 1");
  if (trials < 1) throw DomainError("config: trials must be at least 1");
  if (!(0.0 < sigma_low && sigma_low < sigma_high && sigma_high < 1.0)) {
    throw DomainError("config: need 0 < sigma_low < sigma_high < 1");
  }
  if (!(rho_tol > 0.0)) throw DomainError("config: rho_tol must be positive");
  if (methods.empty()) throw DomainError("config: methods must not be empty");
  if (threads < 1) throw DomainError("config: threads must be at least 1");
  if (grid_points < 3) throw DomainError("config: grid_points must be at least 3");
  if (xbar.noise_scale < 0.0) throw DomainError("config: xbar_noise must be nonnegative");
  if (xbar.sparsity < 1 || xbar.sparsity > n) throw DomainError("config: xbar_sparsity must be in [1, n]");
  if (!(quartic_grad_tol > 0.0) || quartic_max_iter < 1) {
    throw DomainError("config: quartic solver settings must be positive");
  }
  if (!(l1_tol > 0.0) || l1_max_iter < 1) throw DomainError("config: l1 solver settings must be positive");
}

RhoSearchOptions ExperimentConfig::search_options() const {
  RhoSearchOptions o;
  o.tol = rho_tol;
  o.grid_points = grid_points;
  o.quartic_grad_tol = quartic_grad_tol;
  o.quartic_max_iter = quartic_max_iter;
  o.l1.max_iter = l1_max_iter;
  o.l1.tol = l1_tol;
  return o;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T v{};
  in >> v;
  if (!in || !(in >> std::ws).eof()) {
    throw DomainError("config: invalid value '" + value + "' for key '" + key + "'");
  }
  return v;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") cfg.n = parse_number<int>(key, value);
    else if (key == "trials") cfg.trials = parse_number<int>(key, value);
    else if (key == "sigma_low") cfg.sigma_low = parse_number<double>(key, value);
    else if (key == "sigma_high") cfg.sigma_high = parse_number<double>(key, value);
    else if (key == "rho_tol") cfg.rho_tol = parse_number<double>(key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") cfg.threads = parse_number<int>(key, value);
    else if (key == "grid_points") cfg.grid_points = parse_number<int>(key, value);
    else if (key == "quartic_grad_tol") cfg.quartic_grad_tol = parse_number<double>(key, value);
    else if (key == "quartic_max_iter") cfg.quartic_max_iter = parse_number<long>(key, value);
    else if (key == "l1_max_iter") cfg.l1_max_iter = parse_number<long>(key, value);
    else if (key == "l1_tol") cfg.l1_tol = parse_number<double>(key, value);
    else if (key == "xbar") cfg.xbar.kind = parse_xbar_kind(value);
    else if (key == "xbar_noise") cfg.xbar.noise_scale = parse_number<double>(key, value);
    else if (key == "xbar_sparsity") cfg.xbar.sparsity = parse_number<int>(key, value);
    else if (key == "methods") {
      cfg.methods.clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        item = trim(item);
        if (!item.empty()) cfg.methods.push_back(parse_method(item));
      }
    } else {
      throw DomainError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path + "'");
  return parse_config(in);
}

std::string format_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "n = " << cfg.n << '\n'
      << "trials = " << cfg.trials << '\n'
      << "sigma_low = " << format_double(cfg.sigma_low) << '\n'
      << "sigma_high = " << format_double(cfg.sigma_high) << '\n'
      << "rho_tol = " << format_double(cfg.rho_tol) << '\n'
      << "seed = " << cfg.seed << '\n'
      << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    out << (i ? "," : "") << to_string(cfg.methods[i]);
  }
  out << '\n'
      << "xbar = " << to_string(cfg.xbar.kind) << '\n'
      << "xbar_noise = " << format_double(cfg.xbar.noise_scale) << '\n'
      << "xbar_sparsity = " << cfg.xbar.sparsity << '\n'
      << "threads = " << cfg.threads << '\n'
      << "grid_points = " << cfg.grid_points << '\n'
      << "quartic_grad_tol = " << format_double(cfg.quartic_grad_tol) << '\n'
      << "quartic_max_iter = " << cfg.quartic_max_iter << '\n'
      << "l1_max_iter = " << cfg.l1_max_iter << '\n'
      << "l1_tol = " << format_double(cfg.l1_tol) << '\n';
  return out.str();
}

MatrixXd vandermonde_basis(const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw DimensionError("vandermonde_basis: need at least one sigma");
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    if (!(sigmas[j] > 0.0 && sigmas[j] < 1.0)) {
      throw DomainError("vandermonde_basis: sigma values must lie in (0, 1)");
    }
    if (j > 0 && !(sigmas[j - 1] < sigmas[j])) {
      throw DomainError("vandermonde_basis: sigma values must be strictly increasing");
    }
  }
  const auto n = static_cast<Eigen::Index>(sigmas.size());
  MatrixXd e(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double s = sigmas[static_cast<std::size_t>(j)];
    double p = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      e(i, j) = p;
      p *= s;
    }
  }
  return e;
}

std::vector<double> sample_sigmas(int n, double low, double high, SplitMix64& rng) {
  if (n < 1) throw DomainError("sample_sigmas: n must be at least 1");
  constexpr double kMinGap = 1e-12;
  std::vector<double> s(static_cast<std::size_t>(n));
  for (auto& v : s) v = rng.uniform(low, high);
  for (;;) {
    std::sort(s.begin(), s.end());
    bool clean = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] - s[i - 1] < kMinGap) {
        s[i] = rng.uniform(low, high);
        clean = false;
      }
    }
    if (clean) return s;
  }
}

VectorXd sample_xbar(int n, const XbarSpec& spec, SplitMix64& rng) {
  VectorXd x = VectorXd::Zero(n);
  switch (spec.kind) {
    case XbarKind::gaussian: {
      for (int i = 0; i < n; ++i) x(i) = rng.normal();
      const double nrm = x.norm();
      if (nrm > 0.0) x /= nrm;
      break;
    }
    case XbarKind::ones: x.setOnes(); break;
    case XbarKind::ones_plus_noise:
      for (int i = 0; i < n; ++i) x(i) = 1.0 + spec.noise_scale * rng.normal();
      break;
    case XbarKind::sparse: {
      std::vector<int> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
      // Partial Fisher-Yates with the library generator.
      for (int k = 0; k < spec.sparsity; ++k) {
        const auto span = static_cast<std::uint64_t>(n - k);
        const auto j = k + static_cast<int>(rng.next() % span);
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
        x(idx[static_cast<std::size_t>(k)]) = rng.normal();
      }
      break;
    }
  }
  return x;
}

const MethodOutcome* TrialRecord::find(Method m) const {
  for (const auto& o : outcomes) {
    if (o.method == m) return &o;
  }
  return nullptr;
}

LinearProblem make_trial_problem(const ExperimentConfig& cfg, std::uint64_t index,
                                 std::vector<double>* sigmas) {
  auto rng = SplitMix64::substream(cfg.seed, index);
  auto s = sample_sigmas(cfg.n, cfg.sigma_low, cfg.sigma_high, rng);
  LinearProblem p;
  p.e = vandermonde_basis(s);
  p.truth = sample_xbar(cfg.n, cfg.xbar, rng);
  p.y = p.e * p.truth;
  if (sigmas) *sigmas = std::move(s);
  return p;
}

TrialRecord run_trial_on(const ExperimentConfig& cfg, const LinearProblem& problem,
                         std::uint64_t index, std::vector<double> sigmas) {
  TrialRecord rec;
  rec.index = index;
  rec.sigmas = std::move(sigmas);
  const RhoSearchOptions opts = cfg.search_options();
  for (Method m : cfg.methods) {
    MethodOutcome o;
    o.method = m;
    try {
      const MethodEvaluator ev(m, problem, opts);
      const RhoSearchResult r = rho_search(ev, opts);
      o.rho = r.rho;
      o.residual = r.residual;
      o.evaluations = r.evaluations;
      o.failed_evaluations = r.failed_evaluations;
      o.ok = true;
      try {
        o.condition = condition_number(ev.system(r.rho));
      } catch (const Error&) {
        o.condition = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const Error& e) {
      o.ok = false;
      o.status = std::string("failed: ") + e.what();
    }
    rec.outcomes.push_back(std::move(o));
  }
  return rec;
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t index) {
  cfg.validate();
  std::vector<double> sigmas;
  const LinearProblem p = make_trial_problem(cfg, index, &sigmas);
  return run_trial_on(cfg, p, index, std::move(sigmas));
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto count = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialRecord> records(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) records[i] = run_trial(cfg, i);
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), count);
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  return records;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

std::vector<MethodSummary> aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw DomainError("aggregate: no trial records");
  std::vector<MethodSummary> table;
  for (const auto& o : records.front().outcomes) {
    MethodSummary s;
    s.method = o.method;
    std::vector<double> residuals;
    double rho_sum = 0.0;
    for (const auto& rec : records) {
      const MethodOutcome* x = rec.find(o.method);
      if (!x || !x->ok) {
        ++s.failures;
        continue;
      }
      residuals.push_back(x->residual);
      rho_sum += x->rho;
    }
    s.successes = static_cast<int>(residuals.size());
    if (s.successes > 0) {
      s.mean_residual = std::accumulate(residuals.begin(), residuals.end(), 0.0) / s.successes;
      s.mean_rho = rho_sum / s.successes;
    } else {
      s.mean_residual = s.mean_rho = std::numeric_limits<double>::quiet_NaN();
    }
    s.median_residual = median(std::move(residuals));
    table.push_back(s);
  }
  return table;
}

void write_table1_csv(std::ostream& out, const std::vector<MethodSummary>& table) {
  out << "method,mean_residual,mean_rho,median_residual,failures\n";
  for (const auto& s : table) {
    out << to_string(s.method) << ',' << format_double(s.mean_residual) << ','
        << format_double(s.mean_rho) << ',' << format_double(s.median_residual) << ',' << s.failures
        << '\n';
  }
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,method,rho,residual,condition,status\n";
  for (const auto& rec : records) {
    for (const auto& o : rec.outcomes) {
      std::string status = o.status;
      std::replace(status.begin(), status.end(), ',', ';');
      std::replace(status.begin(), status.end(), '\n', ' ');
      out << rec.index << ',' << to_string(o.method) << ',' << format_double(o.rho) << ','
          << format_double(o.residual) << ',' << format_double(o.condition) << ',' << status << '\n';
    }
  }
}

std::vector<double> default_rho_grid(int points) {
  if (points < 2) throw DomainError("default_rho_grid: need at least 2 points");
  std::vector<double> grid{0.0};
  const int logs = points - 1;
  for (int i = 0; i < logs; ++i) {
    const double t = logs == 1 ? 1.0 : static_cast<double>(i) / (logs - 1);
    grid.push_back(std::pow(10.0, -12.0 + 12.0 * t));
  }
  grid.back() = 1.0;
  return grid;
}

std::vector<TradeoffPoint> tradeoff_curve(Method method, const LinearProblem& problem,
                                          const std::vector<double>& rho_grid,
                                          const RhoSearchOptions& opts) {
  if (!builds_system(method)) {
    throw DomainError("tradeoff_curve: method must be homotopy or quartic");
  }
  const MethodEvaluator ev(method, problem, opts);
  std::vector<TradeoffPoint> out;
  out.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    if (method == Method::homotopy && (rho < 0.0 || rho > 1.0)) {
      throw DomainError("tradeoff_curve: homotopy rho must lie in [0, 1]");
    }
    if (rho < 0.0) throw DomainError("tradeoff_curve: rho must be nonnegative");
    TradeoffPoint pt;
    pt.rho = rho;
    try {
      const MatrixXd h = ev.system(rho);
      pt.condition = condition_number(h);
      pt.residual = (solve_gaussian(h, problem.y) - problem.truth).norm();
      pt.ok = std::isfinite(pt.residual);
    } catch (const Error&) {
      pt.ok = false;
      pt.residual = std::numeric_limits<double>::quiet_NaN();
      if (pt.condition == 0.0) pt.condition = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(pt);
  }
  return out;
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffPoint>& curve) {
  out << "rho,residual,condition\n";
  for (const auto& p : curve) {
    out << format_double(p.rho) << ',' << format_double(p.residual) << ','
        << format_double(p.condition) << '\n';
  }
}

std::vector<ElementSeries> element_curves(Method method, const MatrixXd& e, double rho,
                                          const std::vector<int>& indices,
                                          const RhoSearchOptions& opts) {
  if (!builds_system(method)) {
    throw DomainError("element_curves: method must be homotopy or quartic");
  }
  for (int k : indices) {
    if (k < 0 || k >= e.cols()) {
      throw DimensionError("element_curves: index " + std::to_string(k) + " out of range");
    }
  }
  LinearProblem p{e, VectorXd::Zero(e.rows()), VectorXd::Zero(e.rows())};
  const MethodEvaluator ev(method, std::move(p), opts);
  const MatrixXd h = ev.system(rho);
  std::vector<ElementSeries> out;
  for (int k : indices) {
    ElementSeries s;
    s.index = k;
    s.original.assign(e.col(k).data(), e.col(k).data() + e.rows());
    s.regularized.assign(h.col(k).data(), h.col(k).data() + h.rows());
    out.push_back(std::move(s));
  }
  return out;
}

void write_elements_csv(std::ostream& out, const std::vector<ElementSeries>& series) {
  out << "index,sample,original,regularized\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.original.size(); ++i) {
      out << s.index << ',' << i << ',' << format_double(s.original[i]) << ','
          << format_double(s.regularized[i]) << '\n';
    }
  }
}

}  // namespace orthoreg
