// Acceptance suite. `acceptance` runs every criterion, `acceptance K` runs only
// criterion K. Each criterion prints one PASS/FAIL line; details go above it.
// Exit status is nonzero when any selected criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "orthoreg/experiment.hpp"
#include "orthoreg/measures.hpp"
#include "orthoreg/projection.hpp"
#include "orthoreg/regularizers.hpp"
#include "test_support.hpp"

#ifndef ORTHOREG_CLI_PATH
#error "ORTHOREG_CLI_PATH must point at the orthoreg executable"
#endif

namespace {

using namespace orthoreg;
using Clock = std::chrono::steady_clock;
using test::random_matrix;
using test::random_orthogonal;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects named sub-checks of one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    std::printf("    [%s] %s\n", ok ? "ok" : "FAILED", what.c_str());
    all_ &= ok;
  }
  bool all() const { return all_; }

 private:
  bool all_ = true;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- criterion 1 -------------------------------------------------------------

double max_fd_error(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = random_matrix(n, n, rng);
  const Eigen::MatrixXd h = random_matrix(n, n, rng);
  const auto rho = HomotopyParam::quartic(0.3);
  double worst = 0;
  auto track = [&](const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    worst = std::max(worst, test::relative_error(got, want));
  };
  const Eigen::MatrixXd fd_bo_gh =
      test::central_difference([&](const Eigen::MatrixXd& x) { return epsilon_bo(g, x); }, h);
  const Eigen::MatrixXd fd_ls =
      test::central_difference([&](const Eigen::MatrixXd& x) { return epsilon_ls(g, x); }, h);
  const Eigen::MatrixXd fd_bo_hh =
      test::central_difference([](const Eigen::MatrixXd& x) { return epsilon_bo(x, x); }, h);
  const Eigen::MatrixXd fd_q =
      test::central_difference([&](const Eigen::MatrixXd& x) { return quartic_objective(x, g, rho); }, h);
  for (int k = 0; k < n; ++k) {
    track(grad_epsilon_ls(g, h, k), fd_bo_gh.col(k));
    track(grad_epsilon_ls_distance(g, h, k), fd_ls.col(k));
    track(grad_epsilon_bo_self(h, k), fd_bo_hh.col(k));
  }
  track(quartic_gradient(h, g, rho), fd_q);
  return worst;
}

bool criterion1() {
  const auto t0 = Clock::now();
  Checks c;
  std::mt19937_64 rng(1001);
  const double tol = 1e-10;

  double orth = 0, idem = 0, transp = 0, p1p2 = 0, equiv = 0;
  bool sign_rule = true, biconditional = true, bo_min = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    const auto p = polar_project(g);
    const Eigen::MatrixXd& h = p.system;
    orth = std::max(orth, (h.transpose() * h - Eigen::MatrixXd::Identity(n, n)).norm());
    idem = std::max(idem, (polar_project(h).system - h).norm());
    transp = std::max(transp, (polar_project(Eigen::MatrixXd(g.transpose())).system - h.transpose()).norm());
    p1p2 = std::max(p1p2, (biorthogonalization_targets(g).system - h).norm());
    sign_rule &= p.manifold == manifold_of(g) && p.manifold == det_sign(h) &&
                 p.manifold == (g.determinant() > 0 ? 1 : -1);
    const Eigen::MatrixXd q = random_orthogonal(n, rng);
    equiv = std::max(equiv, std::abs(epsilon_bo(g, q) - epsilon_ls(g, q)) / std::max(1.0, epsilon_ls(g, q)));
    // The least-squares minimizer is also the biorthogonality minimizer.
    bo_min &= epsilon_bo(g, h) <= epsilon_bo(g, q) + 1e-9;
    // eps_bo(a, a) = 0  <=>  a orthonormal  <=>  a equals its biorthogonal system.
    const Eigen::MatrixXd a = n == 1 ? Eigen::MatrixXd(2.0 * q) : Eigen::MatrixXd(q * (Eigen::MatrixXd::Identity(n, n) + 0.2 * random_matrix(n, n, rng)));
    biconditional &= epsilon_bo(q, q) < 1e-20 && (biorthogonal(q) - q).norm() < 1e-12;
    biconditional &= epsilon_bo(a, a) > 1e-6 && (biorthogonal(a) - a).norm() > 1e-6;
  }
  c.expect(orth <= tol, "polar projection is orthogonal (max ||H^T H - I|| = " + fmt("%.2e", orth) + ")");
  c.expect(idem <= tol, "polar projection is idempotent (" + fmt("%.2e", idem) + ")");
  c.expect(transp <= tol, "projection of G^T is the transposed projection (" + fmt("%.2e", transp) + ")");
  c.expect(p1p2 == 0 && bo_min, "least-squares and biorthogonality problems share their minimizer");
  c.expect(sign_rule, "manifold sign rule: sgn det(G) = det of its projection");
  c.expect(equiv <= 1e-12, "eps_LS = eps_BO on the orthogonal group (rel " + fmt("%.2e", equiv) + ")");
  c.expect(biconditional, "eps_BO(a, a) = 0 iff a orthonormal iff a is self-biorthogonal");

  double fd = 0;
  for (int n = 2; n <= 8; ++n)
    for (int rep = 0; rep < 3; ++rep) fd = std::max(fd, max_fd_error(n, rng));
  c.expect(fd <= 1e-5, "gradients match central differences, N = 2..8 (max rel " + fmt("%.2e", fd) + ")");

  double series = 0;
  bool certified = true;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 7;
    const Eigen::MatrixXd g = random_orthogonal(n, rng) + 0.05 / n * random_matrix(n, n, rng);
    const auto s = series_project(g, 1e-10);
    certified &= s.certificate.certified && !s.certificate.fell_back_to_svd;
    series = std::max(series, (s.projection.system - polar_project(g).system).norm());
  }
  c.expect(certified && series <= 1e-8, "series matches SVD projection on certified inputs (" + fmt("%.2e", series) + ")");

  bool endpoints = true;
  for (int n = 1; n <= 8; ++n) {
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    endpoints &= homotopy_system(HomotopyParam::homotopy(0), g) == g;
    endpoints &= homotopy_system(HomotopyParam::homotopy(1), g) == polar_project(g).system;
  }
  c.expect(endpoints, "homotopy endpoints are exact");

  bool monotone = true;
  for (double w : {0.1, 0.4, 3.0}) {
    const Eigen::MatrixXd g = random_matrix(5, 5, rng);
    const auto rho = HomotopyParam::quartic(w);
    double prev = quartic_objective(g, g, rho);
    for (long it = 1; it <= 40; ++it) {
      const double f = solve_quartic(g, rho, 1e-12, it).report.final_objective;
      monotone &= f <= prev * (1 + 4e-16);  // exact decrease, evaluated with rounding
      prev = f;
    }
  }
  c.expect(monotone, "quartic solver descends monotonically");

  double spread = 0;
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd g = random_matrix(n, n, rng);
    for (double w : {0.05, 0.2, 0.45}) {
      const auto rho = HomotopyParam::quartic(w);
      const double ref = solve_quartic(g, rho, 1e-12, 200000).report.final_objective;
      // identity, then 10 random initializations
      for (int start = 0; start <= 10; ++start) {
        const Eigen::MatrixXd h0 = start == 0 ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n))
                                              : Eigen::MatrixXd(3.0 * random_matrix(n, n, rng));
        const double f = solve_quartic(g, rho, 1e-12, 200000, h0).report.final_objective;
        spread = std::max(spread, std::abs(f - ref) / std::abs(ref));
      }
    }
  }
  c.expect(spread <= 1e-6, "quartic multi-start objectives agree, N <= 6, rho <= 1/2 (rel " + fmt("%.2e", spread) + ")");

  const double t = seconds_since(t0);
  c.expect(t < 60, "runtime " + fmt("%.1f", t) + " s < 60 s");
  return c.all();
}

// --- criterion 2 -------------------------------------------------------------

bool criterion2() {
  const auto t0 = Clock::now();
  Checks c;
  std::mt19937_64 rng(2002);
  double margin_ls = INFINITY, margin_bo = INFINITY;

  // 2x2: every rotation and reflection on a 1e-4 angular grid.
  for (int k = 0; k < 6; ++k) {
    const Eigen::MatrixXd g = random_matrix(2, 2, rng);
    const Eigen::MatrixXd h = polar_project(g).system;
    const double ls = epsilon_ls(g, h), bo = epsilon_bo(g, h);
    for (double t = 0; t < 2 * std::numbers::pi; t += 1e-4) {
      for (const Eigen::MatrixXd& q : {test::rotation(t), test::reflection(t)}) {
        margin_ls = std::min(margin_ls, epsilon_ls(g, q) - ls);
        margin_bo = std::min(margin_bo, epsilon_bo(g, q) - bo);
      }
    }
  }
  c.expect(margin_ls >= -1e-9 && margin_bo >= -1e-9,
           "2x2 grid: margins eps_LS " + fmt("%.3e", margin_ls) + ", eps_BO " + fmt("%.3e", margin_bo));

  // 3x3: Haar samples plus small perturbations of the projection itself.
  double m3_ls = INFINITY, m3_bo = INFINITY;
  for (int k = 0; k < 5; ++k) {
    const Eigen::MatrixXd g = random_matrix(3, 3, rng);
    const Eigen::MatrixXd h = polar_project(g).system;
    const double ls = epsilon_ls(g, h), bo = epsilon_bo(g, h);
    for (int s = 0; s < 100000; ++s) {
      Eigen::MatrixXd q;
      if (s % 2 == 0) {
        q = random_orthogonal(3, rng);
      } else {
        const Eigen::MatrixXd a = 1e-3 * random_matrix(3, 3, rng);
        // Cayley transform of a small skew matrix: an orthogonal matrix near I.
        const Eigen::MatrixXd skew = 0.5 * (a - a.transpose());
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
        q = h * (eye - skew).partialPivLu().solve(eye + skew);
      }
      m3_ls = std::min(m3_ls, epsilon_ls(g, q) - ls);
      m3_bo = std::min(m3_bo, epsilon_bo(g, q) - bo);
    }
  }
  c.expect(m3_ls >= -1e-9 && m3_bo >= -1e-9,
           "3x3 sampling: margins eps_LS " + fmt("%.3e", m3_ls) + ", eps_BO " + fmt("%.3e", m3_bo));
  const double t = seconds_since(t0);
  c.expect(t < 30, "runtime " + fmt("%.1f", t) + " s < 30 s");
  return c.all();
}

// --- criterion 3 -------------------------------------------------------------

bool criterion3() {
  const auto t0 = Clock::now();
  Checks c;
  ExperimentConfig cfg;
  cfg.trials = 200;
  cfg.n = 18;
  cfg.seed = 0;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::printf("    running %d trials, N = %d, seed = %llu, %d thread(s)\n", cfg.trials, cfg.n,
              static_cast<unsigned long long>(cfg.seed), cfg.threads);
  std::fflush(stdout);
  const auto records = run_experiment(cfg);
  const auto table = aggregate(records);
  std::printf("    %-9s %14s %12s %14s %8s\n", "method", "mean_residual", "mean_rho", "median_resid", "failed");
  auto mean = [&](Method m) -> double {
    for (const auto& s : table)
      if (s.method == m) return s.mean_residual;
    return NAN;
  };
  for (const auto& s : table) {
    std::printf("    %-9s %14.6g %12.4g %14.6g %8d\n", std::string(to_string(s.method)).c_str(), s.mean_residual,
                s.mean_rho, s.median_residual, s.failures);
  }
  const double direct = mean(Method::direct);
  const double hom = mean(Method::homotopy);
  c.expect(direct >= 1.0, "(a) direct mean residual " + fmt("%.4g", direct) + " >= 1.0");
  c.expect(hom <= 0.5 && hom <= direct / 10,
           "(b) homotopy mean residual " + fmt("%.4g", hom) + " <= 0.5 and <= direct / 10");
  for (Method m : {Method::quartic, Method::tikhonov, Method::bpdn}) {
    const double v = mean(m);
    c.expect(v >= 0.02 && v <= 1.0 && v <= direct / 5,
             "(c) " + std::string(to_string(m)) + " mean residual " + fmt("%.4g", v) +
                 " in [0.02, 1.0] and <= direct / 5");
  }
  const double dz = mean(Method::dantzig);
  for (Method m : {Method::homotopy, Method::quartic, Method::tikhonov, Method::bpdn}) {
    c.expect(dz >= 10 * mean(m), "(d) dantzig " + fmt("%.4g", dz) + " >= 10 x " + std::string(to_string(m)) + " " +
                                     fmt("%.4g", mean(m)));
  }
  const double t = seconds_since(t0);
  c.expect(t < 1800, "runtime " + fmt("%.1f", t) + " s < 30 min");
  return c.all();
}

// --- criterion 4 -------------------------------------------------------------

bool criterion4() {
  const auto t0 = Clock::now();
  Checks c;
  ExperimentConfig cfg;
  cfg.seed = 4004;
  double lo = INFINITY;
  for (std::uint64_t i = 0; i < 50; ++i) lo = std::min(lo, condition_number(make_trial_problem(cfg, i).e));
  c.expect(lo >= 1e12, "min condition number over 50 draws " + fmt("%.3e", lo) + " >= 1e12");
  const double t = seconds_since(t0);
  c.expect(t < 60, "runtime " + fmt("%.1f", t) + " s < 60 s");
  return c.all();
}

// --- criterion 5 -------------------------------------------------------------

bool criterion5() {
  const auto t0 = Clock::now();
  Checks c;
  ExperimentConfig cfg;
  const LinearProblem p = make_trial_problem(cfg, 0);
  const auto grid = default_rho_grid(121);
  for (Method m : {Method::homotopy, Method::quartic}) {
    const auto curve = tradeoff_curve(m, p, grid);
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i)
      if (curve[i].residual < curve[best].residual) best = i;
    c.expect(best > 0 && best + 1 < curve.size() && curve[best].rho > 0,
             std::string(to_string(m)) + ": grid minimum " + fmt("%.4g", curve[best].residual) + " at interior rho " +
                 fmt("%.3g", curve[best].rho) + " (rho = 0 gives " + fmt("%.4g", curve.front().residual) + ")");
    if (m == Method::homotopy) {
      bool mono = true;
      for (std::size_t i = 1; i < curve.size(); ++i) mono &= curve[i].condition <= curve[i - 1].condition * 1.01;
      c.expect(mono, "homotopy condition number decreases along the grid (from " + fmt("%.3e", curve.front().condition) +
                         " to " + fmt("%.6f", curve.back().condition) + ")");
    }
  }
  const double t = seconds_since(t0);
  c.expect(t < 300, "runtime " + fmt("%.1f", t) + " s < 5 min");
  return c.all();
}

// --- criterion 6 -------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ORTHOREG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool criterion6() {
  Checks c;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "orthoreg_acceptance_6";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "bench.cfg") << "trials = 1\nseed = 0\n";
  const std::string cfg = (dir / "bench.cfg").string();
  bool ran = true;
  std::vector<std::string> outputs;
  for (const char* run : {"1 --threads 1", "2 --threads 1", "3 --threads 4"}) {
    std::istringstream spec(run);
    std::string name, rest;
    spec >> name;
    std::getline(spec, rest);
    ran &= run_cli("bench --config " + cfg + " --out-dir " + (dir / name).string() + rest) == 0;
    outputs.push_back(slurp(dir / name / "table1.csv"));
  }
  c.expect(ran, "three bench runs exit with status 0");
  c.expect(!outputs[0].empty() && outputs[0] == outputs[1], "repeated runs give byte-identical table1.csv");
  c.expect(outputs[0] == outputs[2], "1 and 4 worker threads give byte-identical table1.csv");
#ifdef ORTHOREG_GOLDEN_DIR
  c.expect(outputs[0] == slurp(fs::path(ORTHOREG_GOLDEN_DIR) / "table1.csv"), "output matches the committed golden file");
#endif
  fs::remove_all(dir);
  return c.all();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<bool()>>> criteria = {
      {"property suite", criterion1},
      {"2x2/3x3 optimality oracle", criterion2},
      {"desk-scale benchmark table", criterion3},
      {"Vandermonde conditioning", criterion4},
      {"tradeoff curve shape", criterion5},
      {"golden-file determinism", criterion6},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "usage: acceptance [criterion 1-" << criteria.size() << "]...\n";
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto& [name, fn] = criteria[static_cast<std::size_t>(k - 1)];
    std::printf("criterion %d: %s\n", k, name);
    std::fflush(stdout);
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      std::printf("    [FAILED] exception: %s\n", e.what());
    }
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", k, name);
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
