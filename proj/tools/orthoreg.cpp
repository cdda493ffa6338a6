// Command-line front end.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "orthoreg/experiment.hpp"
#include "orthoreg/io.hpp"
#include "orthoreg/measures.hpp"
#include "orthoreg/projection.hpp"
#include "orthoreg/regularizers.hpp"
#include "orthoreg/rho_search.hpp"
#include "orthoreg/svg.hpp"

namespace {

using namespace orthoreg;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  return out;
}

// Writes a matrix to `path`, or to stdout in CSV when path is empty or "-".
void emit_matrix(const std::string& path, const MatrixXd& a) {
  if (path.empty() || path == "-") write_matrix(std::cout, a, MatrixFormat::csv);
  else write_matrix(path, a);
}

void emit_vector(const std::string& path, const VectorXd& v) {
  if (path.empty() || path == "-") write_vector(std::cout, v, MatrixFormat::csv);
  else write_vector(path, v);
}

std::vector<int> parse_indices(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("invalid index '" + item + "'");
    }
  }
  if (out.empty()) throw DomainError("no indices given");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("invalid number '" + item + "'");
    }
  }
  return out;
}

struct InstanceFlags {
  std::uint64_t seed = 0;
  int n = 18;
  std::string matrix;
  std::string rhs;
  std::string truth;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Seed of the random Vandermonde instance")->capture_default_str();
    cmd->add_option("--n", n, "Dimension of the random instance")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--matrix", matrix, "System matrix file instead of a random instance");
    cmd->add_option("--rhs", rhs, "Right-hand side file (with --matrix)");
    cmd->add_option("--truth", truth, "Ground-truth solution file (with --matrix)");
  }

  LinearProblem load() const {
    if (matrix.empty()) {
      ExperimentConfig cfg;
      cfg.n = n;
      cfg.seed = seed;
      cfg.xbar.sparsity = std::min(cfg.xbar.sparsity, n);
      return make_trial_problem(cfg, 0);
    }
    LinearProblem p;
    p.e = read_matrix(matrix);
    if (rhs.empty() || truth.empty()) {
      throw DomainError("--matrix needs --rhs and --truth");
    }
    p.y = read_vector(rhs);
    p.truth = read_vector(truth);
    p.validate();
    return p;
  }
};

int run_project(const std::string& input, const std::string& output, bool series, double tol) {
  const MatrixXd g = read_matrix(input);
  require_square(g, "project");
  std::cout << std::boolalpha;
  OrthogonalSystem<double> h;
  if (series) {
    const auto sp = series_project(g, tol);
    h = sp.projection;
    const auto& c = sp.certificate;
    std::cout << "certificate.gershgorin_bound = " << format_double(c.gershgorin_bound) << '\n'
              << "certificate.certified = " << c.certified << '\n'
              << "certificate.terms_used = " << c.terms_used << '\n'
              << "certificate.truncation_bound = " << format_double(c.truncation_bound) << '\n'
              << "certificate.fell_back_to_svd = " << c.fell_back_to_svd << '\n';
  } else {
    h = polar_project(g);
  }
  std::cout << "manifold = " << h.manifold << '\n'
            << "epsilon_ls = " << format_double(epsilon_ls(g, h.system)) << '\n';
  if (output.empty() || output == "-") {
    write_matrix(std::cout, h.system, MatrixFormat::csv);
  } else {
    write_matrix(output, h.system);
  }
  return 0;
}

int run_regularize(const std::string& input, const std::string& output, const std::string& method_name,
                   double rho, bool dual) {
  const MatrixXd g = read_matrix(input);
  const Method m = parse_method(method_name);
  MatrixXd h;
  if (m == Method::homotopy) {
    h = dual ? biorthogonal_homotopy_system(HomotopyParam::homotopy(rho), g)
             : homotopy_system(HomotopyParam::homotopy(rho), g);
  } else if (m == Method::quartic) {
    if (dual) throw DomainError("--biorthogonal applies to the homotopy method only");
    const RhoSearchOptions o;
    const auto sol = solve_quartic(g, HomotopyParam::quartic(rho), o.quartic_grad_tol, o.quartic_max_iter);
    std::cerr << "iterations = " << sol.report.iterations << ", converged = " << std::boolalpha
              << sol.report.converged << '\n';
    h = sol.system;
  } else {
    throw DomainError("regularize: method must be homotopy or quartic");
  }
  std::cerr << "condition = " << format_double(condition_number(h)) << '\n';
  emit_matrix(output, h);
  return 0;
}

int run_solve(const std::string& matrix, const std::string& rhs, const std::string& output,
              const std::string& method_name, double rho) {
  const Method m = parse_method(method_name);
  LinearProblem p;
  p.e = read_matrix(matrix);
  p.y = read_vector(rhs);
  require_square(p.e, "solve");
  if (p.y.size() != p.e.rows()) {
    throw DimensionError("solve: matrix is " + std::to_string(p.e.rows()) + "x" +
                         std::to_string(p.e.cols()) + " but the right-hand side has length " +
                         std::to_string(p.y.size()));
  }
  p.truth = VectorXd::Zero(p.e.rows());
  if (m == Method::homotopy) (void)HomotopyParam::homotopy(rho);
  else if (m != Method::direct) (void)HomotopyParam::baseline(rho);
  const MethodEvaluator ev(m, std::move(p));
  emit_vector(output, ev.solve(rho));
  return 0;
}

int run_bench(const std::string& config_path, const std::string& out_dir, int threads) {
  ExperimentConfig cfg = load_config(config_path);
  if (threads > 0) cfg.threads = threads;
  std::filesystem::create_directories(out_dir);
  std::cerr << "running " << cfg.trials << " trial(s), n = " << cfg.n << ", seed = " << cfg.seed
            << ", threads = " << cfg.threads << '\n';
  const auto records = run_experiment(cfg);
  int failures = 0;
  for (const auto& r : records) {
    for (const auto& o : r.outcomes) {
      if (!o.ok) {
        ++failures;
        std::cerr << "trial " << r.index << ' ' << to_string(o.method) << ": " << o.status << '\n';
      }
    }
  }
  const auto table = aggregate(records);
  auto t1 = open_output((std::filesystem::path(out_dir) / "table1.csv").string());
  write_table1_csv(t1, table);
  auto tr = open_output((std::filesystem::path(out_dir) / "trials.csv").string());
  write_trials_csv(tr, records);
  write_table1_csv(std::cout, table);
  std::cerr << "done, " << failures << " failed method run(s)\n";
  return 0;
}

int run_tradeoff(const InstanceFlags& inst, const std::string& method_name, int points,
                 const std::string& out, const std::string& svg) {
  const Method m = parse_method(method_name);
  const LinearProblem p = inst.load();
  const auto curve = tradeoff_curve(m, p, default_rho_grid(points));
  if (out.empty() || out == "-") {
    write_tradeoff_csv(std::cout, curve);
  } else {
    auto f = open_output(out);
    write_tradeoff_csv(f, curve);
  }
  if (!svg.empty()) {
    PlotSeries s{std::string(to_string(m)), {}, {}};
    for (const auto& pt : curve) {
      s.x.push_back(pt.condition);
      s.y.push_back(pt.residual);
    }
    PlotOptions o;
    o.title = "Residual versus condition number (" + s.name + ")";
    o.x_label = "condition number of the regularized system";
    o.y_label = "||x* - xbar||_2";
    o.log_x = true;
    o.log_y = true;
    auto f = open_output(svg);
    write_svg_plot(f, {s}, o);
  }
  return 0;
}

int run_elements(const InstanceFlags& inst, const std::string& method_name, double rho,
                 const std::string& indices, const std::string& out, const std::string& svg) {
  const Method m = parse_method(method_name);
  const LinearProblem p = inst.matrix.empty() ? inst.load() : LinearProblem{read_matrix(inst.matrix), {}, {}};
  const auto series = element_curves(m, p.e, rho, parse_indices(indices));
  if (out.empty() || out == "-") {
    write_elements_csv(std::cout, series);
  } else {
    auto f = open_output(out);
    write_elements_csv(f, series);
  }
  if (!svg.empty()) {
    std::vector<PlotSeries> plot;
    for (const auto& s : series) {
      PlotSeries orig{"e" + std::to_string(s.index), {}, s.original};
      PlotSeries reg{"h" + std::to_string(s.index), {}, s.regularized};
      for (std::size_t i = 0; i < s.original.size(); ++i) {
        orig.x.push_back(static_cast<double>(i));
        reg.x.push_back(static_cast<double>(i));
      }
      plot.push_back(std::move(orig));
      plot.push_back(std::move(reg));
    }
    PlotOptions o;
    o.title = "Basis elements and their regularized counterparts (" + std::string(to_string(m)) + ")";
    o.x_label = "sample";
    o.y_label = "value";
    auto f = open_output(svg);
    write_svg_plot(f, plot, o);
  }
  return 0;
}

int run_basis(std::uint64_t seed, int n, const std::string& sigmas, const std::string& output) {
  MatrixXd e;
  if (!sigmas.empty()) {
    e = vandermonde_basis(parse_doubles(sigmas));
  } else {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    cfg.xbar.sparsity = std::min(cfg.xbar.sparsity, n);
    e = make_trial_problem(cfg, 0).e;
  }
  emit_matrix(output, e);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving regularization of ill-conditioned linear systems"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string input, output, method = "homotopy", matrix, rhs, config, out_dir = ".", out, svg;
  std::string indices = "0,4,8,12,17", sigmas;
  double tol = 1e-12;
  double rho = 0.0;
  bool series = false;
  bool dual = false;
  int threads = 0;
  int points = 121;
  std::uint64_t seed = 0;
  int n = 18;
  InstanceFlags inst;

  auto* project = app.add_subcommand("project", "Project a system onto the orthogonal group");
  project->add_option("--input", input, "Square matrix file (.csv or plain)")->required();
  project->add_option("--output", output, "Where to write the projection (default stdout)");
  project->add_flag("--series", series, "Use the certified power series instead of the SVD");
  project->add_option("--tol", tol, "Series truncation tolerance")->capture_default_str()->check(CLI::PositiveNumber);

  auto* regularize = app.add_subcommand("regularize", "Write the regularized system H(rho)");
  regularize->add_option("--input", input, "Square matrix file")->required();
  regularize->add_option("--output", output, "Where to write H(rho) (default stdout)");
  regularize->add_option("--method", method, "homotopy or quartic")->capture_default_str();
  regularize->add_option("--rho", rho, "Regularization parameter")->required();
  regularize->add_flag("--biorthogonal", dual, "Run the homotopy on the biorthogonal system");

  auto* solve = app.add_subcommand("solve", "Solve E x = y with one method at fixed rho");
  solve->add_option("--matrix", matrix, "System matrix file")->required();
  solve->add_option("--rhs", rhs, "Right-hand side vector file")->required();
  solve->add_option("--output", output, "Where to write x (default stdout)");
  solve->add_option("--method", method, "direct, homotopy, quartic, tikhonov, bpdn or dantzig")->capture_default_str();
  solve->add_option("--rho", rho, "Regularization parameter")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Run the Vandermonde benchmark and write table1.csv");
  bench->add_option("--config", config, "key = value configuration file")->required();
  bench->add_option("--out-dir", out_dir, "Directory for table1.csv and trials.csv")->capture_default_str();
  bench->add_option("--threads", threads, "Override the configured worker count")->check(CLI::NonNegativeNumber);

  auto* tradeoff = app.add_subcommand("tradeoff", "Residual and condition number along rho");
  tradeoff->add_option("--method", method, "homotopy or quartic")->capture_default_str();
  tradeoff->add_option("--points", points, "Grid size: 0 plus log-spaced values up to 1")->capture_default_str()->check(CLI::Range(2, 100000));
  tradeoff->add_option("--out", out, "CSV output (default stdout)");
  tradeoff->add_option("--svg", svg, "Also render an SVG plot");
  inst.add_to(tradeoff);

  auto* elements = app.add_subcommand("elements", "Basis elements next to their regularized versions");
  elements->add_option("--method", method, "homotopy or quartic")->capture_default_str();
  elements->add_option("--rho", rho, "Regularization parameter")->required();
  elements->add_option("--indices", indices, "Comma-separated zero-based column indices")->capture_default_str();
  elements->add_option("--out", out, "CSV output (default stdout)");
  elements->add_option("--svg", svg, "Also render an SVG plot");
  inst.add_to(elements);

  auto* basis = app.add_subcommand("basis", "Write a Vandermonde basis E_ij = sigma_j^(i-1)");
  basis->add_option("--seed", seed, "Seed for random sigma values")->capture_default_str();
  basis->add_option("--n", n, "Dimension")->capture_default_str()->check(CLI::PositiveNumber);
  basis->add_option("--sigmas", sigmas, "Explicit comma-separated increasing sigma values");
  basis->add_option("--output", output, "Where to write E (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*project) return run_project(input, output, series, tol);
    if (*regularize) return run_regularize(input, output, method, rho, dual);
    if (*solve) return run_solve(matrix, rhs, output, method, rho);
    if (*bench) return run_bench(config, out_dir, threads);
    if (*tradeoff) return run_tradeoff(inst, method, points, out, svg);
    if (*elements) return run_elements(inst, method, rho, indices, out, svg);
    if (*basis) return run_basis(seed, n, sigmas, output);
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
