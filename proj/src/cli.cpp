#include "nhvqe/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "nhvqe/engine.hpp"
#include "nhvqe/errors.hpp"

namespace nhvqe {

namespace {

using Json = nlohmann::ordered_json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

// Pretty printer with floats as {:.17g}.
void write_json(std::string& s, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        s += "{}";
        return;
      }
      s += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) s += ",\n";
        first = false;
        s += inner + Json(key).dump() + ": ";
        write_json(s, value, indent + 1);
      }
      s += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        s += "[]";
        return;
      }
      s += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += ",\n";
        s += inner;
        write_json(s, j[i], indent + 1);
      }
      s += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      s += std::isfinite(v) ? num(v) : "null";
      return;
    }
    default:
      s += j.dump();
  }
}

std::string dump(const Json& j) {
  std::string s;
  write_json(s, j, 0);
  s += "\n";
  return s;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

struct Options {
  std::string matrix;
  std::string file;
  int starts = 0;
  int layers = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  int max_iter = 0;
  double cluster_tol = 1e-3;
  std::string out;
  std::string objective = "full";
  std::string grid;
  int resolution = 101;
  std::string axes = "0,1";
  bool reduced = false;
  bool dump_pauli = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

MatrixRecord load_input(const Options& o) {
  if (o.matrix.empty() == o.file.empty()) throw UsageError("exactly one of --matrix or --file is required");
  return o.matrix.empty() ? load_matrix(o.file) : builtin(o.matrix);
}

EngineConfig engine_config(const Options& o) {
  EngineConfig c;
  c.objective = o.objective == "split" ? Objective::SplitVariance : Objective::FullVariance;
  c.layers = o.layers;
  if (o.starts > 0) c.starts_per_dim = o.starts;
  c.tolerance = o.tol;
  c.max_iterations = o.max_iter;
  c.cluster_tol = o.cluster_tol;
  c.seed = o.seed;
  c.backend = {o.shots, o.seed};
  return c;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw UsageError(fmt::format("empty entry in {}", what));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw UsageError(fmt::format("bad number '{}' in {}", item, what));
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(fmt::format("{} is empty", what));
  return values;
}

Json pauli_json(const PauliSum& s) {
  Json terms = Json::array();
  for (const auto& t : s.terms()) terms.push_back(Json{{"string", t.string.axes()}, {"coeff", t.coeff}});
  return terms;
}

std::string cmd_solve(const Options& o) {
  const MatrixRecord rec = load_input(o);
  const EngineConfig config = engine_config(o);
  const SpectrumResult r = multi_start(rec, config);
  Json j;
  j["matrix"] = rec.name;
  j["dim"] = rec.matrix.dim();
  j["layers"] = r.layers;
  j["seed"] = o.seed;
  j["shots"] = o.shots;
  j["objective"] = o.objective;
  j["runs_total"] = r.runs_total;
  j["runs_converged"] = r.runs_converged;
  j["threshold"] = r.threshold;
  Json pairs = Json::array();
  for (const auto& e : r.eigenpairs) {
    Json p = complex_json(e.eigenvalue);
    p["resonance_energy"] = e.resonance_energy;
    p["gamma"] = e.gamma;
    p["variance"] = e.variance;
    p["residual"] = e.residual;
    p["multiplicity_hits"] = e.multiplicity_hits;
    p["oracle_distance"] = e.oracle_distance ? Json(*e.oracle_distance) : Json(nullptr);
    pairs.push_back(std::move(p));
  }
  j["eigenpairs"] = std::move(pairs);
  Json oracle = Json::array();
  if (r.oracle_eigenvalues)
    for (auto z : *r.oracle_eigenvalues) oracle.push_back(complex_json(z));
  j["oracle"] = std::move(oracle);
  Json missing = Json::array();
  for (auto z : r.missing) missing.push_back(complex_json(z));
  j["missing"] = std::move(missing);
  if (o.dump_pauli) {
    const Problem p = Problem::from_matrix(rec.matrix);
    j["pauli"] = Json{{"h", pauli_json(p.h)}, {"k", pauli_json(p.k)}, {"variance", pauli_json(p.variance_obs)}};
  }
  return dump(j);
}

std::string cmd_sweep(const Options& o) {
  const auto grid = parse_list(o.grid, "--grid");
  const MatrixRecord rec = load_input(o);
  const SweepResult r = angle_sweep(rec, grid, engine_config(o));
  std::string s = "angle_rad,eig_re,eig_im,variance\n";
  for (const auto& e : r.entries) {
    s += fmt::format("{},{},{},{}\n", num(e.init_angle), num(e.eigenvalue.real()), num(e.eigenvalue.imag()),
                     num(e.variance));
  }
  return s;
}

std::string cmd_landscape(const Options& o) {
  const MatrixRecord rec = load_input(o);
  const EngineConfig config = engine_config(o);
  const Problem problem = Problem::from_matrix(rec.matrix);
  AnsatzSpec ansatz = o.reduced ? build_ansatz(problem.n_qubits, 1, AnsatzVariant::Reduced2Param)
                                : ansatz_for(rec.matrix.dim(), config);
  std::vector<int> axes;
  for (double a : parse_list(o.axes, "--axes")) {
    if (a != std::floor(a) || a < 0 || a >= ansatz.n_params) throw UsageError("--axes must name parameter indices");
    axes.push_back(static_cast<int>(a));
  }
  if (axes.size() > 2) throw UsageError("--axes takes one or two indices");
  const std::vector<double> base(static_cast<std::size_t>(ansatz.n_params), 0.0);
  std::string s;
  if (axes.size() == 2) {
    if (axes[0] == axes[1]) throw UsageError("--axes indices must differ");
    const auto g = landscape_grid(problem, ansatz, base, axes[0], axes[1], o.resolution, config.objective);
    s = "theta1,theta2,cost\n";
    for (std::size_t i = 0; i < g.axis.size(); ++i)
      for (std::size_t j = 0; j < g.axis.size(); ++j)
        s += fmt::format("{},{},{}\n", num(g.axis[i]), num(g.axis[j]), num(g.at(i, j)));
  } else {
    const auto l = landscape_line(problem, ansatz, base, axes[0], o.resolution, config.objective);
    s = "theta,cost,eig_re\n";
    for (std::size_t i = 0; i < l.theta.size(); ++i)
      s += fmt::format("{},{},{}\n", num(l.theta[i]), num(l.cost[i]), num(l.eig_re[i]));
  }
  return s;
}

std::string cmd_compare(const Options& o) {
  const MatrixRecord rec = load_input(o);
  const CompareReport r = compare(rec, engine_config(o));
  Json j;
  j["matrix"] = rec.name;
  j["hermitian"] = r.hermitian;
  Json vqe;
  vqe["applicable"] = r.hermitian;
  if (r.hermitian) {
    vqe["objective"] = "min <M>";
    vqe["value"] = *r.vqe_value;
    vqe["least_eigenvalue"] = *r.least_eigenvalue;
    vqe["reached_least"] = r.vqe_reached_least;
    vqe["iterations"] = r.vqe_iterations;
    vqe["convergence_value"] = "matrix dependent";
  } else {
    vqe["note"] = "Only Hermitian matrices";
  }
  j["vqe"] = std::move(vqe);
  Json rv;
  rv["objective"] = "min <M^dag M> - |<M>|^2";
  Json eigs = Json::array();
  for (auto z : r.rvvqe_eigenvalues) eigs.push_back(complex_json(z));
  rv["eigenvalues"] = std::move(eigs);
  rv["max_final_cost"] = r.rvvqe_max_final_cost;
  rv["converged_to_zero"] = r.rvvqe_converged_to_zero;
  rv["iterations"] = r.rvvqe_iterations;
  rv["convergence_value"] = "zero";
  j["rvvqe"] = std::move(rv);
  const auto& m = r.metrics;
  j["metrics"] = Json{{"h_terms", m.h_terms},
                      {"k_terms", m.k_terms},
                      {"h2_terms", m.h2_terms},
                      {"k2_terms", m.k2_terms},
                      {"commutator_terms", m.commutator_terms},
                      {"vqe_strings", m.vqe_strings},
                      {"objective_strings", m.objective_strings},
                      {"split_objective_strings", m.split_objective_strings},
                      {"quadratic_bound_holds", m.quadratic_bound_holds}};
  return dump(j);
}

std::string cmd_oracle(const Options& o) {
  const MatrixRecord rec = load_input(o);
  const OracleSpectrum spec = eigen(rec.matrix);
  Json j;
  j["matrix"] = rec.name;
  j["dim"] = rec.matrix.dim();
  Json eigs = Json::array();
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    Json e = complex_json(spec.eigenvalues[i]);
    if (i < spec.residuals.size()) e["residual"] = spec.residuals[i];
    eigs.push_back(std::move(e));
  }
  j["eigenvalues"] = std::move(eigs);
  return dump(j);
}

std::string cmd_list() {
  std::string s;
  for (const auto& name : builtin_names()) s += fmt::format("{} {}\n", name, builtin(name).matrix.dim());
  return s;
}

std::string cmd_trace(const Options& o) {
  const MatrixRecord rec = load_input(o);
  const EngineConfig config = engine_config(o);
  const Problem problem = Problem::from_matrix(rec.matrix);
  const AnsatzSpec ansatz = ansatz_for(rec.matrix.dim(), config);
  const auto runs = run_starts(problem, ansatz, static_cast<std::size_t>(o.starts > 0 ? o.starts : 5), config);
  std::string s = "run,iteration,cost\n";
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (const auto& [it, cost] : runs[r].cost_trace) s += fmt::format("{},{},{}\n", r, it, num(cost));
  return s;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergedRuns:
    case ErrorCode::ConvergenceFailure:
      return kExitConvergence;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

void add_input(CLI::App* cmd, Options& o) {
  auto* m = cmd->add_option("--matrix", o.matrix, "built-in matrix name (see list-matrices)");
  auto* f = cmd->add_option("--file", o.file, "JSON matrix file");
  m->excludes(f);
}

void add_engine(CLI::App* cmd, Options& o) {
  cmd->add_option("--layers", o.layers, "entangling layers (default depends on dimension)")->check(CLI::PositiveNumber);
  cmd->add_option("--shots", o.shots, "shots per Pauli term; exact expectations when omitted")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--tol", o.tol, "simplex stopping tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "simplex iteration cap per restart")->check(CLI::PositiveNumber);
  cmd->add_option("--cluster-tol", o.cluster_tol, "eigenvalue cluster radius")->check(CLI::PositiveNumber);
  cmd->add_option("--objective", o.objective, "full or split")->check(CLI::IsMember({"full", "split"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance-based variational eigensolver for non-Hermitian matrices"};
  app.name("nhvqe");
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "multi-start spectrum search (JSON)");
  add_input(solve, o);
  add_engine(solve, o);
  solve->add_option("--starts", o.starts, "restarts per matrix dimension")->check(CLI::PositiveNumber);
  solve->add_flag("--dump-pauli", o.dump_pauli, "include the Pauli expansions in the output");

  auto* sweep = app.add_subcommand("sweep", "one optimization per initial angle (CSV)");
  add_input(sweep, o);
  add_engine(sweep, o);
  sweep->add_option("--grid", o.grid, "comma separated angles in radians")->required();

  auto* landscape = app.add_subcommand("landscape", "cost over a parameter grid (CSV)");
  add_input(landscape, o);
  add_engine(landscape, o);
  landscape->add_option("--resolution", o.resolution, "grid points per axis")->check(CLI::Range(2, 100000));
  landscape->add_option("--axes", o.axes, "one (1-D curve) or two (2-D grid) parameter indices");
  landscape->add_flag("--reduced", o.reduced, "use the two-parameter single-qubit ansatz");

  auto* cmp = app.add_subcommand("compare", "standard VQE against the variance objective (JSON)");
  add_input(cmp, o);
  add_engine(cmp, o);
  cmp->add_option("--starts", o.starts, "restarts per matrix dimension")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "classical reference spectrum (JSON)");
  add_input(oracle, o);

  auto* list = app.add_subcommand("list-matrices", "built-in matrix names and dimensions");

  auto* trace = app.add_subcommand("trace", "per-iteration cost of independent restarts (CSV)");
  add_input(trace, o);
  add_engine(trace, o);
  trace->add_option("--starts", o.starts, "number of restarts (default 5)")->check(CLI::PositiveNumber);

  for (auto* cmd : {solve, sweep, landscape, cmp, oracle, trace}) cmd->add_option("--out", o.out, "output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  std::string text;
  try {
    if (solve->parsed()) text = cmd_solve(o);
    else if (sweep->parsed()) text = cmd_sweep(o);
    else if (landscape->parsed()) text = cmd_landscape(o);
    else if (cmp->parsed()) text = cmd_compare(o);
    else if (oracle->parsed()) text = cmd_oracle(o);
    else if (list->parsed()) text = cmd_list();
    else text = cmd_trace(o);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  if (o.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(o.out, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write " << o.out << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace nhvqe
