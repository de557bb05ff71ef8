#include "nhvqe/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "nhvqe/errors.hpp"
#include "nhvqe/random.hpp"

namespace nhvqe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// fn(i) for i in [0, count) on up to `threads` workers
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double measure(const StateVector& state, const PauliSum& obs, const Backend& backend, std::uint64_t eval_index,
               std::uint64_t slot) {
  if (backend.exact()) return expectation_real(state, obs);
  return sample_expectation(state, obs, backend.shots, derive_seed(backend.seed, eval_index * 8 + slot)).estimate;
}

// (Re, Im) descending, compared on a 1e-9 grid
bool spectral_greater(Complex a, Complex b) {
  constexpr double q = 1e-9;
  const double ar = std::round(a.real() / q), br = std::round(b.real() / q);
  if (ar != br) return ar > br;
  return std::round(a.imag() / q) > std::round(b.imag() / q);
}

int resolved_max_iterations(const EngineConfig& config, int n_params) {
  return config.max_iterations > 0 ? config.max_iterations : 2000 * std::max(1, n_params);
}

double resolved_threshold(const EngineConfig& config, std::size_t dim) {
  return config.threshold > 0.0 ? config.threshold : convergence_threshold(dim);
}

void validate(const EngineConfig& config) {
  if (config.starts_per_dim < 1) throw Error(ErrorCode::InvalidArgument, "starts_per_dim must be >= 1");
  if (config.layers < 0) throw Error(ErrorCode::InvalidArgument, "layers must be positive");
  if (!(config.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (config.max_iterations < 0) throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
  if (!(config.cluster_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster tolerance must be positive");
  if (config.threshold < 0.0) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
}

}  // namespace

Problem Problem::from_matrix(const DenseMatrix& m) {
  Problem p;
  p.m = m;
  p.pair = cartesian_decompose(m);
  p.n_qubits = qubit_count(m.dim());
  if (p.n_qubits < 1) throw Error(ErrorCode::InvalidArgument, "matrix must be at least 2x2");
  p.h = decompose_pauli(p.pair.h);
  p.k = decompose_pauli(p.pair.k);
  p.h_sq = square_sum(p.h);
  p.k_sq = square_sum(p.k);
  p.commutator = commutator_i(p.h, p.k);
  p.split_obs = add(p.h_sq, p.k_sq);
  p.variance_obs = add(p.split_obs, p.commutator);
  p.hk = p.pair.h * p.pair.k;
  return p;
}

double objective_value(const Problem& problem, const StateVector& state, Objective objective, const Backend& backend,
                       std::uint64_t eval_index) {
  const PauliSum& second = objective == Objective::FullVariance ? problem.variance_obs : problem.split_obs;
  const double eh = measure(state, problem.h, backend, eval_index, 0);
  const double ek = measure(state, problem.k, backend, eval_index, 1);
  const double e2 = measure(state, second, backend, eval_index, 2);
  return e2 - eh * eh - ek * ek;
}

CostReport evaluate_cost(const Problem& problem, const StateVector& state, Objective objective, const Backend& backend,
                         std::uint64_t eval_index) {
  if (state.n_qubits() != problem.n_qubits) throw Error(ErrorCode::DimensionMismatch, "state/problem qubit counts differ");
  CostReport r;
  r.exp_h = measure(state, problem.h, backend, eval_index, 0);
  r.exp_k = measure(state, problem.k, backend, eval_index, 1);
  r.exp_h2 = measure(state, problem.h_sq, backend, eval_index, 3);
  r.exp_k2 = measure(state, problem.k_sq, backend, eval_index, 4);
  r.exp_commutator = measure(state, problem.commutator, backend, eval_index, 5);
  r.split_cost = r.exp_h2 + r.exp_k2 - r.exp_h * r.exp_h - r.exp_k * r.exp_k;
  r.cost = objective == Objective::FullVariance ? r.split_cost + r.exp_commutator : r.split_cost;
  r.commutator_term = 2.0 * expectation_complex(state, problem.hk).imag();
  return r;
}

CostReport evaluate_cost(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> params,
                         Objective objective, const Backend& backend, std::uint64_t eval_index) {
  if (ansatz.n_qubits != problem.n_qubits) throw Error(ErrorCode::DimensionMismatch, "ansatz/problem qubit counts differ");
  return evaluate_cost(problem, prepare(ansatz, params), objective, backend, eval_index);
}

double standard_vqe_cost(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> params) {
  if (problem.pair.k.max_abs() > 1e-10) {
    throw Error(ErrorCode::NotHermitianInput, "standard VQE applies to Hermitian matrices only");
  }
  if (ansatz.n_qubits != problem.n_qubits) throw Error(ErrorCode::DimensionMismatch, "ansatz/problem qubit counts differ");
  return expectation_real(prepare(ansatz, params), problem.h);
}

Complex extract_eigenvalue(const StateVector& state, const Problem& problem) {
  return {expectation_real(state, problem.h), expectation_real(state, problem.k)};
}

double eigen_residual(const DenseMatrix& m, const StateVector& state, Complex lambda) {
  const auto amps = state.amplitudes();
  auto r = m.apply(amps);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += std::norm(r[i] - lambda * amps[i]);
  return std::sqrt(s);
}

int default_layers(std::size_t dim) {
  if (dim <= 2) return 1;
  if (dim <= 4) return 2;
  return 3;
}

double convergence_threshold(std::size_t dim) {
  if (dim <= 2) return 1e-12;
  if (dim <= 4) return 1e-10;
  return 1e-6;
}

int resolve_threads(const EngineConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("NONHERM_VVQE_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

std::vector<Complex> SpectrumResult::eigenvalues() const {
  std::vector<Complex> out;
  out.reserve(eigenpairs.size());
  for (const auto& e : eigenpairs) out.push_back(e.eigenvalue);
  return out;
}

AnsatzSpec ansatz_for(std::size_t dim, const EngineConfig& config) {
  const int layers = config.layers > 0 ? config.layers : default_layers(dim);
  return build_ansatz(qubit_count(dim), layers, AnsatzVariant::FullZYZ);
}

std::vector<double> random_start(std::uint64_t master_seed, std::uint64_t index, int n_params) {
  Rng rng(derive_seed(master_seed, index));
  std::vector<double> x(static_cast<std::size_t>(n_params));
  for (auto& v : x) v = kTwoPi * rng.uniform();
  return x;
}

OptimizationRun optimize(const Problem& problem, const AnsatzSpec& ansatz, std::vector<double> initial,
                         const EngineConfig& config, std::uint64_t run_index) {
  validate(config);
  if (static_cast<int>(initial.size()) != ansatz.n_params) {
    throw Error(ErrorCode::ParamCountMismatch, "initial parameter count does not match the ansatz");
  }
  const Backend backend{config.backend.shots, derive_seed(config.backend.seed, run_index)};
  std::uint64_t eval_index = 0;
  const Objective1D f = [&](std::span<const double> x) {
    return objective_value(problem, prepare(ansatz, x), config.objective, backend, eval_index++);
  };
  SimplexOptions opt;
  opt.tolerance = config.tolerance;
  opt.max_iterations = resolved_max_iterations(config, ansatz.n_params);
  opt.initial_step = config.initial_step;

  OptimizationRun run;
  run.initial_params = initial;
  SimplexResult res = minimize_simplex(f, std::move(initial), opt);
  run.final_params = std::move(res.x);
  run.cost_trace = std::move(res.trace);
  run.iterations = res.iterations;
  run.evaluations = res.evaluations;
  run.max_iterations_exceeded = res.hit_max_iterations;

  const StateVector psi = prepare(ansatz, run.final_params);
  run.final_report = evaluate_cost(problem, psi, config.objective);
  run.final_cost = run.final_report.cost;
  run.eigenvalue = extract_eigenvalue(psi, problem);
  run.residual = eigen_residual(problem.m, psi, run.eigenvalue);
  run.converged = run.final_cost <= resolved_threshold(config, problem.m.dim());
  return run;
}

std::vector<OptimizationRun> run_starts(const Problem& problem, const AnsatzSpec& ansatz, std::size_t count,
                                        const EngineConfig& config) {
  validate(config);
  std::vector<OptimizationRun> runs(count);
  parallel_for(count, resolve_threads(config), [&](std::size_t i) {
    runs[i] = optimize(problem, ansatz, random_start(config.seed, i, ansatz.n_params), config, i);
  });
  return runs;
}

SpectrumResult cluster_runs(const std::vector<OptimizationRun>& runs, double threshold, double cluster_tol) {
  struct Cluster {
    Complex center;
    std::size_t best;
    int hits;
  };
  std::vector<Cluster> clusters;
  SpectrumResult result;
  result.runs_total = runs.size();
  result.threshold = threshold;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    if (!(r.final_cost <= threshold)) continue;
    ++result.runs_converged;
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const Cluster& c) { return std::abs(c.center - r.eigenvalue) <= cluster_tol; });
    if (it == clusters.end()) {
      clusters.push_back({r.eigenvalue, i, 1});
    } else {
      ++it->hits;
      if (r.final_cost < runs[it->best].final_cost) it->best = i;
    }
  }
  // merge clusters whose representatives drifted within tolerance
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < clusters.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b) {
        if (std::abs(runs[clusters[a].best].eigenvalue - runs[clusters[b].best].eigenvalue) <= cluster_tol) {
          clusters[a].hits += clusters[b].hits;
          if (runs[clusters[b].best].final_cost < runs[clusters[a].best].final_cost) clusters[a].best = clusters[b].best;
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
    }
  }
  for (const auto& c : clusters) {
    const auto& r = runs[c.best];
    Eigenpair e;
    e.eigenvalue = r.eigenvalue;
    e.resonance_energy = r.eigenvalue.real();
    e.gamma = -2.0 * r.eigenvalue.imag();
    e.variance = r.final_cost;
    e.residual = r.residual;
    e.multiplicity_hits = c.hits;
    e.params = r.final_params;
    result.eigenpairs.push_back(std::move(e));
  }
  std::stable_sort(result.eigenpairs.begin(), result.eigenpairs.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return spectral_greater(a.eigenvalue, b.eigenvalue); });
  return result;
}

SpectrumResult multi_start(const MatrixRecord& record, const EngineConfig& config) {
  validate(config);
  const Problem problem = Problem::from_matrix(record.matrix);
  const AnsatzSpec ansatz = ansatz_for(record.matrix.dim(), config);
  const std::size_t count = static_cast<std::size_t>(config.starts_per_dim) * record.matrix.dim();
  const auto runs = run_starts(problem, ansatz, count, config);

  SpectrumResult result = cluster_runs(runs, resolved_threshold(config, record.matrix.dim()), config.cluster_tol);
  result.layers = ansatz.layers;
  if (result.eigenpairs.empty()) {
    throw Error(ErrorCode::NoConvergedRuns,
                "none of " + std::to_string(count) + " restarts reached variance <= " + std::to_string(result.threshold));
  }
  if (config.attach_oracle) {
    const auto oracle = eigen(record.matrix, {.eigenvectors = false});
    for (auto& e : result.eigenpairs) e.oracle_distance = nearest_distance(e.eigenvalue, oracle.eigenvalues);
    for (const auto& z : oracle.eigenvalues)
      if (nearest_distance(z, result.eigenvalues()) > config.cluster_tol) result.missing.push_back(z);
    result.oracle_eigenvalues = oracle.eigenvalues;
  }
  return result;
}

SweepResult angle_sweep(const MatrixRecord& record, std::span<const double> grid, const EngineConfig& config) {
  validate(config);
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "angle grid is empty");
  for (double a : grid) {
    if (!std::isfinite(a) || a < 0.0 || a > kTwoPi + 1e-3) {
      throw Error(ErrorCode::InvalidArgument, "sweep angles must lie in [0, 2pi]");
    }
  }
  std::vector<double> angles(grid.begin(), grid.end());
  std::stable_sort(angles.begin(), angles.end());

  const Problem problem = Problem::from_matrix(record.matrix);
  const AnsatzSpec ansatz = ansatz_for(record.matrix.dim(), config);
  const double threshold = resolved_threshold(config, record.matrix.dim());
  SweepResult out;
  out.entries.resize(angles.size());
  parallel_for(angles.size(), resolve_threads(config), [&](std::size_t i) {
    std::vector<double> init(static_cast<std::size_t>(ansatz.n_params), angles[i]);
    const auto run = optimize(problem, ansatz, std::move(init), config, i);
    out.entries[i] = {angles[i], run.eigenvalue, run.final_cost, run.final_cost <= threshold};
  });
  return out;
}

Landscape2D landscape_grid(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> base, int first,
                           int second, int resolution, Objective objective) {
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 2");
  if (static_cast<int>(base.size()) != ansatz.n_params) throw Error(ErrorCode::ParamCountMismatch, "base parameters");
  if (first < 0 || second < 0 || first >= ansatz.n_params || second >= ansatz.n_params || first == second) {
    throw Error(ErrorCode::InvalidArgument, "landscape axes must be two distinct parameter indices");
  }
  const auto n = static_cast<std::size_t>(resolution);
  Landscape2D out;
  out.axis.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.axis[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1);
  out.cost.resize(n * n);
  std::vector<double> x(base.begin(), base.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      x[static_cast<std::size_t>(first)] = out.axis[i];
      x[static_cast<std::size_t>(second)] = out.axis[j];
      out.cost[i * n + j] = objective_value(problem, prepare(ansatz, x), objective);
    }
  }
  return out;
}

Landscape1D landscape_line(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> base, int index,
                           int resolution, Objective objective) {
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 2");
  if (static_cast<int>(base.size()) != ansatz.n_params) throw Error(ErrorCode::ParamCountMismatch, "base parameters");
  if (index < 0 || index >= ansatz.n_params) throw Error(ErrorCode::InvalidArgument, "landscape parameter index");
  const auto n = static_cast<std::size_t>(resolution);
  Landscape1D out;
  std::vector<double> x(base.begin(), base.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1);
    x[static_cast<std::size_t>(index)] = t;
    const StateVector psi = prepare(ansatz, x);
    out.theta.push_back(t);
    out.cost.push_back(objective_value(problem, psi, objective));
    out.eig_re.push_back(expectation_real(psi, problem.h));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> local_minima(const Landscape2D& grid) {
  // last grid line duplicates the first
  const std::size_t n = grid.axis.size();
  const std::size_t period = n - 1;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < period; ++i) {
    for (std::size_t j = 0; j < period; ++j) {
      const double c = grid.at(i, j);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          if (di == 0 && dj == 0) continue;
          const std::size_t ii = (i + period + static_cast<std::size_t>(di + 1) - 1) % period;
          const std::size_t jj = (j + period + static_cast<std::size_t>(dj + 1) - 1) % period;
          if (grid.at(ii, jj) < c) is_min = false;
        }
      }
      if (is_min) out.emplace_back(i, j);
    }
  }
  return out;
}

CompareReport compare(const MatrixRecord& record, const EngineConfig& config) {
  validate(config);
  const Problem problem = Problem::from_matrix(record.matrix);
  const AnsatzSpec ansatz = ansatz_for(record.matrix.dim(), config);
  const std::size_t count = static_cast<std::size_t>(config.starts_per_dim) * record.matrix.dim();

  CompareReport rep;
  rep.metrics = term_metrics(problem.h, problem.k);
  rep.hermitian = problem.pair.k.max_abs() <= 1e-10;

  const auto runs = run_starts(problem, ansatz, count, config);
  const SpectrumResult spectrum = cluster_runs(runs, resolved_threshold(config, record.matrix.dim()), config.cluster_tol);
  rep.rvvqe_eigenvalues = spectrum.eigenvalues();
  for (const auto& r : runs) {
    rep.rvvqe_iterations += r.iterations;
    if (r.converged) rep.rvvqe_max_final_cost = std::max(rep.rvvqe_max_final_cost, r.final_cost);
  }
  rep.rvvqe_converged_to_zero = spectrum.runs_converged > 0;

  if (rep.hermitian) {
    const auto oracle = eigen(record.matrix, {.eigenvectors = false});
    double least = oracle.eigenvalues.front().real();
    for (const auto& z : oracle.eigenvalues) least = std::min(least, z.real());
    rep.least_eigenvalue = least;

    SimplexOptions opt;
    opt.tolerance = config.tolerance;
    opt.max_iterations = resolved_max_iterations(config, ansatz.n_params);
    opt.initial_step = config.initial_step;
    std::vector<SimplexResult> vqe(count);
    parallel_for(count, resolve_threads(config), [&](std::size_t i) {
      const Objective1D f = [&](std::span<const double> x) { return standard_vqe_cost(problem, ansatz, x); };
      vqe[i] = minimize_simplex(f, random_start(config.seed, i, ansatz.n_params), opt);
    });
    double best = vqe.front().value;
    for (const auto& v : vqe) {
      best = std::min(best, v.value);
      rep.vqe_iterations += v.iterations;
    }
    rep.vqe_value = best;
    rep.vqe_reached_least = std::abs(best - least) <= 1e-4;
  }
  return rep;
}

}  // namespace nhvqe
