#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nhvqe/circuit.hpp"
#include "nhvqe/matrix.hpp"
#include "nhvqe/oracle.hpp"
#include "nhvqe/pauli.hpp"
#include "nhvqe/simplex.hpp"

namespace nhvqe {

enum class Objective {
  /// <M^dag M> - |<M>|^2 = Var H + Var K + <i[H,K]>; zero exactly on eigenstates.
  FullVariance,
  /// Var H + Var K only; vanishes only on common eigenstates of H and K.
  SplitVariance,
};

/// Immutable per-matrix inputs shared by every optimization run.
struct Problem {
  DenseMatrix m;
  HermitianPair pair;
  int n_qubits = 0;
  PauliSum h, k;
  PauliSum h_sq, k_sq;
  PauliSum commutator;  // i[H,K]
  PauliSum variance_obs;  // H^2 + K^2 + i[H,K] = M^dag M
  PauliSum split_obs;     // H^2 + K^2
  DenseMatrix hk;         // dense H K, for the commutator diagnostic

  static Problem from_matrix(const DenseMatrix& m);
};

/// Exact statevector expectations when `shots == 0`, otherwise shot sampling.
struct Backend {
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  bool exact() const { return shots == 0; }
};

struct CostReport {
  double exp_h = 0.0;
  double exp_k = 0.0;
  double exp_h2 = 0.0;
  double exp_k2 = 0.0;
  double exp_commutator = 0.0;  // <i[H,K]>
  double split_cost = 0.0;      // Var H + Var K
  double cost = 0.0;            // value of the selected objective
  /// -i<[H,K]> = 2 Im<psi|HK|psi>, from dense products (exact backend only).
  double commutator_term = 0.0;
};

CostReport evaluate_cost(const Problem& problem, const StateVector& state, Objective objective = Objective::FullVariance,
                         const Backend& backend = {}, std::uint64_t eval_index = 0);
CostReport evaluate_cost(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> params,
                         Objective objective = Objective::FullVariance, const Backend& backend = {},
                         std::uint64_t eval_index = 0);

/// Objective value only; the hot path inside the optimizer.
double objective_value(const Problem& problem, const StateVector& state, Objective objective,
                       const Backend& backend = {}, std::uint64_t eval_index = 0);

/// <H> for the plain energy-minimizing VQE. Throws NotHermitianInput when K != 0.
double standard_vqe_cost(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> params);

/// <H> + i<K> from the Pauli expansions.
Complex extract_eigenvalue(const StateVector& state, const Problem& problem);
/// ||M psi - lambda psi||_2
double eigen_residual(const DenseMatrix& m, const StateVector& state, Complex lambda);

int default_layers(std::size_t dim);
double convergence_threshold(std::size_t dim);

struct EngineConfig {
  Objective objective = Objective::FullVariance;
  int layers = 0;  // 0 selects default_layers(dim)
  int starts_per_dim = 4;
  double tolerance = 1e-12;
  int max_iterations = 0;  // 0 selects 2000 * n_params
  double initial_step = 0.5;
  double cluster_tol = 1e-3;
  double threshold = 0.0;  // 0 selects convergence_threshold(dim)
  std::uint64_t seed = 0;
  Backend backend;
  int threads = 0;  // 0 reads NONHERM_VVQE_THREADS, else hardware concurrency
  bool attach_oracle = true;
};

/// Number of worker threads the engine will use for `config`.
int resolve_threads(const EngineConfig& config);

struct OptimizationRun {
  std::vector<double> initial_params;
  std::vector<double> final_params;
  std::vector<std::pair<int, double>> cost_trace;
  double final_cost = 0.0;  // exact backend
  CostReport final_report;
  Complex eigenvalue;
  double residual = 0.0;
  bool converged = false;
  bool max_iterations_exceeded = false;
  int iterations = 0;
  int evaluations = 0;
};

OptimizationRun optimize(const Problem& problem, const AnsatzSpec& ansatz, std::vector<double> initial,
                         const EngineConfig& config, std::uint64_t run_index = 0);

struct Eigenpair {
  Complex eigenvalue;
  double resonance_energy = 0.0;  // Re lambda
  double gamma = 0.0;             // -2 Im lambda
  double variance = 0.0;
  double residual = 0.0;
  int multiplicity_hits = 0;
  std::optional<double> oracle_distance;
  std::vector<double> params;
};

struct SpectrumResult {
  std::vector<Eigenpair> eigenpairs;  // sorted by (Re, Im) descending
  std::size_t runs_total = 0;
  std::size_t runs_converged = 0;
  int layers = 0;
  double threshold = 0.0;
  std::optional<std::vector<Complex>> oracle_eigenvalues;
  /// Oracle eigenvalues with no cluster within the cluster tolerance.
  std::vector<Complex> missing;

  std::vector<Complex> eigenvalues() const;
};

/// Ansatz used for a matrix of dimension `dim` under `config`.
AnsatzSpec ansatz_for(std::size_t dim, const EngineConfig& config);

/// Initial parameters of restart `index`, uniform in [0, 2pi).
std::vector<double> random_start(std::uint64_t master_seed, std::uint64_t index, int n_params);

/// Runs every restart of the multi-start schedule, in restart order.
std::vector<OptimizationRun> run_starts(const Problem& problem, const AnsatzSpec& ansatz, std::size_t count,
                                        const EngineConfig& config);

/// Groups runs with final_cost <= threshold into eigenvalue clusters.
SpectrumResult cluster_runs(const std::vector<OptimizationRun>& runs, double threshold, double cluster_tol);

SpectrumResult multi_start(const MatrixRecord& record, const EngineConfig& config);

struct SweepEntry {
  double init_angle = 0.0;
  Complex eigenvalue;
  double variance = 0.0;
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // ordered by init_angle
};

/// One optimization per angle with every parameter initialized to that angle.
SweepResult angle_sweep(const MatrixRecord& record, std::span<const double> grid, const EngineConfig& config);

struct Landscape2D {
  std::vector<double> axis;  // shared by both dimensions
  std::vector<double> cost;  // cost[i * n + j] at (axis[i], axis[j])

  double at(std::size_t i, std::size_t j) const { return cost[i * axis.size() + j]; }
};

struct Landscape1D {
  std::vector<double> theta;
  std::vector<double> cost;
  std::vector<double> eig_re;  // Re <M>
};

/// Uniform grid over [0, 2pi]^2 in parameters (first, second); others held at `base`.
Landscape2D landscape_grid(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> base,
                           int first, int second, int resolution, Objective objective = Objective::FullVariance);

Landscape1D landscape_line(const Problem& problem, const AnsatzSpec& ansatz, std::span<const double> base, int index,
                           int resolution, Objective objective = Objective::FullVariance);

/// Grid points whose cost is <= all 8 periodic neighbours.
std::vector<std::pair<std::size_t, std::size_t>> local_minima(const Landscape2D& grid);

struct CompareReport {
  bool hermitian = false;
  std::optional<double> vqe_value;
  int vqe_iterations = 0;
  std::vector<Complex> rvvqe_eigenvalues;
  double rvvqe_max_final_cost = 0.0;
  int rvvqe_iterations = 0;
  std::optional<double> least_eigenvalue;
  bool vqe_reached_least = false;
  bool rvvqe_converged_to_zero = false;
  MeasurementCostReport metrics;
};

CompareReport compare(const MatrixRecord& record, const EngineConfig& config);

}  // namespace nhvqe
