// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--known-red 5,6]
// Criteria listed as known-red still print FAIL, but do not set the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fmt/format.h>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "nhvqe/cli.hpp"
#include "nhvqe/engine.hpp"
#include "support.hpp"

using namespace nhvqe;
using C = Complex;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + std::move(note));
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string z(C v) { return fmt::format("{:.6f}{:+.6f}i", v.real(), v.imag()); }

EngineConfig config(std::uint64_t seed, int starts_per_dim = 4) {
  EngineConfig c;
  c.seed = seed;
  c.starts_per_dim = starts_per_dim;
  return c;
}

double nearest(const std::vector<C>& values, C target) { return nearest_distance(target, values); }

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = multi_start(builtin("F"), config(7));
  const double t = seconds_since(t0);
  o.check(r.eigenpairs.size() == 2, fmt::format("{} clusters", r.eigenpairs.size()));
  for (C target : {C(5.3924, -1.1050), C(-0.3924, 0.1050)}) {
    const double d = nearest(r.eigenvalues(), target);
    o.check(d <= 1e-3, fmt::format("{} within {:.2e}", z(target), d));
  }
  for (const auto& e : r.eigenpairs) o.check(e.variance <= 1e-12, fmt::format("{} variance {:.2e}", z(e.eigenvalue), e.variance));
  o.check(t < 5.0, fmt::format("runtime {:.2f}s", t));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<const char*, std::vector<C>>> expected{
      {"A", {5.8541, -0.8541}},         {"B", {C(0, 2), C(0, -2)}},
      {"C", {5.3723, -0.3723}},         {"D", {4.4495, -0.4495}},
      {"E", {C(0, 3), C(0, 0)}},        {"F", {C(5.3924, -1.1050), C(-0.3924, 0.1050)}}};
  for (const auto& [name, values] : expected) {
    const auto r = multi_start(builtin(name), config(7));
    const double second_angle = (std::string(name) == "B" || std::string(name) == "D") ? kPi / 2
                                : std::string(name) == "F"                               ? kPi / 3
                                                                                         : kPi;
    const auto sweep = angle_sweep(builtin(name), std::vector<double>{0.0, second_angle}, config(7));
    std::vector<C> found = r.eigenvalues();
    double worst = 0.0;
    for (const auto& e : r.eigenpairs) worst = std::max(worst, e.variance);
    for (const auto& e : sweep.entries) {
      if (!e.converged) continue;
      found.push_back(e.eigenvalue);
      worst = std::max(worst, e.variance);
    }
    for (C target : values) {
      const double d = nearest(found, target);
      o.check(d <= 1e-3, fmt::format("{}: {} within {:.2e}", name, z(target), d));
    }
    o.check(worst <= 1e-12, fmt::format("{}: max variance {:.2e}", name, worst));
    std::string pairing;
    for (const auto& e : sweep.entries)
      pairing += fmt::format(" theta={:.4f}->{}{}", e.init_angle, z(e.eigenvalue), e.converged ? "" : "(not converged)");
    o.notes.push_back(fmt::format("info {} sweep:{}", name, pairing));
  }
  const double t = seconds_since(t0);
  o.check(t < 30.0, fmt::format("runtime {:.2f}s", t));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m2 = builtin("M2");
  const auto r = multi_start(m2, config(42, 8));
  const double t = seconds_since(t0);
  for (C target : {C(10.5188, -0.5892), C(-1.6142, -0.5359), C(3.7513, -1.0559), C(3.3441, 2.1809)}) {
    const double d = nearest(r.eigenvalues(), target);
    o.check(d <= 1e-3, fmt::format("{} within {:.2e}", z(target), d));
  }
  for (const auto& e : r.eigenpairs) o.check(e.variance <= 1e-10, fmt::format("{} variance {:.2e}", z(e.eigenvalue), e.variance));
  const auto match = spectrum_match(r.eigenvalues(), eigen(m2.matrix, {.eigenvectors = false}).eigenvalues, 1e-3);
  o.check(match.all_matched() && match.max_distance <= 1e-3,
          fmt::format("oracle match: {} pairs, max distance {:.2e}", match.pairs.size(), match.max_distance));
  o.check(t < 120.0, fmt::format("runtime {:.2f}s", t));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m3 = builtin("M3");
  const auto r = multi_start(m3, config(7, 8));
  const double t = seconds_since(t0);
  for (C target : {C(-0.4866, 9.6633), C(-0.3361, 7.4468), C(-0.8231, 11.8959)}) {
    const double d = nearest(r.eigenvalues(), target);
    o.check(d <= 5e-3, fmt::format("{} within {:.2e}", z(target), d));
  }
  const auto oracle = eigen(m3.matrix, {.eigenvectors = false}).eigenvalues;
  for (const auto& e : r.eigenpairs) {
    const double d = nearest(oracle, e.eigenvalue);
    o.check(d <= 1e-3 && e.variance <= 1e-6,
            fmt::format("{} oracle distance {:.2e}, variance {:.2e}", z(e.eigenvalue), d, e.variance));
  }
  o.notes.push_back(fmt::format("info {} of 8 eigenvalues found, {} of {} restarts converged, {} layers",
                                r.eigenpairs.size(), r.runs_converged, r.runs_total, r.layers));
  o.check(t < 900.0, fmt::format("runtime {:.2f}s", t));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto problem = Problem::from_matrix(builtin("M1").matrix);
  const auto a = build_ansatz(1, 1, AnsatzVariant::Reduced2Param);
  struct Point {
    const char* name;
    double t1, t2;
    C lambda;
  };
  const Point points[] = {{"P1", 6.2467, 2.2802, {5.3924, -1.1050}},
                          {"P2", 3.1051, 4.0030, {5.3924, -1.1050}},
                          {"P3", -0.0365, 2.2802, {5.3924, -1.1050}},
                          {"P4", 3.7084, 0.6173, {-0.3924, 0.1050}},
                          {"P5", 0.5668, 5.6658, {-0.3924, 0.1050}}};
  for (const auto& p : points) {
    const StateVector psi = prepare(a, std::vector<double>{p.t1, p.t2});
    const double cost = evaluate_cost(problem, psi).cost;
    const C lambda = extract_eigenvalue(psi, problem);
    o.check(cost <= 1e-8, fmt::format("{} cost {:.3e}", p.name, cost));
    o.check(std::abs(lambda - p.lambda) <= 1e-3, fmt::format("{} eigenvalue {} (expected {})", p.name, z(lambda), z(p.lambda)));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);

  {
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    double worst = INFINITY;
    for (int i = 0; i < 10000; ++i) {
      const int n = 1 + i % 3;
      const auto problem = Problem::from_matrix(testing::random_matrix(std::size_t{1} << n, rng, 2.0));
      const auto a = build_ansatz(n, default_layers(std::size_t{1} << n));
      std::vector<double> p(static_cast<std::size_t>(a.n_params));
      for (auto& x : p) x = u(rng);
      worst = std::min(worst, objective_value(problem, prepare(a, p), Objective::FullVariance));
      if (i % 10 == 0) {
        const auto spec = eigen(problem.m);
        for (const auto& v : *spec.eigenvectors)
          worst = std::min(worst, objective_value(problem, StateVector(n, v), Objective::FullVariance));
      }
    }
    o.check(worst >= -1e-12, fmt::format("non-negativity: min cost over 10^4 ansatz samples and oracle eigenvectors {:.3e}", worst));
  }

  {
    double worst_oracle_cost = 0.0, worst_run_residual = 0.0, worst_comm = 0.0;
    std::string worst_comm_name;
    int converged = 0;
    for (const char* name : {"A", "B", "C", "D", "E", "F", "M2"}) {
      const auto rec = builtin(name);
      const auto problem = Problem::from_matrix(rec.matrix);
      const auto spec = eigen(rec.matrix);
      for (const auto& v : *spec.eigenvectors)
        worst_oracle_cost = std::max(worst_oracle_cost, evaluate_cost(problem, StateVector(problem.n_qubits, v)).cost);
      const auto ansatz = ansatz_for(rec.matrix.dim(), config(5));
      for (const auto& run : run_starts(problem, ansatz, 4 * rec.matrix.dim(), config(5))) {
        if (run.final_cost > 1e-10) continue;
        ++converged;
        worst_run_residual = std::max(worst_run_residual, run.residual);
        if (std::abs(run.final_report.commutator_term) > worst_comm) {
          worst_comm = std::abs(run.final_report.commutator_term);
          worst_comm_name = name;
        }
      }
    }
    o.check(worst_oracle_cost <= 1e-10, fmt::format("oracle eigenvectors: max cost {:.2e}", worst_oracle_cost));
    o.check(worst_run_residual <= 1e-4,
            fmt::format("{} converged runs: max residual {:.2e}", converged, worst_run_residual));
    o.check(worst_comm <= 1e-6,
            fmt::format("commutator diagnostic at convergence: max {:.3e} ({})", worst_comm, worst_comm_name));
  }

  {
    double worst_rt = 0.0, worst_sq = 0.0;
    for (std::size_t d : {2U, 4U, 8U, 16U}) {
      for (int i = 0; i < 10; ++i) {
        const auto h = testing::random_hermitian(d, rng);
        const auto p = decompose_pauli(h);
        worst_rt = std::max(worst_rt, max_abs_diff(to_matrix(p), h));
        worst_sq = std::max(worst_sq, max_abs_diff(to_matrix(square_sum(p)), h * h));
      }
    }
    o.check(worst_rt <= 1e-12, fmt::format("Pauli round trip {:.2e}", worst_rt));
    o.check(worst_sq <= 1e-10, fmt::format("square_sum homomorphism {:.2e}", worst_sq));
  }

  {
    double worst_tr = 0.0, worst_det = 0.0;
    for (int i = 0; i < 500; ++i) {
      const std::size_t d = 2 + static_cast<std::size_t>(rng() % 15);
      const auto m = testing::random_matrix(d, rng);
      const auto s = eigen(m, {.eigenvectors = false});
      C sum = 0.0, prod = 1.0;
      for (auto v : s.eigenvalues) {
        sum += v;
        prod *= v;
      }
      worst_tr = std::max(worst_tr, std::abs(sum - m.trace()) / (1.0 + std::abs(m.trace())));
      if (d <= 8) {
        const C det = testing::lu_determinant(m);
        worst_det = std::max(worst_det, std::abs(prod - det) / std::abs(det));
      }
    }
    o.check(worst_tr <= 1e-8, fmt::format("trace identity {:.2e}", worst_tr));
    o.check(worst_det <= 1e-6, fmt::format("determinant identity {:.2e}", worst_det));
  }

  {
    const StateVector psi(2, testing::random_state(4, rng));
    const auto obs = decompose_pauli(testing::random_hermitian(4, rng));
    auto spread = [&](std::uint64_t shots) {
      double s1 = 0.0, s2 = 0.0;
      const int reps = 400;
      for (int seed = 0; seed < reps; ++seed) {
        const double e = sample_expectation(psi, obs, shots, static_cast<std::uint64_t>(seed)).estimate;
        s1 += e;
        s2 += e * e;
      }
      const double mean = s1 / reps;
      return std::sqrt((s2 - reps * mean * mean) / (reps - 1));
    };
    const double ratio = spread(500) / spread(2000);
    o.check(ratio > 1.7 && ratio < 2.3, fmt::format("shot stderr ratio for 4x shots {:.3f}", ratio));
  }

  const double t = seconds_since(t0);
  o.check(t < 120.0, fmt::format("runtime {:.2f}s", t));
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int i = 0; i < 3; ++i) {
    MatrixRecord rec{fmt::format("herm8_{}", i), testing::random_hermitian(8, rng), std::nullopt};
    const auto r = compare(rec, config(11));
    o.check(r.metrics.h2_terms <= r.metrics.h_terms * r.metrics.h_terms,
            fmt::format("{}: N(H^2)={} <= N(H)^2={}", rec.name, r.metrics.h2_terms, r.metrics.h_terms * r.metrics.h_terms));
    o.check(r.rvvqe_converged_to_zero && r.rvvqe_max_final_cost <= convergence_threshold(8),
            fmt::format("{}: variance objective converges to {:.2e}", rec.name, r.rvvqe_max_final_cost));
    o.check(r.hermitian && r.vqe_value.has_value() && r.vqe_reached_least,
            fmt::format("{}: VQE minimum {:.6f}, least eigenvalue {:.6f}", rec.name, r.vqe_value.value_or(NAN),
                        r.least_eigenvalue.value_or(NAN)));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  auto solve = [](const char* threads) {
    setenv("NONHERM_VVQE_THREADS", threads, 1);
    std::ostringstream out, err;
    const int code = run_cli({"solve", "--matrix", "M2", "--seed", "42"}, out, err);
    return std::make_pair(code, out.str());
  };
  const auto a = solve("1");
  const auto b = solve("1");
  const auto c = solve("4");
  unsetenv("NONHERM_VVQE_THREADS");
  o.check(a.first == 0 && b.first == 0 && c.first == 0, "exit codes zero");
  o.check(a.second == b.second, "repeat run byte identical");
  o.check(a.second == c.second, fmt::format("1 vs 4 threads byte identical ({} bytes)", a.second.size()));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) != "--known-red") continue;
    std::stringstream ss(argv[i + 1]);
    std::string item;
    while (std::getline(ss, item, ',')) known_red.insert(std::stoi(item));
  }

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"2x2 spectrum of M1", criterion1},
      {"2x2 matrices A-F", criterion2},
      {"M2 spectrum", criterion3},
      {"M3 reference values and soundness", criterion4},
      {"two-parameter landscape points P1-P5", criterion5},
      {"property suite", criterion6},
      {"measurement scaling on hermitian 8x8", criterion7},
      {"determinism of solve output", criterion8},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const bool red = known_red.count(id) > 0;
    std::printf("%s criterion %d: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                !o.pass && red ? " [known red]" : "");
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass && !red) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
