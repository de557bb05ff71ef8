#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nhvqe/engine.hpp"
#include "nhvqe/cli.hpp"
#include "nhvqe/errors.hpp"

#include <sstream>

namespace py = pybind11;
using namespace nhvqe;

namespace {

DenseMatrix to_dense(const std::vector<std::vector<Complex>>& rows) {
  const std::size_t d = rows.size();
  std::vector<Complex> flat;
  flat.reserve(d * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return DenseMatrix(d, std::move(flat));
}

std::vector<std::vector<Complex>> to_rows(const DenseMatrix& m) {
  std::vector<std::vector<Complex>> rows(m.dim(), std::vector<Complex>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) rows[i][j] = m(i, j);
  return rows;
}

EngineConfig make_config(std::uint64_t seed, int starts_per_dim, int layers, std::uint64_t shots, double tol,
                         int max_iter, double cluster_tol, const std::string& objective) {
  EngineConfig c;
  c.seed = seed;
  c.starts_per_dim = starts_per_dim;
  c.layers = layers;
  c.backend = {shots, seed};
  c.tolerance = tol;
  c.max_iterations = max_iter;
  c.cluster_tol = cluster_tol;
  if (objective == "split") c.objective = Objective::SplitVariance;
  else if (objective != "full") throw Error(ErrorCode::InvalidArgument, "objective must be 'full' or 'split'");
  return c;
}

MatrixRecord record_of(const py::object& m) {
  if (py::isinstance<py::str>(m)) return builtin(m.cast<std::string>());
  return {"python", to_dense(m.cast<std::vector<std::vector<Complex>>>()), std::nullopt};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variance-based variational eigensolver for non-Hermitian matrices";

  py::register_exception<Error>(m, "Error");

  m.def("builtin_names", &builtin_names);
  m.def("builtin", [](const std::string& name) { return to_rows(builtin(name).matrix); }, py::arg("name"));

  m.def(
      "cartesian_decompose",
      [](const std::vector<std::vector<Complex>>& rows) {
        const auto p = cartesian_decompose(to_dense(rows));
        return py::make_tuple(to_rows(p.h), to_rows(p.k));
      },
      py::arg("matrix"));

  m.def(
      "decompose_pauli",
      [](const std::vector<std::vector<Complex>>& rows) {
        std::vector<std::pair<std::string, double>> terms;
        const PauliSum sum = decompose_pauli(to_dense(rows));
        for (const auto& t : sum.terms()) terms.emplace_back(t.string.axes(), t.coeff);
        return terms;
      },
      py::arg("hermitian"));

  m.def(
      "eigenvalues",
      [](const py::object& matrix) { return eigen(record_of(matrix).matrix, {.eigenvectors = false}).eigenvalues; },
      py::arg("matrix"), "Reference spectrum from the classical oracle, sorted by (Re, Im) descending.");

  m.def(
      "variance",
      [](const py::object& matrix, const std::vector<Complex>& state) {
        const auto problem = Problem::from_matrix(record_of(matrix).matrix);
        const StateVector psi(problem.n_qubits, state);
        const auto r = evaluate_cost(problem, psi);
        py::dict d;
        d["cost"] = r.cost;
        d["split_cost"] = r.split_cost;
        d["commutator_term"] = r.commutator_term;
        d["eigenvalue"] = extract_eigenvalue(psi, problem);
        return d;
      },
      py::arg("matrix"), py::arg("state"));

  m.def(
      "solve",
      [](const py::object& matrix, std::uint64_t seed, int starts_per_dim, int layers, std::uint64_t shots, double tol,
         int max_iter, double cluster_tol, const std::string& objective) {
        const auto config = make_config(seed, starts_per_dim, layers, shots, tol, max_iter, cluster_tol, objective);
        const MatrixRecord rec = record_of(matrix);
        SpectrumResult r;
        {
          py::gil_scoped_release release;
          r = multi_start(rec, config);
        }
        py::list pairs;
        for (const auto& e : r.eigenpairs) {
          py::dict d;
          d["eigenvalue"] = e.eigenvalue;
          d["resonance_energy"] = e.resonance_energy;
          d["gamma"] = e.gamma;
          d["variance"] = e.variance;
          d["residual"] = e.residual;
          d["multiplicity_hits"] = e.multiplicity_hits;
          d["oracle_distance"] = e.oracle_distance ? py::cast(*e.oracle_distance) : py::none();
          pairs.append(d);
        }
        py::dict out;
        out["eigenpairs"] = pairs;
        out["runs_total"] = r.runs_total;
        out["runs_converged"] = r.runs_converged;
        out["layers"] = r.layers;
        out["missing"] = r.missing;
        return out;
      },
      py::arg("matrix"), py::arg("seed") = 0, py::arg("starts_per_dim") = 4, py::arg("layers") = 0,
      py::arg("shots") = 0, py::arg("tol") = 1e-12, py::arg("max_iter") = 0, py::arg("cluster_tol") = 1e-3,
      py::arg("objective") = "full");

  m.def(
      "sweep",
      [](const py::object& matrix, const std::vector<double>& grid, std::uint64_t seed) {
        const auto rec = record_of(matrix);
        const auto r = angle_sweep(rec, grid, make_config(seed, 4, 0, 0, 1e-12, 0, 1e-3, "full"));
        std::vector<std::tuple<double, Complex, double>> rows;
        for (const auto& e : r.entries) rows.emplace_back(e.init_angle, e.eigenvalue, e.variance);
        return rows;
      },
      py::arg("matrix"), py::arg("grid"), py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
