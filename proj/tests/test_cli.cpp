#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "nhvqe/cli.hpp"
#include "nhvqe/matrix.hpp"
#include "nhvqe/oracle.hpp"
#include "support.hpp"

using nhvqe::Complex;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nhvqe::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<Complex> eigenvalues(const nlohmann::json& pairs) {
  std::vector<Complex> v;
  for (const auto& p : pairs) v.emplace_back(p["re"].get<double>(), p["im"].get<double>());
  return v;
}

}  // namespace

TEST_CASE("solve M1") {
  const auto r = run({"solve", "--matrix", "M1", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto eig = eigenvalues(j["eigenpairs"]);
  REQUIRE(eig.size() == 2);
  CHECK(std::abs(eig[0] - Complex(5.3924, -1.1050)) <= 1e-3);
  CHECK(std::abs(eig[1] - Complex(-0.3924, 0.1050)) <= 1e-3);
  for (const auto& p : j["eigenpairs"]) {
    CHECK(p["variance"].get<double>() <= 1e-12);
    CHECK(p["oracle_distance"].get<double>() <= 1e-3);
    CHECK(p.contains("resonance_energy"));
    CHECK(p.contains("gamma"));
    CHECK(p.contains("residual"));
  }
  CHECK(j["missing"].empty());
}

TEST_CASE("solve output is byte identical across runs and thread counts") {
  const auto a = run({"solve", "--matrix", "M2", "--seed", "42"});
  setenv("NONHERM_VVQE_THREADS", "3", 1);
  const auto b = run({"solve", "--matrix", "M2", "--seed", "42"});
  unsetenv("NONHERM_VVQE_THREADS");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("floats carry full precision") {
  const auto r = run({"oracle", "--matrix", "D"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("4.4494897427831") != std::string::npos);
}

TEST_CASE("solve from a file") {
  const auto path = std::filesystem::temp_directory_path() / "nhvqe_cli_diag2.json";
  {
    std::ofstream f(path);
    f << R"({"name": "diag2", "entries": [[1, 0], [0, 2]]})";
  }
  const auto r = run({"solve", "--file", path.string()});
  std::filesystem::remove(path);
  REQUIRE(r.code == 0);
  const auto eig = eigenvalues(nlohmann::json::parse(r.out)["eigenpairs"]);
  REQUIRE(eig.size() == 2);
  CHECK(std::abs(eig[0] - 2.0) <= 1e-6);
  CHECK(std::abs(eig[1] - 1.0) <= 1e-6);
}

TEST_CASE("dump pauli") {
  const auto r = run({"solve", "--matrix", "A", "--dump-pauli"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pauli"]["h"].size() == 3);
  CHECK(j["pauli"]["k"].empty());
}

TEST_CASE("sweep CSV") {
  const auto r = run({"sweep", "--matrix", "F", "--grid", "0,1.0472"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"angle_rad", "eig_re", "eig_im", "variance"});
  const auto spectrum = nhvqe::eigen(nhvqe::builtin("F").matrix).eigenvalues;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Complex z(std::stod(rows[i][1]), std::stod(rows[i][2]));
    CHECK(testing::contains(spectrum, z, 1e-3));
    CHECK(std::stod(rows[i][3]) <= 1e-12);
  }

  const auto c = csv(run({"sweep", "--matrix", "C", "--grid", "0,3.14159"}).out);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(std::stod(c[1][1]) - std::stod(c[2][1])) == doctest::Approx(5.7446).epsilon(1e-4));
}

TEST_CASE("usage errors") {
  CHECK(run({"sweep", "--matrix", "A", "--grid", ""}).code == 2);
  CHECK(run({"sweep", "--matrix", "A"}).code == 2);
  CHECK(run({"sweep", "--matrix", "A", "--grid", "0,x"}).code == 2);
  CHECK(run({"landscape", "--matrix", "A", "--resolution", "1"}).code == 2);
  CHECK(run({"solve"}).code == 2);
  CHECK(run({"solve", "--matrix", "A", "--file", "x.json"}).code == 2);
  CHECK(run({"solve", "--matrix", "Q"}).code == 2);
  CHECK(run({"solve", "--matrix", "A", "--starts", "0"}).code == 2);
  CHECK(run({"solve", "--matrix", "A", "--shots", "0"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("io and convergence exit codes") {
  CHECK(run({"solve", "--file", "/nonexistent/m.json"}).code == 4);
  CHECK(run({"oracle", "--matrix", "A", "--out", "/nonexistent/dir/out.json"}).code == 4);
  const auto r = run({"solve", "--matrix", "M2", "--max-iter", "3"});
  CHECK(r.code == 3);
  CHECK(r.err.find("NoConvergedRuns") != std::string::npos);
}

TEST_CASE("out flag writes the file") {
  const auto path = std::filesystem::temp_directory_path() / "nhvqe_cli_out.json";
  const auto r = run({"oracle", "--matrix", "M2", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  std::filesystem::remove(path);
  const auto eig = eigenvalues(j["eigenvalues"]);
  CHECK(eig.size() == 4);
  CHECK(testing::contains(eig, {10.5188, -0.5892}, 1e-3));
}

TEST_CASE("landscape CSV shapes") {
  const auto g = csv(run({"landscape", "--matrix", "M1", "--reduced", "--resolution", "5"}).out);
  REQUIRE(g.size() == 26);
  CHECK(g[0] == std::vector<std::string>{"theta1", "theta2", "cost"});
  const auto l = csv(run({"landscape", "--matrix", "A", "--axes", "1", "--resolution", "7"}).out);
  REQUIRE(l.size() == 8);
  CHECK(l[0] == std::vector<std::string>{"theta", "cost", "eig_re"});
  CHECK(run({"landscape", "--matrix", "A", "--axes", "0,7"}).code == 2);
}

TEST_CASE("compare reports") {
  const auto a = nlohmann::json::parse(run({"compare", "--matrix", "A"}).out);
  CHECK(a["hermitian"] == true);
  CHECK(a["vqe"]["value"].get<double>() == doctest::Approx(-0.8541).epsilon(1e-4));
  CHECK(a["rvvqe"]["eigenvalues"].size() == 2);
  CHECK(a["metrics"]["h2_terms"].get<int>() <= a["metrics"]["h_terms"].get<int>() * a["metrics"]["h_terms"].get<int>());
  const auto m1 = run({"compare", "--matrix", "M1"});
  REQUIRE(m1.code == 0);
  const auto j = nlohmann::json::parse(m1.out);
  CHECK(j["vqe"]["applicable"] == false);
  CHECK(j["vqe"]["note"] == "Only Hermitian matrices");
}

TEST_CASE("trace and list") {
  const auto t = run({"trace", "--matrix", "M1", "--starts", "5"});
  REQUIRE(t.code == 0);
  const auto rows = csv(t.out);
  CHECK(rows[0] == std::vector<std::string>{"run", "iteration", "cost"});
  std::map<std::string, double> last;
  for (std::size_t i = 1; i < rows.size(); ++i) last[rows[i][0]] = std::stod(rows[i][2]);
  CHECK(last.size() == 5);
  for (const auto& [run_id, cost] : last) CHECK(cost <= 1e-12);

  const auto l = csv(run({"list-matrices"}).out);
  CHECK(l.size() == 9);
}
