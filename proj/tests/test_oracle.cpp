#include <cmath>
#include <numeric>

#include "doctest.h"
#include "nhvqe/errors.hpp"
#include "nhvqe/oracle.hpp"
#include "support.hpp"

using namespace nhvqe;
using C = Complex;

TEST_CASE("F spectrum") {
  const auto s = eigen(builtin("F").matrix);
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues[0] - C(5.3924, -1.1050)) <= 1e-4);
  CHECK(std::abs(s.eigenvalues[1] - C(-0.3924, 0.1050)) <= 1e-4);
}

TEST_CASE("D spectrum is 2 +- sqrt 6") {
  const auto s = eigen(builtin("D").matrix);
  CHECK(std::abs(s.eigenvalues[0] - (2.0 + std::sqrt(6.0))) <= 1e-12);
  CHECK(std::abs(s.eigenvalues[1] - (2.0 - std::sqrt(6.0))) <= 1e-12);
}

TEST_CASE("degenerate diagonal") {
  const auto s = eigen(DenseMatrix{{7.0, 0.0}, {0.0, 7.0}});
  CHECK(s.eigenvalues[0] == C(7.0));
  CHECK(s.eigenvalues[1] == C(7.0));
  REQUIRE(s.eigenvectors);
  const auto& v = *s.eigenvectors;
  CHECK(std::abs(std::conj(v[0][0]) * v[1][0] + std::conj(v[0][1]) * v[1][1]) <= 1e-12);
}

TEST_CASE("M2 values") {
  const auto s = eigen(builtin("M2").matrix);
  const std::vector<C> expected{{10.5188, -0.5892}, {3.7513, -1.0559}, {3.3441, 2.1809}, {-1.6142, -0.5359}};
  CHECK(testing::set_distance(s.eigenvalues, expected) <= 1e-3);
}

TEST_CASE("closed form on every 2x2 built-in") {
  for (const auto& name : builtin_names()) {
    const auto m = builtin(name).matrix;
    if (m.dim() != 2) continue;
    const auto [a, b] = testing::quadratic_roots(m);
    CHECK(testing::set_distance(eigen(m).eigenvalues, {a, b}) <= 1e-10);
  }
}

TEST_CASE("trace identity on random matrices") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 15);
    const auto m = testing::random_matrix(d, rng);
    const auto s = eigen(m, {.eigenvectors = false});
    const C sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), C{});
    CHECK(std::abs(sum - m.trace()) <= 1e-8 * (1.0 + std::abs(m.trace())));
  }
}

TEST_CASE("determinant identity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 7);
    const auto m = testing::random_matrix(d, rng);
    const auto s = eigen(m, {.eigenvectors = false});
    const C prod = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), C{1.0}, std::multiplies<>());
    const C det = testing::lu_determinant(m);
    CHECK(std::abs(prod - det) <= 1e-6 * std::abs(det));
  }
}

TEST_CASE("similarity invariance") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 7);
    const auto m = testing::random_matrix(d, rng);
    const DenseMatrix s = DenseMatrix::identity(d) + C(0.3) * testing::random_matrix(d, rng, 1.0 / std::sqrt(double(d)));
    const auto conj = testing::inverse(s) * m * s;
    CHECK(testing::set_distance(eigen(conj).eigenvalues, eigen(m).eigenvalues) <= 1e-6);
  }
}

TEST_CASE("eigenvector residuals and norms") {
  std::mt19937_64 rng(19);
  std::vector<DenseMatrix> cases{builtin("M2").matrix, builtin("M3").matrix};
  for (int i = 0; i < 30; ++i) cases.push_back(testing::random_matrix(2 + rng() % 31, rng));
  for (const auto& m : cases) {
    const auto s = eigen(m);
    REQUIRE(s.eigenvectors);
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
      const auto& v = (*s.eigenvectors)[j];
      double n = 0.0;
      for (auto c : v) n += std::norm(c);
      CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-12));
      const auto mv = m.apply(v);
      double r = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) r += std::norm(mv[k] - s.eigenvalues[j] * v[k]);
      CHECK(std::sqrt(r) <= 1e-8 * m.frobenius_norm());
      CHECK(s.residuals[j] <= 1e-8 * m.frobenius_norm());
    }
  }
}

TEST_CASE("ordering is by real part then imaginary part, descending") {
  const auto s = eigen(builtin("M3").matrix);
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
    const auto a = s.eigenvalues[i - 1], b = s.eigenvalues[i];
    CHECK((a.real() > b.real() || (a.real() == b.real() && a.imag() >= b.imag())));
  }
  const auto d = eigen(DenseMatrix{{C(1, -1), 0.0}, {0.0, C(1, 1)}});
  CHECK(d.eigenvalues[0] == C(1, 1));
}

TEST_CASE("hessenberg form preserves the spectrum") {
  std::mt19937_64 rng(29);
  const auto m = testing::random_matrix(9, rng);
  const auto h = hessenberg(m);
  for (std::size_t i = 2; i < 9; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) CHECK(std::abs(h(i, j)) <= 1e-14);
  CHECK(testing::set_distance(eigen(h).eigenvalues, eigen(m).eigenvalues) <= 1e-10);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(eigen(DenseMatrix{}), Error);
  DenseMatrix bad = DenseMatrix::identity(2);
  bad(1, 1) = C(INFINITY, 0.0);
  CHECK_THROWS_AS(eigen(bad), Error);
  CHECK_THROWS_AS(eigen(DenseMatrix(513)), Error);
}

TEST_CASE("spectrum matching") {
  const std::vector<C> a{{1, 0}, {2, 1}, {-3, 0}};
  const auto same = spectrum_match(a, a, 1e-3);
  CHECK(same.max_distance == 0.0);
  CHECK(same.all_matched());

  const std::vector<C> partial{{2, 1.0001}, {1, 0}};
  const auto r = spectrum_match(partial, a, 1e-3);
  CHECK(r.pairs.size() == 2);
  CHECK(r.max_distance == doctest::Approx(1e-4));
  REQUIRE(r.unmatched_reference.size() == 1);
  CHECK(r.unmatched_reference[0] == 2);
  CHECK(r.unmatched_computed.empty());

  CHECK(nearest_distance({0, 0}, a) == 1.0);
  CHECK(std::isinf(nearest_distance({0, 0}, {})));
}
