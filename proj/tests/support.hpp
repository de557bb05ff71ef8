#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "nhvqe/matrix.hpp"

namespace testing {

using nhvqe::Complex;
using nhvqe::DenseMatrix;

inline DenseMatrix random_matrix(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  DenseMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline DenseMatrix random_hermitian(std::size_t d, std::mt19937_64& rng) {
  const DenseMatrix a = random_matrix(d, rng);
  return Complex{0.5, 0.0} * (a + a.adjoint());
}

inline std::vector<Complex> random_state(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(d);
  double n = 0.0;
  for (auto& c : v) {
    c = {g(rng), g(rng)};
    n += std::norm(c);
  }
  for (auto& c : v) c /= std::sqrt(n);
  return v;
}

// Determinant by Gaussian elimination with partial pivoting.
inline Complex lu_determinant(DenseMatrix a) {
  const std::size_t d = a.dim();
  Complex det{1.0, 0.0};
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < d; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    if (a(p, c) == Complex{}) return {};
    if (p != c) {
      for (std::size_t j = 0; j < d; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < d; ++r) {
      const Complex f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < d; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

// Gauss-Jordan inverse.
inline DenseMatrix inverse(DenseMatrix a) {
  const std::size_t d = a.dim();
  DenseMatrix inv = DenseMatrix::identity(d);
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < d; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    for (std::size_t j = 0; j < d; ++j) {
      std::swap(a(p, j), a(c, j));
      std::swap(inv(p, j), inv(c, j));
    }
    const Complex piv = a(c, c);
    for (std::size_t j = 0; j < d; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c) continue;
      const Complex f = a(r, c);
      for (std::size_t j = 0; j < d; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Roots of the 2x2 characteristic polynomial.
inline std::pair<Complex, Complex> quadratic_roots(const DenseMatrix& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex s = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + s) / 2.0, (tr - s) / 2.0};
}

// Max over `a` of the distance to the nearest element of `b`, and vice versa.
inline double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto one_way = [](const std::vector<Complex>& u, const std::vector<Complex>& v) {
    double worst = 0.0;
    for (auto x : u) {
      double best = INFINITY;
      for (auto y : v) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

inline bool contains(const std::vector<Complex>& values, Complex z, double tol) {
  for (auto v : values)
    if (std::abs(v - z) <= tol) return true;
  return false;
}

}  // namespace testing
