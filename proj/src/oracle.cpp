#include "nhvqe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nhvqe/errors.hpp"

namespace nhvqe {

namespace {

constexpr double kDeflation = 1e-14;

// Eigenvalue of the 2x2 block [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const Complex l1 = half_tr + disc;
  const Complex l2 = half_tr - disc;
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

std::vector<Complex> hessenberg_qr_eigenvalues(DenseMatrix h, int sweeps_per_dim) {
  const std::size_t n = h.dim();
  std::vector<Complex> eig(n);
  const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
  const long budget = static_cast<long>(sweeps_per_dim) * static_cast<long>(n);
  long steps = 0;
  int since_deflation = 0;

  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
  std::vector<Complex> rot_c(n), rot_s(n);  // G = [[conj(c), conj(s)], [-s, c]] / r, stored normalized
  while (hi >= 0) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const auto l = static_cast<std::size_t>(lo);
      double scale = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (scale == 0.0) scale = hnorm;
      if (std::abs(h(l, l - 1)) <= kDeflation * scale) {
        h(l, l - 1) = 0.0;
        break;
      }
      --lo;
    }
    const auto uhi = static_cast<std::size_t>(hi);
    if (lo == hi) {
      eig[uhi] = h(uhi, uhi);
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++steps > budget) throw Error(ErrorCode::ConvergenceFailure, "shifted QR exceeded its iteration budget");
    ++since_deflation;

    const auto ulo = static_cast<std::size_t>(lo);
    Complex mu;
    if (since_deflation % 11 == 10) {
      // exceptional shift to break cycles
      mu = h(uhi, uhi) + Complex(0.75 * std::abs(h(uhi, uhi - 1)), 0.4375 * std::abs(h(uhi, uhi - 1)));
    } else {
      mu = wilkinson_shift(h(uhi - 1, uhi - 1), h(uhi - 1, uhi), h(uhi, uhi - 1), h(uhi, uhi));
    }

    for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) -= mu;
    // H - mu I = Q R
    for (std::size_t k = ulo; k < uhi; ++k) {
      const Complex a = h(k, k);
      const Complex b = h(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      Complex c = 1.0, s = 0.0;
      if (r != 0.0) {
        c = a / r;
        s = b / r;
      }
      rot_c[k] = c;
      rot_s[k] = s;
      for (std::size_t j = k; j <= uhi; ++j) {
        const Complex x = h(k, j);
        const Complex y = h(k + 1, j);
        h(k, j) = std::conj(c) * x + std::conj(s) * y;
        h(k + 1, j) = -s * x + c * y;
      }
    }
    // R Q + mu I
    for (std::size_t k = ulo; k < uhi; ++k) {
      const Complex c = rot_c[k];
      const Complex s = rot_s[k];
      const std::size_t last = std::min(k + 2, uhi);
      for (std::size_t i = ulo; i <= last; ++i) {
        const Complex x = h(i, k);
        const Complex y = h(i, k + 1);
        h(i, k) = x * c + y * s;
        h(i, k + 1) = -x * std::conj(s) + y * std::conj(c);
      }
    }
    for (std::size_t k = ulo; k <= uhi; ++k) h(k, k) += mu;
  }
  return eig;
}

// LU with partial pivoting of (M - sigma I); tiny pivots nudged to eps * ||M||.
struct ShiftedLu {
  std::size_t n;
  std::vector<Complex> lu;
  std::vector<std::size_t> perm;

  ShiftedLu(const DenseMatrix& m, Complex sigma, double tiny) : n(m.dim()), lu(m.data().begin(), m.data().end()), perm(n) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < n; ++i) lu[i * n + i] -= sigma;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      for (std::size_t r = k + 1; r < n; ++r)
        if (std::abs(lu[r * n + k]) > std::abs(lu[piv * n + k])) piv = r;
      if (piv != k) {
        for (std::size_t c = 0; c < n; ++c) std::swap(lu[k * n + c], lu[piv * n + c]);
        std::swap(perm[k], perm[piv]);
      }
      if (std::abs(lu[k * n + k]) < tiny) lu[k * n + k] = tiny;
      for (std::size_t r = k + 1; r < n; ++r) {
        const Complex f = lu[r * n + k] / lu[k * n + k];
        lu[r * n + k] = f;
        for (std::size_t c = k + 1; c < n; ++c) lu[r * n + c] -= f * lu[k * n + c];
      }
    }
  }

  std::vector<Complex> solve(const std::vector<Complex>& b) const {
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = b[perm[i]];
      for (std::size_t c = 0; c < i; ++c) acc -= lu[i * n + c] * y[c];
      y[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex acc = y[i];
      for (std::size_t c = i + 1; c < n; ++c) acc -= lu[i * n + c] * y[c];
      y[i] = acc / lu[i * n + i];
    }
    return y;
  }
};

double vec_norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

double residual_norm(const DenseMatrix& m, Complex lambda, const std::vector<Complex>& v) {
  auto mv = m.apply(v);
  for (std::size_t i = 0; i < v.size(); ++i) mv[i] -= lambda * v[i];
  return vec_norm(mv);
}

std::vector<Complex> inverse_iteration(const DenseMatrix& m, Complex lambda,
                                       const std::vector<std::vector<Complex>>& same_cluster, double mnorm) {
  const std::size_t n = m.dim();
  const double eps = std::numeric_limits<double>::epsilon();
  const ShiftedLu lu(m, lambda, eps * std::max(mnorm, 1e-300));
  std::vector<Complex> x(n);
  // fixed, non-symmetric start vector
  for (std::size_t i = 0; i < n; ++i) x[i] = Complex(1.0 + 0.1 * static_cast<double>(i), 0.05 * static_cast<double>(i % 3));
  for (int iter = 0; iter < 4; ++iter) {
    // project out vectors already assigned to (numerically) the same eigenvalue
    for (const auto& u : same_cluster) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(u[i]) * x[i];
      for (std::size_t i = 0; i < n; ++i) x[i] -= dot * u[i];
    }
    x = lu.solve(x);
    const double nx = vec_norm(x);
    for (auto& z : x) z /= nx;
  }
  for (const auto& u : same_cluster) {
    Complex dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += std::conj(u[i]) * x[i];
    for (std::size_t i = 0; i < n; ++i) x[i] -= dot * u[i];
  }
  const double nx = vec_norm(x);
  if (nx > 0.0)
    for (auto& z : x) z /= nx;
  // fix the global phase: largest component real and positive
  std::size_t big = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i]) > std::abs(x[big]) * (1.0 + 1e-12)) big = i;
  const Complex phase = std::conj(x[big]) / std::abs(x[big]);
  for (auto& z : x) z *= phase;
  return x;
}

}  // namespace

DenseMatrix hessenberg(const DenseMatrix& m) {
  DenseMatrix a = m;
  const std::size_t n = a.dim();
  std::vector<Complex> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex x0 = a(k + 1, k);
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), Complex(0.0));
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // A <- (I - 2 v v^H) A
    for (std::size_t j = k; j < n; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * a(i, j);
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= 2.0 * v[i] * dot;
    }
    // A <- A (I - 2 v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= 2.0 * dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return a;
}

OracleSpectrum eigen(const DenseMatrix& m, const OracleOptions& options) {
  const std::size_t n = m.dim();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  if (n > 512) throw Error(ErrorCode::InvalidArgument, "oracle supports dimensions up to 512");
  for (const auto& z : m.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorCode::NonFinite, "matrix entry");

  // max-abs scaling
  const double scale = m.max_abs();
  OracleSpectrum out;
  if (scale == 0.0) {
    out.eigenvalues.assign(n, Complex(0.0));
  } else {
    const DenseMatrix scaled = Complex(1.0 / scale) * m;
    out.eigenvalues = hessenberg_qr_eigenvalues(hessenberg(scaled), options.sweeps_per_dim);
    for (auto& z : out.eigenvalues) z *= scale;
  }

  const double q = 1e-9 * std::max(1.0, scale);
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [q](Complex a, Complex b) {
    const double ar = std::round(a.real() / q), br = std::round(b.real() / q);
    if (ar != br) return ar > br;
    return std::round(a.imag() / q) > std::round(b.imag() / q);
  });

  if (!options.eigenvectors) return out;
  const double mnorm = m.frobenius_norm();
  std::vector<std::vector<Complex>> vecs;
  vecs.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Complex>> cluster;
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(out.eigenvalues[i] - out.eigenvalues[j]) <= 1e-8 * std::max(1.0, mnorm)) cluster.push_back(vecs[i]);
    vecs.push_back(inverse_iteration(m, out.eigenvalues[j], cluster, mnorm));
    out.residuals.push_back(residual_norm(m, out.eigenvalues[j], vecs.back()));
  }
  out.eigenvectors = std::move(vecs);
  return out;
}

double nearest_distance(Complex z, const std::vector<Complex>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::min(best, std::abs(z - v));
  return best;
}

MatchReport spectrum_match(const std::vector<Complex>& computed, const std::vector<Complex>& reference, double tol) {
  struct Candidate {
    double d;
    std::size_t c, r;
  };
  std::vector<Candidate> cands;
  for (std::size_t c = 0; c < computed.size(); ++c)
    for (std::size_t r = 0; r < reference.size(); ++r) cands.push_back({std::abs(computed[c] - reference[r]), c, r});
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.d < b.d; });

  std::vector<bool> used_c(computed.size()), used_r(reference.size());
  MatchReport rep;
  for (const auto& cand : cands) {
    if (cand.d > tol) break;
    if (used_c[cand.c] || used_r[cand.r]) continue;
    used_c[cand.c] = used_r[cand.r] = true;
    rep.pairs.push_back({cand.c, cand.r, cand.d});
    rep.max_distance = std::max(rep.max_distance, cand.d);
  }
  for (std::size_t c = 0; c < computed.size(); ++c)
    if (!used_c[c]) rep.unmatched_computed.push_back(c);
  for (std::size_t r = 0; r < reference.size(); ++r)
    if (!used_r[r]) rep.unmatched_reference.push_back(r);
  return rep;
}

}  // namespace nhvqe
