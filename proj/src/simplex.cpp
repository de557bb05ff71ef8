#include "nhvqe/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhvqe/errors.hpp"

namespace nhvqe {

namespace {

struct Coefficients {
  double reflect, expand, contract, shrink;
};

Coefficients coefficients_for(std::size_t n) {
  if (n <= 2) return {1.0, 2.0, 0.5, 0.5};
  const double dn = static_cast<double>(n);
  return {1.0, 1.0 + 2.0 / dn, 0.75 - 1.0 / (2.0 * dn), 1.0 - 1.0 / dn};
}

class Search {
 public:
  Search(const Objective1D& f, const SimplexOptions& opt, SimplexResult& out) : f_(f), opt_(opt), out_(out) {}

  double eval(const std::vector<double>& x) {
    ++out_.evaluations;
    const double v = f_(x);
    return std::isnan(v) ? HUGE_VAL : v;
  }

  // One pass from `start`; returns false if the iteration budget ran out.
  bool pass(std::vector<double>& best_x, double& best_f) {
    const std::size_t n = best_x.size();
    const Coefficients k = coefficients_for(n);
    std::vector<std::vector<double>> v(n + 1, best_x);
    std::vector<double> fv(n + 1);
    fv[0] = best_f;
    for (std::size_t i = 0; i < n; ++i) {
      v[i + 1][i] += opt_.initial_step;
      fv[i + 1] = eval(v[i + 1]);
    }
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);

    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];
      best_x = v[lo];
      best_f = fv[lo];
      out_.trace.emplace_back(out_.iterations, best_f);
      if (fv[hi] - fv[lo] <= opt_.tolerance) return true;
      if (out_.iterations >= opt_.max_iterations) return false;
      ++out_.iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == hi) continue;
        for (std::size_t j = 0; j < n; ++j) centroid[j] += v[i][j];
      }
      for (auto& c : centroid) c /= static_cast<double>(n);

      for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + k.reflect * (centroid[j] - v[hi][j]);
      const double fr = eval(xr);
      if (fr < fv[lo]) {
        for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + k.expand * (xr[j] - centroid[j]);
        const double fe = eval(xe);
        if (fe < fr) {
          v[hi] = xe;
          fv[hi] = fe;
        } else {
          v[hi] = xr;
          fv[hi] = fr;
        }
        continue;
      }
      if (fr < fv[second]) {
        v[hi] = xr;
        fv[hi] = fr;
        continue;
      }
      const bool outside = fr < fv[hi];
      for (std::size_t j = 0; j < n; ++j) {
        xc[j] = outside ? centroid[j] + k.contract * (xr[j] - centroid[j])
                        : centroid[j] + k.contract * (v[hi][j] - centroid[j]);
      }
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[hi])) {
        v[hi] = xc;
        fv[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == lo) continue;
        for (std::size_t j = 0; j < n; ++j) v[i][j] = v[lo][j] + k.shrink * (v[i][j] - v[lo][j]);
        fv[i] = eval(v[i]);
      }
    }
  }

 private:
  const Objective1D& f_;
  const SimplexOptions& opt_;
  SimplexResult& out_;
};

}  // namespace

SimplexResult minimize_simplex(const Objective1D& f, std::vector<double> x0, const SimplexOptions& options) {
  if (x0.empty()) throw Error(ErrorCode::InvalidArgument, "simplex search needs at least one parameter");
  if (!(options.tolerance > 0.0) || options.max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "tolerance and max_iterations must be positive");
  }
  SimplexResult out;
  Search search(f, options, out);
  std::vector<double> best_x = std::move(x0);
  double best_f = search.eval(best_x);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    const double before = best_f;
    if (!search.pass(best_x, best_f)) {
      out.hit_max_iterations = true;
      break;
    }
    if (restart > 0 && before - best_f < options.tolerance) break;
  }
  out.x = std::move(best_x);
  out.value = best_f;
  return out;
}

}  // namespace nhvqe
