#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace nhvqe {

struct SimplexOptions {
  /// A pass ends once every vertex value lies within `tolerance` of the best;
  /// the search ends when a fresh pass improves the best value by less than this.
  double tolerance = 1e-12;
  int max_iterations = 20000;
  double initial_step = 0.5;
  int max_restarts = 3;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<std::pair<int, double>> trace;  // (iteration, best value so far)
  int iterations = 0;
  int evaluations = 0;
  bool hit_max_iterations = false;
};

using Objective1D = std::function<double(std::span<const double>)>;

/// Nelder-Mead simplex descent (reflection, expansion, contraction, shrink) with
/// dimension-adaptive coefficients above two dimensions.
SimplexResult minimize_simplex(const Objective1D& f, std::vector<double> x0, const SimplexOptions& options = {});

}  // namespace nhvqe
