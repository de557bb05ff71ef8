#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nhvqe/matrix.hpp"

namespace nhvqe {

/// Reference spectrum from dense classical diagonalization.
struct OracleSpectrum {
  std::vector<Complex> eigenvalues;  // sorted by (Re, Im) descending
  /// eigenvectors[j] is the unit-norm right eigenvector for eigenvalues[j].
  std::optional<std::vector<std::vector<Complex>>> eigenvectors;
  std::vector<double> residuals;  // ||M v - lambda v||_2, empty without eigenvectors
};

struct OracleOptions {
  bool eigenvectors = true;
  /// QR steps allowed per matrix dimension before ConvergenceFailure.
  int sweeps_per_dim = 100;
};

/// Householder reduction to upper Hessenberg form (similarity transform).
DenseMatrix hessenberg(const DenseMatrix& m);

/// Eigenvalues via Hessenberg reduction and Wilkinson-shifted complex QR;
/// eigenvectors via inverse iteration on the original matrix.
OracleSpectrum eigen(const DenseMatrix& m, const OracleOptions& options = {});

struct MatchPair {
  std::size_t computed = 0;
  std::size_t reference = 0;
  double distance = 0.0;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  double max_distance = 0.0;  // over matched pairs
  std::vector<std::size_t> unmatched_computed;
  std::vector<std::size_t> unmatched_reference;

  bool all_matched() const { return unmatched_computed.empty() && unmatched_reference.empty(); }
};

/// Greedy minimum-distance assignment; pairs farther apart than `tol` stay unmatched.
MatchReport spectrum_match(const std::vector<Complex>& computed, const std::vector<Complex>& reference, double tol);

/// Distance from z to the nearest element of `values` (infinity when empty).
double nearest_distance(Complex z, const std::vector<Complex>& values);

}  // namespace nhvqe
