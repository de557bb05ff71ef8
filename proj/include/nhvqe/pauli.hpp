#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nhvqe/matrix.hpp"

namespace nhvqe {

/// Coefficients with magnitude at or below this are dropped from every PauliSum.
inline constexpr double kPruneThreshold = 1e-12;
inline constexpr int kMaxQubits = 30;

/// n-qubit Pauli string in symplectic form. Bit q of `x`/`z` describes qubit q:
/// (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z. The operator is i^{|x&z|} X^x Z^z.
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliString identity(int n_qubits);
  /// Parses "XIZ" style text, qubit 0 leftmost.
  static PauliString from_axes(std::string_view axes);

  char axis(int qubit) const;
  std::string axes() const;
  bool is_identity() const { return x == 0 && z == 0; }
  int y_count() const;
  bool commutes_with(const PauliString& other) const;

  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.z <=> b.z;
  }
  friend bool operator==(const PauliString& a, const PauliString& b) = default;
};

/// P * Q = i^phase_exponent * result
struct PauliProduct {
  int phase_exponent = 0;  // 0..3
  PauliString result;

  Complex phase() const;
};

PauliProduct multiply_strings(const PauliString& p, const PauliString& q);

struct PauliTerm {
  double coeff = 0.0;
  PauliString string;
};

/// Real-weighted sum of distinct Pauli strings, kept in canonical (x, z) order.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  /// Merges duplicates, prunes small coefficients and sorts canonically.
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  /// Coefficient of `s`, zero if absent.
  double coeff(const PauliString& s) const;

  /// One "coeff * AXES" line per term, canonical order.
  std::string to_text() const;

 private:
  int n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

PauliSum decompose_pauli(const DenseMatrix& h);
DenseMatrix to_matrix(const PauliSum& s);
DenseMatrix to_matrix(const PauliString& p);

/// s * s with like strings merged.
PauliSum square_sum(const PauliSum& s);
/// i (A B - B A), Hermitian whenever A and B are.
PauliSum commutator_i(const PauliSum& a, const PauliSum& b);
/// A + B
PauliSum add(const PauliSum& a, const PauliSum& b);

struct MeasurementCostReport {
  std::size_t h_terms = 0;
  std::size_t k_terms = 0;
  std::size_t h2_terms = 0;
  std::size_t k2_terms = 0;
  std::size_t commutator_terms = 0;
  /// Distinct strings (identity excluded) needed for <H>, <K>, <H^2>, <K^2>, <i[H,K]>.
  std::size_t objective_strings = 0;
  /// Same, without the commutator observable (Var H + Var K only).
  std::size_t split_objective_strings = 0;
  /// Distinct strings (identity excluded) needed for plain <H>.
  std::size_t vqe_strings = 0;
  bool quadratic_bound_holds = true;
};

MeasurementCostReport term_metrics(const PauliSum& h, const PauliSum& k);

}  // namespace nhvqe
