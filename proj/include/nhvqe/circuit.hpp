#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nhvqe/matrix.hpp"
#include "nhvqe/pauli.hpp"

namespace nhvqe {

/// Amplitudes over 2^n basis states; qubit 0 is the least-significant index bit.
class StateVector {
 public:
  explicit StateVector(int n_qubits);  // |0...0>
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  double norm_squared() const;

  /// Rz(t) = diag(e^{-it/2}, e^{+it/2})
  void apply_rz(int qubit, double theta);
  /// Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
  void apply_ry(int qubit, double theta);
  void apply_cnot(int control, int target);
  /// Arbitrary single-qubit unitary [[u00, u01], [u10, u11]].
  void apply_single(int qubit, const Complex (&u)[2][2]);

 private:
  void check_qubit(int q) const;

  int n_qubits_ = 0;
  std::vector<Complex> amps_;
};

enum class GateKind { RY, RZ, CNOT };

struct GateOp {
  GateKind kind = GateKind::RZ;
  int target = 0;
  std::optional<int> control;      // CNOT only
  std::optional<int> param_index;  // rotations only
};

enum class AnsatzVariant {
  FullZYZ,        ///< per-qubit Rz Ry Rz blocks with cascading CNOT entanglers
  Reduced2Param,  ///< one qubit, Rz(t1) Ry(t2) |0>
};

struct AnsatzSpec {
  int n_qubits = 0;
  int layers = 1;
  AnsatzVariant variant = AnsatzVariant::FullZYZ;
  std::vector<GateOp> gates;
  int n_params = 0;
};

AnsatzSpec build_ansatz(int n_qubits, int layers, AnsatzVariant variant = AnsatzVariant::FullZYZ);

StateVector prepare(const AnsatzSpec& ansatz, std::span<const double> params);

/// <psi| P |psi>, always real.
double expectation_string(const StateVector& state, const PauliString& p);
double expectation_real(const StateVector& state, const PauliSum& obs);
Complex expectation_complex(const StateVector& state, const DenseMatrix& m);

struct SampledExpectation {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Shot-sampled estimate of <obs>: each non-identity term is measured `shots`
/// times in its eigenbasis and the +-1 outcomes averaged.
SampledExpectation sample_expectation(const StateVector& state, const PauliSum& obs,
                                      std::uint64_t shots, std::uint64_t seed);

}  // namespace nhvqe
