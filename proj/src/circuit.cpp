#include "nhvqe/circuit.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "nhvqe/errors.hpp"
#include "nhvqe/random.hpp"

namespace nhvqe {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw Error(ErrorCode::InvalidArgument, "qubit count out of range");
  amps_.assign(std::size_t{1} << n_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits || amps_.size() != (std::size_t{1} << n_qubits)) {
    throw Error(ErrorCode::DimensionMismatch, "amplitude count must be 2^n");
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_) throw Error(ErrorCode::InvalidArgument, "qubit index " + std::to_string(q));
}

void StateVector::apply_single(int qubit, const Complex (&u)[2][2]) {
  check_qubit(qubit);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps_[i];
    const Complex a1 = amps_[i | bit];
    amps_[i] = u[0][0] * a0 + u[0][1] * a1;
    amps_[i | bit] = u[1][0] * a0 + u[1][1] * a1;
  }
}

void StateVector::apply_rz(int qubit, double theta) {
  check_qubit(qubit);
  const Complex lo = std::polar(1.0, -0.5 * theta);
  const Complex hi = std::polar(1.0, 0.5 * theta);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] *= (i & bit) ? hi : lo;
}

void StateVector::apply_ry(int qubit, double theta) {
  check_qubit(qubit);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps_[i];
    const Complex a1 = amps_[i | bit];
    amps_[i] = c * a0 - s * a1;
    amps_[i | bit] = s * a0 + c * a1;
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw Error(ErrorCode::InvalidArgument, "CNOT control equals target");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
}

AnsatzSpec build_ansatz(int n_qubits, int layers, AnsatzVariant variant) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw Error(ErrorCode::InvalidArgument, "n_qubits must be >= 1");
  if (layers < 1) throw Error(ErrorCode::InvalidArgument, "layers must be >= 1");
  AnsatzSpec spec;
  spec.n_qubits = n_qubits;
  spec.layers = layers;
  spec.variant = variant;

  if (variant == AnsatzVariant::Reduced2Param) {
    if (n_qubits != 1) throw Error(ErrorCode::InvalidVariant, "two-parameter ansatz is single-qubit only");
    spec.layers = 1;
    // Ry(t2) acts first on |0>, then Rz(t1).
    spec.gates = {{GateKind::RY, 0, std::nullopt, 1}, {GateKind::RZ, 0, std::nullopt, 0}};
    spec.n_params = 2;
    return spec;
  }

  int p = 0;
  for (int layer = 0; layer < layers; ++layer) {
    for (int q = 0; q < n_qubits; ++q) {
      for (int c = 0; c < q; ++c) spec.gates.push_back({GateKind::CNOT, q, c, std::nullopt});
      spec.gates.push_back({GateKind::RZ, q, std::nullopt, p++});
      spec.gates.push_back({GateKind::RY, q, std::nullopt, p++});
      spec.gates.push_back({GateKind::RZ, q, std::nullopt, p++});
    }
  }
  spec.n_params = p;
  return spec;
}

StateVector prepare(const AnsatzSpec& ansatz, std::span<const double> params) {
  if (static_cast<int>(params.size()) != ansatz.n_params) {
    throw Error(ErrorCode::ParamCountMismatch,
                "expected " + std::to_string(ansatz.n_params) + " parameters, got " + std::to_string(params.size()));
  }
  for (double v : params)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "non-finite circuit parameter");
  StateVector psi(ansatz.n_qubits);
  for (const auto& g : ansatz.gates) {
    switch (g.kind) {
      case GateKind::RZ: psi.apply_rz(g.target, params[static_cast<std::size_t>(*g.param_index)]); break;
      case GateKind::RY: psi.apply_ry(g.target, params[static_cast<std::size_t>(*g.param_index)]); break;
      case GateKind::CNOT: psi.apply_cnot(*g.control, g.target); break;
    }
  }
  return psi;
}

double expectation_string(const StateVector& state, const PauliString& p) {
  if (p.n_qubits != state.n_qubits()) throw Error(ErrorCode::DimensionMismatch, "observable/state qubit counts differ");
  const auto amps = state.amplitudes();
  // <psi|P|psi> = i^{ny} sum_j conj(psi[j^x]) (-1)^{|j&z|} psi[j]
  Complex acc = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    const Complex v = std::conj(amps[j ^ p.x]) * amps[j];
    acc += (std::popcount(j & p.z) & 1) ? -v : v;
  }
  switch (p.y_count() & 3) {
    case 0: return acc.real();
    case 1: return -acc.imag();
    case 2: return -acc.real();
    default: return acc.imag();
  }
}

double expectation_real(const StateVector& state, const PauliSum& obs) {
  if (obs.n_qubits() != state.n_qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "observable/state qubit counts differ");
  }
  double total = 0.0;
  for (const auto& t : obs.terms()) total += t.coeff * expectation_string(state, t.string);
  return total;
}

Complex expectation_complex(const StateVector& state, const DenseMatrix& m) {
  if (m.dim() != state.size()) throw Error(ErrorCode::DimensionMismatch, "matrix/state dimensions differ");
  const auto amps = state.amplitudes();
  const auto mpsi = m.apply(amps);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) acc += std::conj(amps[i]) * mpsi[i];
  return acc;
}

SampledExpectation sample_expectation(const StateVector& state, const PauliSum& obs, std::uint64_t shots,
                                      std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  if (obs.n_qubits() != state.n_qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "observable/state qubit counts differ");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex hadamard[2][2] = {{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
  const Complex s_dagger[2][2] = {{1.0, 0.0}, {0.0, Complex(0.0, -1.0)}};

  SampledExpectation out;
  double variance = 0.0;
  std::uint64_t term_index = 0;
  for (const auto& t : obs.terms()) {
    ++term_index;
    if (t.string.is_identity()) {
      out.estimate += t.coeff;
      continue;
    }
    // Rotate the term's eigenbasis onto Z: H for X, H S^dag for Y.
    StateVector rotated = state;
    for (int q = 0; q < state.n_qubits(); ++q) {
      const char axis = t.string.axis(q);
      if (axis == 'Y') rotated.apply_single(q, s_dagger);
      if (axis == 'X' || axis == 'Y') rotated.apply_single(q, hadamard);
    }
    const std::uint64_t support = t.string.x | t.string.z;
    double p_plus = 0.0;
    for (std::size_t i = 0; i < rotated.size(); ++i)
      if ((std::popcount(i & support) & 1) == 0) p_plus += std::norm(rotated[i]);

    Rng rng(derive_seed(seed, term_index));
    std::uint64_t plus = 0;
    for (std::uint64_t s = 0; s < shots; ++s)
      if (rng.uniform() < p_plus) ++plus;
    const double n = static_cast<double>(shots);
    const double mean = (2.0 * static_cast<double>(plus) - n) / n;
    out.estimate += t.coeff * mean;
    variance += t.coeff * t.coeff * (1.0 - mean * mean) / n;
  }
  out.std_error = std::sqrt(std::max(0.0, variance));
  return out;
}

}  // namespace nhvqe
