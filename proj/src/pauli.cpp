#include "nhvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "nhvqe/errors.hpp"

namespace nhvqe {

namespace {

constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

std::uint64_t qubit_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

void require_same_qubits(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::QubitCountMismatch, std::to_string(a) + " vs " + std::to_string(b) + " qubits");
  }
}

using Accumulator = std::map<PauliString, Complex>;

// Converts merged complex coefficients to a real PauliSum. A surviving imaginary
// part means the product was not Hermitian.
PauliSum collapse(int n_qubits, const Accumulator& acc, double scale) {
  std::vector<PauliTerm> terms;
  terms.reserve(acc.size());
  const double imag_tol = 1e-10 * std::max(1.0, scale);
  for (const auto& [s, c] : acc) {
    if (std::abs(c.imag()) > imag_tol) {
      throw Error(ErrorCode::NotHermitian,
                  fmt::format("coefficient of {} has imaginary part {:.3e}", s.axes(), c.imag()));
    }
    terms.push_back({c.real(), s});
  }
  return PauliSum(n_qubits, std::move(terms));
}

double coeff_scale(const PauliSum& a, const PauliSum& b) {
  double sa = 0.0, sb = 0.0;
  for (const auto& t : a.terms()) sa += std::abs(t.coeff);
  for (const auto& t : b.terms()) sb += std::abs(t.coeff);
  return sa * sb;
}

}  // namespace

PauliString PauliString::identity(int n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw Error(ErrorCode::InvalidArgument, "qubit count out of range");
  }
  return {n_qubits, 0, 0};
}

PauliString PauliString::from_axes(std::string_view axes) {
  PauliString p = identity(static_cast<int>(axes.size()));
  for (std::size_t q = 0; q < axes.size(); ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (axes[q]) {
      case 'I': case '_': break;
      case 'X': p.x |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; break;
      case 'Z': p.z |= bit; break;
      default: throw Error(ErrorCode::ParseError, fmt::format("invalid Pauli axis '{}'", axes[q]));
    }
  }
  return p;
}

char PauliString::axis(int qubit) const {
  const bool xb = (x >> qubit) & 1U;
  const bool zb = (z >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::axes() const {
  std::string out(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) out[static_cast<std::size_t>(q)] = axis(q);
  return out;
}

int PauliString::y_count() const { return std::popcount(x & z); }

bool PauliString::commutes_with(const PauliString& other) const {
  return (std::popcount((x & other.z) ^ (z & other.x)) & 1) == 0;
}

Complex PauliProduct::phase() const { return kIPowers[phase_exponent & 3]; }

PauliProduct multiply_strings(const PauliString& p, const PauliString& q) {
  require_same_qubits(p.n_qubits, q.n_qubits);
  // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1.x2} X^{x1^x2} Z^{z1^z2}; fold in the i^{|x&z|} prefactors.
  const std::uint64_t x = p.x ^ q.x;
  const std::uint64_t z = p.z ^ q.z;
  const int exponent = std::popcount(p.x & p.z) + std::popcount(q.x & q.z) +
                       2 * std::popcount(p.z & q.x) - std::popcount(x & z);
  return {((exponent % 4) + 4) % 4, PauliString{p.n_qubits, x, z}};
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms) : n_qubits_(n_qubits) {
  const std::uint64_t mask = qubit_mask(n_qubits);
  std::map<PauliString, double> merged;
  for (const auto& t : terms) {
    require_same_qubits(n_qubits, t.string.n_qubits);
    if ((t.string.x & ~mask) != 0 || (t.string.z & ~mask) != 0) {
      throw Error(ErrorCode::InvalidArgument, "Pauli string has bits beyond its qubit count");
    }
    if (!std::isfinite(t.coeff)) throw Error(ErrorCode::NonFinite, "non-finite Pauli coefficient");
    merged[t.string] += t.coeff;
  }
  for (const auto& [s, c] : merged)
    if (std::abs(c) > kPruneThreshold) terms_.push_back({c, s});
}

double PauliSum::coeff(const PauliString& s) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const PauliTerm& t, const PauliString& key) { return t.string < key; });
  return (it != terms_.end() && it->string == s) ? it->coeff : 0.0;
}

std::string PauliSum::to_text() const {
  std::string out;
  for (const auto& t : terms_) out += fmt::format("{:.17g} * {}\n", t.coeff, t.string.axes());
  return out;
}

DenseMatrix to_matrix(const PauliString& p) {
  const std::size_t d = std::size_t{1} << p.n_qubits;
  DenseMatrix m(d);
  const Complex prefactor = kIPowers[p.y_count() & 3];
  // P|j> = i^{ny} (-1)^{|j&z|} |j^x>
  for (std::size_t j = 0; j < d; ++j) {
    const double sign = (std::popcount(j & p.z) & 1) ? -1.0 : 1.0;
    m(j ^ p.x, j) = prefactor * sign;
  }
  return m;
}

DenseMatrix to_matrix(const PauliSum& s) {
  const std::size_t d = std::size_t{1} << s.n_qubits();
  DenseMatrix m(d);
  for (const auto& t : s.terms()) {
    const Complex prefactor = kIPowers[t.string.y_count() & 3] * t.coeff;
    for (std::size_t j = 0; j < d; ++j) {
      const double sign = (std::popcount(j & t.string.z) & 1) ? -1.0 : 1.0;
      m(j ^ t.string.x, j) += prefactor * sign;
    }
  }
  return m;
}

PauliSum decompose_pauli(const DenseMatrix& h) {
  const int n = qubit_count(h.dim());
  if (n > kMaxQubits) throw Error(ErrorCode::InvalidArgument, "too many qubits");
  if (!is_hermitian(h, 1e-12 * std::max(1.0, h.max_abs()))) {
    throw Error(ErrorCode::NotHermitian, "decompose_pauli needs a Hermitian matrix");
  }
  const std::size_t d = h.dim();
  const double norm = 1.0 / static_cast<double>(d);
  std::vector<PauliTerm> terms;
  // c_P = Tr(P h) / d = sum_j P_{j^x, j} h_{j, j^x} / d
  for (std::uint64_t x = 0; x < d; ++x) {
    for (std::uint64_t z = 0; z < d; ++z) {
      const PauliString p{n, x, z};
      const Complex prefactor = kIPowers[p.y_count() & 3];
      Complex tr = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double sign = (std::popcount(j & z) & 1) ? -1.0 : 1.0;
        tr += sign * h(j, j ^ x);
      }
      const double c = (prefactor * tr).real() * norm;
      if (std::abs(c) > kPruneThreshold) terms.push_back({c, p});
    }
  }
  return PauliSum(n, std::move(terms));
}

PauliSum square_sum(const PauliSum& s) {
  Accumulator acc;
  for (const auto& a : s.terms()) {
    for (const auto& b : s.terms()) {
      const auto prod = multiply_strings(a.string, b.string);
      acc[prod.result] += prod.phase() * (a.coeff * b.coeff);
    }
  }
  return collapse(s.n_qubits(), acc, coeff_scale(s, s));
}

PauliSum commutator_i(const PauliSum& a, const PauliSum& b) {
  require_same_qubits(a.n_qubits(), b.n_qubits());
  Accumulator acc;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      // Commuting strings cancel; anticommuting ones give i * 2 * P Q.
      if (ta.string.commutes_with(tb.string)) continue;
      const auto prod = multiply_strings(ta.string, tb.string);
      acc[prod.result] += Complex(0.0, 2.0) * prod.phase() * (ta.coeff * tb.coeff);
    }
  }
  return collapse(a.n_qubits(), acc, coeff_scale(a, b));
}

PauliSum add(const PauliSum& a, const PauliSum& b) {
  require_same_qubits(a.n_qubits(), b.n_qubits());
  std::vector<PauliTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return PauliSum(a.n_qubits(), std::move(terms));
}

MeasurementCostReport term_metrics(const PauliSum& h, const PauliSum& k) {
  require_same_qubits(h.n_qubits(), k.n_qubits());
  const PauliSum h2 = square_sum(h);
  const PauliSum k2 = square_sum(k);
  const PauliSum comm = commutator_i(h, k);

  MeasurementCostReport r;
  r.h_terms = h.size();
  r.k_terms = k.size();
  r.h2_terms = h2.size();
  r.k2_terms = k2.size();
  r.commutator_terms = comm.size();
  r.quadratic_bound_holds = r.h2_terms <= r.h_terms * r.h_terms && r.k2_terms <= r.k_terms * r.k_terms;

  auto collect = [](std::set<PauliString>& into, const PauliSum& s) {
    for (const auto& t : s.terms())
      if (!t.string.is_identity()) into.insert(t.string);
  };
  std::set<PauliString> vqe, split, full;
  collect(vqe, h);
  for (const PauliSum* s : {&h, &k, &h2, &k2}) collect(split, *s);
  full = split;
  collect(full, comm);
  r.vqe_strings = vqe.size();
  r.split_objective_strings = split.size();
  r.objective_strings = full.size();
  return r;
}

}  // namespace nhvqe
