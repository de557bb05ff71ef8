#include "nhvqe/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "nhvqe/errors.hpp"

namespace nhvqe {

namespace {

void require_finite(std::span<const Complex> values) {
  for (const auto& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf");
    }
  }
}

void require_same_dim(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

// (X + X^dag) / 2, which is Hermitian bit-for-bit.
DenseMatrix symmetrize(const DenseMatrix& x) {
  const std::size_t d = x.dim();
  DenseMatrix out(d);
  for (std::size_t r = 0; r < d; ++r) {
    out(r, r) = Complex(x(r, r).real(), 0.0);
    for (std::size_t c = r + 1; c < d; ++c) {
      const Complex v = 0.5 * (x(r, c) + std::conj(x(c, r)));
      out(r, c) = v;
      out(c, r) = std::conj(v);
    }
  }
  return out;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

DenseMatrix::DenseMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match dim^2");
  }
  require_finite(data_);
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> values) {
  DenseMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  require_finite(values);
  return m;
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex DenseMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<Complex> DenseMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "vector length != matrix dim");
  std::vector<Complex> y(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b);
  DenseMatrix out(a.dim());
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b);
  DenseMatrix out(a.dim());
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
  return out;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b);
  const std::size_t d = a.dim();
  DenseMatrix out(d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex v = a(r, k);
      if (v == Complex(0.0)) continue;
      for (std::size_t c = 0; c < d; ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

DenseMatrix operator*(Complex s, const DenseMatrix& a) {
  DenseMatrix out(a.dim());
  for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = s * a.data_[i];
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_dim(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_power_of_two(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

int qubit_count(std::size_t d) {
  if (!is_power_of_two(d)) {
    throw Error(ErrorCode::NonPowerOfTwoDim, "dimension " + std::to_string(d) + " is not a power of two");
  }
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

HermitianPair cartesian_decompose(const DenseMatrix& m) {
  qubit_count(m.dim());
  require_finite(m.data());
  const DenseMatrix adj = m.adjoint();
  // K = (M - M^dag) / (2i) = -i/2 (M - M^dag)
  DenseMatrix h = symmetrize(Complex(0.5, 0.0) * (m + adj));
  DenseMatrix k = symmetrize(Complex(0.0, -0.5) * (m - adj));
  return {std::move(h), std::move(k), m.dim()};
}

bool is_hermitian(const DenseMatrix& m, double tol) {
  const std::size_t d = m.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

}  // namespace nhvqe
