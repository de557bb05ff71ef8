#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nhvqe {

using Complex = std::complex<double>;

/// Square complex matrix, row-major. Entries are always finite.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim);
  DenseMatrix(std::size_t dim, std::vector<Complex> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static DenseMatrix identity(std::size_t dim);
  static DenseMatrix diagonal(std::span<const Complex> values);

  std::size_t dim() const noexcept { return dim_; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  std::span<const Complex> data() const noexcept { return data_; }

  DenseMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;

  /// y = A x
  std::vector<Complex> apply(std::span<const Complex> x) const;

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(Complex s, const DenseMatrix& a);
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// max_{jk} |a_jk - b_jk|; dimensions must agree.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

bool is_power_of_two(std::size_t d);
/// log2(d) for a power of two; throws NonPowerOfTwoDim otherwise.
int qubit_count(std::size_t d);

/// Hermitian components of M = H + iK, both exactly Hermitian.
struct HermitianPair {
  DenseMatrix h;
  DenseMatrix k;
  std::size_t source_dim = 0;
};

HermitianPair cartesian_decompose(const DenseMatrix& m);
bool is_hermitian(const DenseMatrix& m, double tol);

struct MatrixRecord {
  std::string name;
  DenseMatrix matrix;
  std::optional<std::vector<Complex>> reference_spectrum;
};

/// Names of the built-in test matrices, in listing order.
const std::vector<std::string>& builtin_names();
MatrixRecord builtin(std::string_view name);

MatrixRecord load_matrix(const std::filesystem::path& path);
void save_matrix(const MatrixRecord& record, const std::filesystem::path& path);
MatrixRecord parse_matrix_json(std::string_view text);
std::string format_matrix_json(const MatrixRecord& record);

}  // namespace nhvqe
