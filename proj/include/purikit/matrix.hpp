#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace purikit {

/// Dense square matrix, row-major. General (not necessarily symmetric);
/// this is what a raw product of two matrices returns.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t order, double fill = 0.0);

  static Matrix identity(std::size_t order);

  std::size_t order() const noexcept { return order_; }
  std::size_t size() const noexcept { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * order_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * order_ + j];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * order_, order_);
  }

  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t order_ = 0;
  std::vector<double> data_;
};

/// Dense real symmetric matrix. The full square is stored; every constructor
/// and mutator keeps a(i,j) == a(j,i) exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t order);

  static SymMatrix identity(std::size_t order);
  static SymMatrix scaled_identity(std::size_t order, double value);
  static SymMatrix diagonal(std::span<const double> values);

  /// (X + X^T) / 2. Throws DimensionMismatch on an empty matrix.
  static SymMatrix symmetrized(const Matrix& m);

  /// Accepts a matrix that is symmetric up to roundoff
  /// (max asymmetry <= 1e-14 * max|entry|) and symmetrizes it; otherwise
  /// throws InvalidArgument.
  static SymMatrix from_dense(const Matrix& m);

  /// Row-wise literal, e.g. {{0, 1}, {1, 0}}. Same symmetry check as from_dense.
  static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t order() const noexcept { return m_.order(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

  /// Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double value) noexcept {
    m_(i, j) = value;
    m_(j, i) = value;
  }

  const Matrix& dense() const noexcept { return m_; }
  std::span<const double> data() const noexcept { return m_.data(); }

  std::vector<double> diagonal_entries() const;

  // Element-wise algebra; all preserve exact symmetry.
  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s) noexcept;
  SymMatrix& add_identity(double s) noexcept;
  /// this += w * x
  SymMatrix& axpy(double w, const SymMatrix& x);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) noexcept { return a *= s; }
  friend SymMatrix operator*(SymMatrix a, double s) noexcept { return a *= s; }

  bool operator==(const SymMatrix&) const = default;

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

/// max_{i<j} |a_ij - a_ji|
double max_asymmetry(const Matrix& m) noexcept;

/// max_ij |a_ij|
double max_abs_entry(std::span<const double> values) noexcept;

/// Linear combination sum_k w_k * X_k of equally sized symmetric matrices.
SymMatrix combine(std::initializer_list<std::pair<double, const SymMatrix*>> terms);

}  // namespace purikit
