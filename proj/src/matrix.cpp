#include "purikit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "purikit/errors.hpp"

namespace purikit {

Matrix::Matrix(std::size_t order, double fill) : order_(order), data_(order * order, fill) {}

Matrix Matrix::identity(std::size_t order) {
  Matrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(order_);
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double max_asymmetry(const Matrix& m) noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t j = i + 1; j < m.order(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

double max_abs_entry(std::span<const double> values) noexcept {
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v));
  return worst;
}

SymMatrix::SymMatrix(std::size_t order) : m_(order) {}

SymMatrix SymMatrix::identity(std::size_t order) { return SymMatrix(Matrix::identity(order)); }

SymMatrix SymMatrix::scaled_identity(std::size_t order, double value) {
  Matrix m(order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = value;
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::diagonal(std::span<const double> values) {
  Matrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return SymMatrix(std::move(m));
}

SymMatrix SymMatrix::symmetrized(const Matrix& m) {
  if (m.order() == 0) throw DimensionMismatch("cannot symmetrize an empty matrix");
  Matrix s(m.order());
  const std::size_t n = m.order();
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = m(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return SymMatrix(std::move(s));
}

SymMatrix SymMatrix::from_dense(const Matrix& m) {
  const double scale = max_abs_entry(m.data());
  if (max_asymmetry(m) > 1e-14 * scale)
    throw InvalidArgument("matrix is not symmetric");
  return symmetrized(m);
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  std::size_t i = 0;
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionMismatch("row length differs from row count");
    std::size_t j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return from_dense(m);
}

std::vector<double> SymMatrix::diagonal_entries() const {
  std::vector<double> d(order());
  for (std::size_t i = 0; i < order(); ++i) d[i] = m_(i, i);
  return d;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.order() != order()) throw DimensionMismatch("matrix orders differ");
  auto dst = m_.data();
  auto src = other.m_.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.order() != order()) throw DimensionMismatch("matrix orders differ");
  auto dst = m_.data();
  auto src = other.m_.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] -= src[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
  for (double& v : m_.data()) v *= s;
  return *this;
}

SymMatrix& SymMatrix::add_identity(double s) noexcept {
  for (std::size_t i = 0; i < order(); ++i) m_(i, i) += s;
  return *this;
}

SymMatrix& SymMatrix::axpy(double w, const SymMatrix& x) {
  if (x.order() != order()) throw DimensionMismatch("matrix orders differ");
  auto dst = m_.data();
  auto src = x.m_.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
  return *this;
}

SymMatrix combine(std::initializer_list<std::pair<double, const SymMatrix*>> terms) {
  if (terms.size() == 0) throw InvalidArgument("empty linear combination");
  const std::size_t n = terms.begin()->second->order();
  SymMatrix out(n);
  for (const auto& [w, x] : terms) {
    if (x->order() != n) throw DimensionMismatch("matrix orders differ");
    out.axpy(w, *x);
  }
  return out;
}

}  // namespace purikit
