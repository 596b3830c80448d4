#pragma once

// Serial reference kernels. They mirror the parallel kernels in linalg.hpp
// with the plainest possible loops and are used only by the test suites and
// the kernel benchmarks; nothing in the library calls them.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "purikit/linalg.hpp"
#include "purikit/matrix.hpp"

namespace purikit::reference {

/// Textbook i-j-k triple loop.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.order();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline double trace_of_product(const Matrix& a, const Matrix& b) {
  // row sums first, then the rows in order: the parallel kernel's association
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < a.order(); ++k) row += a(i, k) * b(k, i);
    s += row;
  }
  return s;
}

inline SpectralBounds gershgorin_bounds(const Matrix& h) {
  SpectralBounds b{h(0, 0), h(0, 0)};
  bool first = true;
  for (std::size_t i = 0; i < h.order(); ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < h.order(); ++j)
      if (j != i) r += std::abs(h(i, j));
    const double lo = h(i, i) - r;
    const double hi = h(i, i) + r;
    b.lower = first ? lo : std::min(b.lower, lo);
    b.upper = first ? hi : std::max(b.upper, hi);
    first = false;
  }
  return b;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < a.order(); ++j) s += std::abs(a(i, j)) * std::abs(a(i, j));
  return std::sqrt(s);
}

}  // namespace purikit::reference
