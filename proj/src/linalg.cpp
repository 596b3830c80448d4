#include "purikit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "purikit/errors.hpp"

namespace purikit::linalg {
namespace {

// Below this order the fork/join overhead dominates a 2*M^3 flop product.
constexpr std::size_t kParallelThreshold = 48;

thread_local std::uint64_t tl_multiply_count = 0;

// Row sums accumulated serially in index order; keeps reductions
// independent of the thread count.
double ordered_sum(const std::vector<double>& partials) noexcept {
  double s = 0.0;
  for (double v : partials) s += v;
  return s;
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.order() != b.order()) throw DimensionMismatch("multiply: matrix orders differ");
  ++tl_multiply_count;
  const std::size_t n = a.order();
  Matrix c(n);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  double* pc = c.data().data();
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double* ci = pc + i * n;
    const double* ai = pa + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = ai[k];
      const double* bk = pb + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix multiply(const SymMatrix& a, const SymMatrix& b) { return multiply(a.dense(), b.dense()); }

SymMatrix commuting_product(const SymMatrix& a, const SymMatrix& b) {
  return SymMatrix::symmetrized(multiply(a, b));
}

double trace(const Matrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i) s += a(i, i);
  return s;
}

double trace(const SymMatrix& a) noexcept { return trace(a.dense()); }

double trace_of_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw DimensionMismatch("trace_of_product: matrix orders differ");
  // Tr[AB] = sum_ij a_ij b_ji = sum_ij a_ij b_ij for symmetric b.
  const std::size_t n = a.order();
  std::vector<double> partial(n, 0.0);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static) if (n >= 4 * kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += pa[i * n + j] * pb[i * n + j];
    partial[static_cast<std::size_t>(i)] = s;
  }
  return ordered_sum(partial);
}

double frobenius_norm(const Matrix& a) noexcept {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double frobenius_norm(const SymMatrix& a) noexcept { return frobenius_norm(a.dense()); }

SpectralBounds gershgorin_bounds(const SymMatrix& h) {
  const std::size_t n = h.order();
  if (n == 0) throw DimensionMismatch("gershgorin_bounds: empty matrix");
  std::vector<double> lo(n), hi(n);
  const double* ph = h.data().data();
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel for schedule(static) if (n >= 4 * kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != r) radius += std::abs(ph[r * n + j]);
    const double centre = ph[r * n + r];
    lo[r] = centre - radius;
    hi[r] = centre + radius;
  }
  return {*std::min_element(lo.begin(), lo.end()), *std::max_element(hi.begin(), hi.end())};
}

std::uint64_t multiply_count() noexcept { return tl_multiply_count; }
void reset_multiply_count() noexcept { tl_multiply_count = 0; }

}  // namespace purikit::linalg
