#pragma once

#include <cstdint>

#include "purikit/matrix.hpp"

namespace purikit {

/// Spectral enclosure [lower, upper] of a symmetric matrix.
struct SpectralBounds {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lower - slack && x <= upper + slack;
  }
};

namespace linalg {

// Parallel kernels. Rows are distributed over OpenMP threads; every output
// entry (and every partial sum) is accumulated in a fixed order, so results
// are bitwise identical for any thread count.

/// Exact product a*b. Counted by multiply_count().
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix multiply(const SymMatrix& a, const SymMatrix& b);

/// Product of two commuting symmetric matrices (e.g. powers of one matrix),
/// symmetrized to remove roundoff asymmetry. One counted multiply.
SymMatrix commuting_product(const SymMatrix& a, const SymMatrix& b);

double trace(const Matrix& a) noexcept;
double trace(const SymMatrix& a) noexcept;

/// Tr[a*b] in O(M^2) without forming the product. Not counted as a multiply.
double trace_of_product(const SymMatrix& a, const SymMatrix& b);

double frobenius_norm(const SymMatrix& a) noexcept;
double frobenius_norm(const Matrix& a) noexcept;

/// Gershgorin disc enclosure:
/// lower = min_i (h_ii - R_i), upper = max_i (h_ii + R_i), R_i = sum_{j!=i} |h_ij|.
SpectralBounds gershgorin_bounds(const SymMatrix& h);

/// Number of multiply() calls made on the calling thread since the last reset.
std::uint64_t multiply_count() noexcept;
void reset_multiply_count() noexcept;

}  // namespace linalg
}  // namespace purikit
