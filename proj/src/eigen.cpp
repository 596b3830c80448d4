#include "purikit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "purikit/errors.hpp"

namespace purikit {
namespace {

double off_diagonal_norm_sq(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.order(); ++i)
    for (std::size_t j = 0; j < a.order(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return s;
}

// Rotates rows/columns p and q so that a(p,q) becomes zero.
void rotate(Matrix& a, Matrix* v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::size_t n = a.order();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  if (v != nullptr) {
    for (std::size_t k = 0; k < n; ++k) {
      const double vkp = (*v)(k, p);
      const double vkq = (*v)(k, q);
      (*v)(k, p) = c * vkp - s * vkq;
      (*v)(k, q) = s * vkp + c * vkq;
    }
  }
}

void jacobi(Matrix& a, Matrix* v, int max_sweeps) {
  const std::size_t n = a.order();
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  // Off-diagonal Frobenius mass at the roundoff floor of an n x n matrix.
  const double rel = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  const double target = rel * rel * total;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm_sq(a) <= target) return;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  if (off_diagonal_norm_sq(a) <= target) return;
  throw EigenNonConvergence("cyclic Jacobi did not converge in " + std::to_string(max_sweeps) +
                            " sweeps");
}

}  // namespace

EigenDecomposition eig_oracle(const SymMatrix& a, int max_sweeps) {
  Matrix work = a.dense();
  Matrix v = Matrix::identity(a.order());
  jacobi(work, &v, max_sweeps);

  const std::size_t n = a.order();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return work(x, x) < work(y, y); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = work(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> eigenvalues_oracle(const SymMatrix& a, int max_sweeps) {
  Matrix work = a.dense();
  jacobi(work, nullptr, max_sweeps);
  std::vector<double> values(a.order());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = work(k, k);
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace purikit
