#include "purikit/hamgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "purikit/errors.hpp"
#include "purikit/format.hpp"
#include "purikit/linalg.hpp"
#include "purikit/random.hpp"

namespace purikit {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::string_view to_string(Basis b) noexcept {
  return b == Basis::Diagonal ? "diagonal" : "orthogonal";
}

void HamiltonianSpec::validate() const {
  if (m < 2) throw InvalidArgument("matrix order must be at least 2");
  if (n_occ <= 0 || n_occ >= m) throw InvalidArgument("occupancy must satisfy 0 < N < M");
  if (!(gap > 0.0)) throw InvalidArgument("gap must be positive");
  if (!(range_low < range_high)) throw InvalidArgument("range_low must be below range_high");
  if (!(gap < range_high - range_low)) throw InvalidArgument("gap exceeds the spectral range");
  if (!(range_low < -0.5 * gap && 0.5 * gap < range_high))
    throw InvalidArgument("the frontier levels +-gap/2 must lie strictly inside the range");
}

std::string HamiltonianSpec::to_key_values() const {
  std::ostringstream os;
  os << "m=" << m << "\nn_occ=" << n_occ << "\ngap=" << format_double(gap)
     << "\nrange_low=" << format_double(range_low) << "\nrange_high=" << format_double(range_high)
     << "\nseed=" << seed << "\nbasis=" << to_string(basis);
  return os.str();
}

namespace {

std::vector<double> draw_spectrum(const HamiltonianSpec& spec, Rng& rng) {
  spec.validate();
  const double lo_edge = -0.5 * spec.gap;
  const double hi_edge = 0.5 * spec.gap;
  std::vector<double> eps;
  eps.reserve(static_cast<std::size_t>(spec.m));
  for (int i = 0; i < spec.n_occ - 1; ++i) eps.push_back(rng.uniform(spec.range_low, lo_edge));
  eps.push_back(lo_edge);
  eps.push_back(hi_edge);
  for (int i = 0; i < spec.m - spec.n_occ - 1; ++i)
    eps.push_back(rng.uniform(hi_edge, spec.range_high));
  std::sort(eps.begin(), eps.end());
  return eps;
}

}  // namespace

std::vector<double> generate_spectrum(const HamiltonianSpec& spec) {
  Rng rng(spec.seed);
  return draw_spectrum(spec, rng);
}

Matrix random_orthogonal(std::size_t order, Rng& rng) {
  const std::size_t n = order;
  // Columns of q start as iid normals (row-major fill), then twice-applied
  // modified Gram-Schmidt; the column norms are R's positive diagonal.
  Matrix q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) = rng.normal();

  for (std::size_t k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < k; ++p) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += q(i, p) * q(i, k);
        for (std::size_t i = 0; i < n; ++i) q(i, k) -= dot * q(i, p);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += q(i, k) * q(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error("random_orthogonal: rank-deficient draw");
    for (std::size_t i = 0; i < n; ++i) q(i, k) /= norm;
  }
  return q;
}

SymMatrix generate_hamiltonian(const HamiltonianSpec& spec) {
  Rng rng(spec.seed);
  const std::vector<double> eps = draw_spectrum(spec, rng);
  if (spec.basis == Basis::Diagonal) return SymMatrix::diagonal(eps);

  const std::size_t n = eps.size();
  const Matrix q = random_orthogonal(n, rng);
  // Q^T diag(eps) Q
  Matrix lq(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lq(i, j) = eps[i] * q(i, j);
  return SymMatrix::symmetrized(linalg::multiply(q.transposed(), lq));
}

}  // namespace purikit
