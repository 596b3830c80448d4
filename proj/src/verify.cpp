#include "purikit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "purikit/eigen.hpp"
#include "purikit/errors.hpp"
#include "purikit/linalg.hpp"

namespace purikit {

double verify_norm_trace(const SymMatrix& d) {
  const double tr = linalg::trace(d);
  if (tr < 0.0) throw NonPhysicalState("Tr D = " + std::to_string(tr) + " is negative");
  return std::abs(linalg::frobenius_norm(d) - std::sqrt(tr));
}

double verify_occupancy_norm(const SymMatrix& d, int n_occ) {
  const double f = linalg::frobenius_norm(d);
  return std::abs(f * f - n_occ);
}

double verify_spectrum(const SymMatrix& d, int n_occ) {
  std::vector<double> values = eigenvalues_oracle(d);
  std::sort(values.begin(), values.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double ideal = k < static_cast<std::size_t>(n_occ) ? 1.0 : 0.0;
    s += (values[k] - ideal) * (values[k] - ideal);
  }
  return std::sqrt(s);
}

GroundState ground_state_oracle(const SymMatrix& h, int n_occ) {
  const std::size_t m = h.order();
  if (n_occ <= 0 || static_cast<std::size_t>(n_occ) >= m)
    throw InvalidArgument("occupancy must satisfy 0 < N < M");
  const EigenDecomposition eig = eig_oracle(h);
  const auto n = static_cast<std::size_t>(n_occ);
  const double gap = eig.values[n] - eig.values[n - 1];
  if (gap <= 1e-12)
    throw DegenerateFrontier("eps_{N+1} - eps_N = " + std::to_string(gap));

  Matrix p(m);
  double energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    energy += eig.values[k];
    for (std::size_t i = 0; i < m; ++i) {
      const double vik = eig.vectors(i, k);
      for (std::size_t j = 0; j < m; ++j) p(i, j) += vik * eig.vectors(j, k);
    }
  }
  return {SymMatrix::symmetrized(p), energy, gap};
}

VerificationReport verify(const SymMatrix& d, int n_occ, double threshold) {
  VerificationReport r;
  r.norm_trace_gap = verify_norm_trace(d);
  r.norm_occupancy_gap = verify_occupancy_norm(d, n_occ);
  r.norm_occupancy_gap_literal = std::abs(linalg::frobenius_norm(d) - n_occ);
  r.spectrum_gap = verify_spectrum(d, n_occ);
  r.passed = r.norm_trace_gap <= threshold && r.norm_occupancy_gap <= threshold &&
             r.spectrum_gap <= threshold;
  return r;
}

VerificationReport verify(const SymMatrix& d, int n_occ, const SymMatrix& h, double threshold,
                          double energy_tol) {
  if (h.order() != d.order()) throw DimensionMismatch("Hamiltonian and density orders differ");
  VerificationReport r = verify(d, n_occ, threshold);
  const GroundState gs = ground_state_oracle(h, n_occ);
  r.oracle_projector_distance = linalg::frobenius_norm(d - gs.projector);
  r.oracle_energy_gap = std::abs(linalg::trace_of_product(h, d) - gs.energy);
  r.passed = r.passed && *r.oracle_energy_gap <= energy_tol * (1.0 + std::abs(gs.energy));
  return r;
}

}  // namespace purikit
