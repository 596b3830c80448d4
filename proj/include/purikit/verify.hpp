#pragma once

#include <optional>

#include "purikit/matrix.hpp"

namespace purikit {

struct VerificationReport {
  double norm_trace_gap = 0.0;      ///< | ||D||_F - sqrt(Tr D) |
  double norm_occupancy_gap = 0.0;  ///< | ||D||_F^2 - N |
  /// | ||D||_F - N |, the literal unsquared reading; reported, never gated.
  double norm_occupancy_gap_literal = 0.0;
  double spectrum_gap = 0.0;  ///< || sort_desc(eig D) - (1..1, 0..0) ||_2
  std::optional<double> oracle_projector_distance;
  std::optional<double> oracle_energy_gap;
  bool passed = false;
};

/// | ||D||_F - sqrt(Tr D) |. Throws NonPhysicalState when Tr D < 0.
double verify_norm_trace(const SymMatrix& d);

/// | Tr D^2 - N |.
double verify_occupancy_norm(const SymMatrix& d, int n_occ);

/// Euclidean distance between the descending oracle spectrum of D and the
/// ideal occupation vector (1 x N, 0 x (M - N)).
double verify_spectrum(const SymMatrix& d, int n_occ);

struct GroundState {
  SymMatrix projector;  ///< sum over the N lowest eigenvectors v v^T
  double energy = 0.0;  ///< sum of the N lowest eigenvalues
  double frontier_gap = 0.0;
};

/// Throws DegenerateFrontier when eps_{N+1} - eps_N <= 1e-12.
GroundState ground_state_oracle(const SymMatrix& h, int n_occ);

/// All residuals; `passed` requires the three idempotency checks (and the
/// oracle energy gap, when a Hamiltonian is given) to be within threshold.
/// The energy check is relative: |E - E_oracle| <= energy_tol (1 + |E_oracle|).
VerificationReport verify(const SymMatrix& d, int n_occ, double threshold = 1e-6);
VerificationReport verify(const SymMatrix& d, int n_occ, const SymMatrix& h,
                          double threshold = 1e-6, double energy_tol = 1e-5);

}  // namespace purikit
