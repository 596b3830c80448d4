#pragma once

#include <optional>
#include <string>

#include "purikit/linalg.hpp"
#include "purikit/matrix.hpp"

namespace purikit {

enum class GuessKind {
  ParticlePMCP,         ///< D0 = theta I + min(beta, beta_bar) (mu I - H)
  HolePMCP,             ///< Dbar0 = theta_bar I - max(beta, beta_bar) (mu I - H)
  MixedFixedAlpha,      ///< alpha D0 + (1 - alpha)(I - Dbar0), alpha from config
  MixedOptimizedAlpha,  ///< same, alpha from solve_alpha
};

enum class EigenRange { ZeroOne, MinusHalfThreeHalves };

struct GuessConfig {
  GuessKind kind = GuessKind::ParticlePMCP;
  double alpha = 0.5;
  double delta = 2.0 / 3.0;
  /// Replaces the trace estimate mu = Tr H / M.
  std::optional<double> mu_override;
  /// Replaces the Gershgorin enclosure of H. Lets two similar Hamiltonians
  /// share one guess scaling (e.g. diagonal vs rotated basis).
  std::optional<SpectralBounds> bounds_override;

  /// Throws InvalidArgument unless 0 <= alpha <= 1 and 0 < delta < 1.
  void validate() const;
};

/// The three trace conditions that make c land in [0,1] on the first step.
struct GuessConstraints {
  bool trace_ok = false;      ///< |Tr D - N| <= 1e-9 M
  bool ordering_ok = false;   ///< Tr D > Tr D^2 > Tr D^3
  bool convexity_ok = false;  ///< Tr D^3 > 2 Tr D^2 - Tr D
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  bool all() const noexcept { return trace_ok && ordering_ok && convexity_ok; }
};

struct GuessReport {
  SymMatrix matrix;
  /// Affine form matrix = beta1 I + beta2 (mu I - H).
  double beta1 = 0.0;
  double beta2 = 0.0;
  double mu_used = 0.0;
  SpectralBounds bounds;
  std::optional<double> alpha_used;
  GuessConstraints constraints;
  EigenRange eigen_range = EigenRange::ZeroOne;
  /// True when `matrix` is the hole density matrix (trace M - N).
  bool hole = false;
  /// Set when an optimized alpha could not be found and alpha = 1 was used.
  bool alpha_fallback = false;
  std::string warning;
};

struct AlphaSolution {
  double alpha = 1.0;
  double target = 0.0;  ///< requested Tr D0^2
  bool fallback = false;
  std::string reason;
};

/// Tr H / M.
double estimate_mu(const SymMatrix& h);

/// Target Tr D0^2 for the alpha search: (1 - delta) N when theta <= 1 - delta,
/// N - delta (M - N) otherwise.
double alpha_target(int n_occ, std::size_t order, double delta);

GuessReport build_particle_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg);
GuessReport build_hole_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg);

/// alpha D0 + (1 - alpha)(I - Dbar0) with alpha = cfg.alpha.
GuessReport build_mixed_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg);

/// Solves Tr[(alpha A + (1 - alpha) B)^2] = target for alpha in [0,1],
/// A = D0, B = I - Dbar0. When both roots are admissible the one nearest 1/2
/// wins (ties go to the larger). No admissible root, or a root whose guess
/// breaks check_guess_constraints, yields fallback with alpha = 1.
AlphaSolution solve_alpha(const SymMatrix& h, int n_occ, const GuessConfig& cfg);

/// Dispatches on cfg.kind.
GuessReport build_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg);

GuessConstraints check_guess_constraints(const SymMatrix& d0, int n_occ);

}  // namespace purikit
