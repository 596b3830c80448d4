#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "purikit/guess.hpp"
#include "purikit/lagrangian.hpp"
#include "purikit/matrix.hpp"

namespace purikit {

enum class Method { McWeeny, PMCP, HPCP };

/// Which density matrix is iterated. Hole runs purify Dbar = I - D toward
/// trace M - N and return I - Dbar at the end.
enum class Subspace { Particle, Hole };

enum class PmcpBranch { Low, High };  ///< c <= 1/2, c > 1/2

enum class FailureReason { MaxIterations, RunawayDetected, DegenerateTraces };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Subspace s) noexcept;
std::string_view to_string(FailureReason r) noexcept;

struct PurifierConfig {
  Method method = Method::HPCP;
  Subspace subspace = Subspace::Particle;
  double tol = 1e-6;  ///< stop once Tr[D Dbar] <= tol
  int max_iter = 100;
  bool record_trace = true;
  /// Attach oracle eigenvalues of every iterate (slow, for plots/tests).
  bool record_eigenvalues = false;
  /// Fixed descent step; the shipped recursions all correspond to 1/2.
  double step_length = 0.5;

  void validate() const;
};

struct IterationRecord {
  int n = 0;
  double trace_d = 0.0;            ///< Tr D (particle matrix)
  double idempotency_error = 0.0;  ///< Tr[D Dbar]
  double c = 0.0;
  double gamma = 0.0;
  double d = 0.0;  ///< Tr[grad L] / Tr[D Dbar], roundoff-level
  double energy = 0.0;
  double omega = 0.0;
  double lagrangian = 0.0;
  double grad_norm = 0.0;
  std::vector<double> eigenvalues;
};

struct RunResult {
  bool converged = false;
  int iterations = 0;
  SymMatrix final_d;
  std::vector<IterationRecord> records;
  std::optional<FailureReason> failure_reason;
  GuessReport guess;
};

/// 3D^2 - 2D^3.
SymMatrix mcweeny_step(const SymMatrix& d);
SymMatrix mcweeny_step(const SymMatrix& d, const MatrixPowers& powers);

struct PmcpStep {
  SymMatrix next;
  double c = 0.0;
  PmcpBranch branch = PmcpBranch::Low;
};

/// Canonical two-branch step:
///   c <= 1/2: [-D^3 + (1+c) D^2 + (1-2c) D] / (1-c)
///   c >  1/2: [-D^3 + (1+c) D^2] / c
/// Throws DegenerateTraces when Tr[D - D^2] is below the degeneracy floor.
PmcpStep pmcp_step(const SymMatrix& d);
PmcpStep pmcp_step(const SymMatrix& d, const MatrixPowers& powers);

struct HpcpStep {
  SymMatrix next;
  double c = 0.0;
};

/// D + 2 (D^2 Dbar - c D Dbar), c = Tr[D^2 Dbar] / Tr[D Dbar], Dbar = I - D.
/// Throws DegenerateTraces like pmcp_step.
HpcpStep hpcp_step(const SymMatrix& d);
HpcpStep hpcp_step(const SymMatrix& d, const MatrixPowers& powers);

/// Builds the configured guess and purifies it.
RunResult run_purification(const SymMatrix& h, int n_occ, const GuessConfig& guess_cfg,
                           const PurifierConfig& cfg);

/// Purifies a caller-supplied particle-space starting matrix. `h` is used for
/// energies only and may be null.
RunResult purify_from(SymMatrix start, int n_occ, const SymMatrix* h, const PurifierConfig& cfg);

}  // namespace purikit
