#pragma once

#include <cstddef>
#include <optional>

#include "purikit/matrix.hpp"

namespace purikit {

/// Tr[D^k], k = 1..4.
struct PowerTraces {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;

  /// Tr[D - D^2] = Tr[D Dbar]
  double idempotency() const noexcept { return t1 - t2; }
  /// Tr[D^2 - D^3] = Tr[D^2 Dbar]
  double cubic_defect() const noexcept { return t2 - t3; }
};

/// D^2 and D^3 of a symmetric matrix, formed with exactly two products.
/// Everything a purification step or its diagnostics needs is read off these.
struct MatrixPowers {
  SymMatrix d2;
  SymMatrix d3;
  PowerTraces traces;

  static MatrixPowers of(const SymMatrix& d);
};

struct LagrangianDiagnostics {
  double omega = 0.0;       ///< Tr[(D^2 - D)^2]
  double lagrangian = 0.0;  ///< omega - gamma (Tr[3D^2 - 2D^3] - N)
  double gamma = 0.0;
  double c = 0.0;
  double d = 0.0;  ///< Tr[grad L] / Tr[D - D^2]; zero up to roundoff
  double grad_norm = 0.0;
  double trace_d = 0.0;
  double energy = 0.0;  ///< Tr[H D]
};

/// Below |Tr[D Dbar]| <= 1e-14 * M the fixed point c is undefined.
double degeneracy_floor(std::size_t order) noexcept;

/// Tr[D (I - D)] = Tr D - ||D||_F^2, no matrix product.
double idempotency_error(const SymMatrix& d) noexcept;

/// Tr[(D^2 - D)^2].
double omega_mcweeny(const SymMatrix& d);

/// 2 (2D^3 - 3D^2 + D).
SymMatrix grad_omega(const SymMatrix& d);

/// c = Tr[D^2 Dbar] / Tr[D Dbar]; empty when |Tr[D Dbar]| is below the
/// degeneracy floor.
std::optional<double> compute_c(const SymMatrix& d, const SymMatrix& dbar);

/// Same quantity from precomputed power traces.
std::optional<double> compute_c(const PowerTraces& traces, std::size_t order) noexcept;

/// gamma = 1/3 - (2/3) c  (the trace-of-gradient term d vanishes identically).
constexpr double compute_gamma(double c) noexcept { return 1.0 / 3.0 - 2.0 / 3.0 * c; }

/// grad Omega - 6 gamma (D - D^2).
SymMatrix grad_lagrangian(const SymMatrix& d, double gamma);
SymMatrix grad_lagrangian(const SymMatrix& d, const MatrixPowers& powers, double gamma);

/// Omega(D) - gamma (Tr[3D^2 - 2D^3] - N).
double lagrangian_value(const SymMatrix& d, double gamma, double n_occ);

/// Tr[grad L] / Tr[D - D^2] evaluated from traces. Zero analytically when
/// gamma comes from compute_gamma(c) on the same D.
double trace_gradient_ratio(const PowerTraces& traces, double gamma) noexcept;

/// Per-eigenvalue Lagrangian (x^2 - x)^2 - gamma (3x^2 - 2x^3). The constant
/// +gamma N of the matrix functional is omitted; it only shifts the curve.
constexpr double scalar_lagrangian(double x, double gamma) noexcept {
  const double w = x * x - x;
  return w * w - gamma * (3.0 * x * x - 2.0 * x * x * x);
}

/// d/dx of scalar_lagrangian: 2(2x^3 - 3x^2 + x) - 6 gamma (x - x^2).
constexpr double scalar_lagrangian_slope(double x, double gamma) noexcept {
  return 2.0 * (2.0 * x * x * x - 3.0 * x * x + x) - 6.0 * gamma * (x - x * x);
}

/// Full diagnostic set for D given its powers. `hamiltonian` may be null, in
/// which case energy is NaN. When c is undefined, c, gamma and d are NaN.
LagrangianDiagnostics diagnose(const SymMatrix& d, const MatrixPowers& powers, double n_occ,
                               const SymMatrix* hamiltonian);

}  // namespace purikit
