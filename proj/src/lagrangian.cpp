#include "purikit/lagrangian.hpp"

#include <cmath>
#include <limits>

#include "purikit/errors.hpp"
#include "purikit/linalg.hpp"

namespace purikit {

MatrixPowers MatrixPowers::of(const SymMatrix& d) {
  MatrixPowers p;
  p.d2 = linalg::commuting_product(d, d);
  p.d3 = linalg::commuting_product(d, p.d2);
  p.traces.t1 = linalg::trace(d);
  p.traces.t2 = linalg::trace(p.d2);
  p.traces.t3 = linalg::trace(p.d3);
  const double f = linalg::frobenius_norm(p.d2);
  p.traces.t4 = f * f;
  return p;
}

double degeneracy_floor(std::size_t order) noexcept { return 1e-14 * static_cast<double>(order); }

double idempotency_error(const SymMatrix& d) noexcept {
  const double f = linalg::frobenius_norm(d);
  return linalg::trace(d) - f * f;
}

double omega_mcweeny(const SymMatrix& d) {
  SymMatrix w = linalg::commuting_product(d, d);
  w -= d;
  const double f = linalg::frobenius_norm(w);
  return f * f;
}

SymMatrix grad_omega(const SymMatrix& d) {
  const auto p = MatrixPowers::of(d);
  return combine({{4.0, &p.d3}, {-6.0, &p.d2}, {2.0, &d}});
}

std::optional<double> compute_c(const SymMatrix& d, const SymMatrix& dbar) {
  if (d.order() != dbar.order()) throw DimensionMismatch("compute_c: matrix orders differ");
  const double denom = linalg::trace_of_product(d, dbar);
  if (!(std::abs(denom) > degeneracy_floor(d.order()))) return std::nullopt;
  const SymMatrix d2 = linalg::commuting_product(d, d);
  return linalg::trace_of_product(d2, dbar) / denom;
}

std::optional<double> compute_c(const PowerTraces& traces, std::size_t order) noexcept {
  const double denom = traces.idempotency();
  if (!(std::abs(denom) > degeneracy_floor(order))) return std::nullopt;
  return traces.cubic_defect() / denom;
}

SymMatrix grad_lagrangian(const SymMatrix& d, const MatrixPowers& powers, double gamma) {
  // 4D^3 - 6D^2 + 2D - 6 gamma D + 6 gamma D^2
  return combine({{4.0, &powers.d3}, {-6.0 + 6.0 * gamma, &powers.d2}, {2.0 - 6.0 * gamma, &d}});
}

SymMatrix grad_lagrangian(const SymMatrix& d, double gamma) {
  return grad_lagrangian(d, MatrixPowers::of(d), gamma);
}

double lagrangian_value(const SymMatrix& d, double gamma, double n_occ) {
  const auto p = MatrixPowers::of(d);
  const auto& t = p.traces;
  const double omega = t.t4 - 2.0 * t.t3 + t.t2;
  return omega - gamma * (3.0 * t.t2 - 2.0 * t.t3 - n_occ);
}

double trace_gradient_ratio(const PowerTraces& t, double gamma) noexcept {
  const double tr_grad = 2.0 * (2.0 * t.t3 - 3.0 * t.t2 + t.t1) - 6.0 * gamma * (t.t1 - t.t2);
  return tr_grad / t.idempotency();
}

LagrangianDiagnostics diagnose(const SymMatrix& d, const MatrixPowers& powers, double n_occ,
                               const SymMatrix* hamiltonian) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const auto& t = powers.traces;
  LagrangianDiagnostics out;
  out.trace_d = t.t1;
  out.omega = t.t4 - 2.0 * t.t3 + t.t2;
  out.energy = hamiltonian != nullptr ? linalg::trace_of_product(*hamiltonian, d) : nan;

  const auto c = compute_c(t, d.order());
  if (!c) {
    out.c = out.gamma = out.d = nan;
    out.lagrangian = out.omega;
    out.grad_norm = linalg::frobenius_norm(grad_lagrangian(d, powers, 0.0));
    return out;
  }
  out.c = *c;
  out.gamma = compute_gamma(*c);
  out.d = trace_gradient_ratio(t, out.gamma);
  out.lagrangian = out.omega - out.gamma * (3.0 * t.t2 - 2.0 * t.t3 - n_occ);
  out.grad_norm = linalg::frobenius_norm(grad_lagrangian(d, powers, out.gamma));
  return out;
}

}  // namespace purikit
