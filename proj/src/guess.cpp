#include "purikit/guess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "purikit/errors.hpp"
#include "purikit/lagrangian.hpp"

namespace purikit {
namespace {

struct Scaling {
  double theta;
  double mu;
  double beta;      // theta / (Hmax - mu)
  double beta_bar;  // theta_bar / (mu - Hmin)
  SpectralBounds bounds;
};

void check_occupancy(const SymMatrix& h, int n_occ) {
  if (n_occ <= 0 || static_cast<std::size_t>(n_occ) >= h.order())
    throw InvalidArgument("occupancy must satisfy 0 < N < M (N=" + std::to_string(n_occ) +
                          ", M=" + std::to_string(h.order()) + ")");
}

Scaling scaling_for(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  check_occupancy(h, n_occ);
  cfg.validate();
  Scaling s{};
  s.theta = static_cast<double>(n_occ) / static_cast<double>(h.order());
  s.mu = cfg.mu_override.value_or(estimate_mu(h));
  s.bounds = cfg.bounds_override.value_or(linalg::gershgorin_bounds(h));
  if (!(s.bounds.upper > s.mu && s.mu > s.bounds.lower))
    throw InvalidChemicalPotential("mu = " + std::to_string(s.mu) + " is not inside (" +
                                   std::to_string(s.bounds.lower) + ", " +
                                   std::to_string(s.bounds.upper) + ")");
  s.beta = s.theta / (s.bounds.upper - s.mu);
  s.beta_bar = (1.0 - s.theta) / (s.mu - s.bounds.lower);
  return s;
}

// beta1 I + beta2 (mu I - H) = -beta2 H + (beta1 + beta2 mu) I
SymMatrix affine_in_h(const SymMatrix& h, double beta1, double beta2, double mu) {
  SymMatrix d = h;
  d *= -beta2;
  d.add_identity(beta1 + beta2 * mu);
  return d;
}

GuessReport affine_report(const SymMatrix& h, const Scaling& s, double beta1, double beta2) {
  GuessReport r;
  r.matrix = affine_in_h(h, beta1, beta2, s.mu);
  r.beta1 = beta1;
  r.beta2 = beta2;
  r.mu_used = s.mu;
  r.bounds = s.bounds;
  return r;
}

// Real roots of qa x^2 + qb x + qc in [0,1]; qa != 0.
std::vector<double> unit_interval_roots(double qa, double qb, double qc) {
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return {};
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  std::vector<double> roots{q / qa};
  if (q != 0.0) roots.push_back(qc / q);
  std::vector<double> admissible;
  constexpr double slack = 1e-12;
  for (double r : roots)
    if (r >= -slack && r <= 1.0 + slack) admissible.push_back(std::clamp(r, 0.0, 1.0));
  return admissible;
}

}  // namespace

void GuessConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
}

double estimate_mu(const SymMatrix& h) {
  if (h.order() == 0) throw DimensionMismatch("estimate_mu: empty matrix");
  return linalg::trace(h) / static_cast<double>(h.order());
}

double alpha_target(int n_occ, std::size_t order, double delta) {
  const double n = n_occ;
  const double m = static_cast<double>(order);
  const double theta = n / m;
  if (theta <= 1.0 - delta) return n - delta * n;
  return n - delta * (m - n);
}

GuessReport build_particle_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  const Scaling s = scaling_for(h, n_occ, cfg);
  GuessReport r = affine_report(h, s, s.theta, std::min(s.beta, s.beta_bar));
  r.constraints = check_guess_constraints(r.matrix, n_occ);
  return r;
}

GuessReport build_hole_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  const Scaling s = scaling_for(h, n_occ, cfg);
  GuessReport r = affine_report(h, s, 1.0 - s.theta, -std::max(s.beta, s.beta_bar));
  r.hole = true;
  r.constraints = check_guess_constraints(r.matrix, static_cast<int>(h.order()) - n_occ);
  return r;
}

namespace {

GuessReport mixed_with_alpha(const SymMatrix& h, int n_occ, const Scaling& s, double alpha) {
  const SymMatrix particle = affine_in_h(h, s.theta, std::min(s.beta, s.beta_bar), s.mu);
  SymMatrix complement = affine_in_h(h, 1.0 - s.theta, -std::max(s.beta, s.beta_bar), s.mu);
  complement *= -1.0;
  complement.add_identity(1.0);  // I - Dbar0

  GuessReport r;
  r.matrix = combine({{alpha, &particle}, {1.0 - alpha, &complement}});
  r.beta1 = s.theta;
  r.beta2 = alpha * std::min(s.beta, s.beta_bar) + (1.0 - alpha) * std::max(s.beta, s.beta_bar);
  r.mu_used = s.mu;
  r.bounds = s.bounds;
  r.alpha_used = alpha;
  r.eigen_range = EigenRange::MinusHalfThreeHalves;
  r.constraints = check_guess_constraints(r.matrix, n_occ);
  return r;
}

}  // namespace

GuessReport build_mixed_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  return mixed_with_alpha(h, n_occ, scaling_for(h, n_occ, cfg), cfg.alpha);
}

AlphaSolution solve_alpha(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  const Scaling s = scaling_for(h, n_occ, cfg);
  AlphaSolution out;
  out.target = alpha_target(n_occ, h.order(), cfg.delta);

  const SymMatrix a = affine_in_h(h, s.theta, std::min(s.beta, s.beta_bar), s.mu);
  SymMatrix b = affine_in_h(h, 1.0 - s.theta, -std::max(s.beta, s.beta_bar), s.mu);
  b *= -1.0;
  b.add_identity(1.0);

  const double taa = linalg::trace_of_product(a, a);
  const double tab = linalg::trace_of_product(a, b);
  const double tbb = linalg::trace_of_product(b, b);

  // alpha^2 Taa + 2 alpha (1 - alpha) Tab + (1 - alpha)^2 Tbb = target
  const double qa = taa - 2.0 * tab + tbb;  // Tr[(A - B)^2] >= 0
  const double qb = 2.0 * tab - 2.0 * tbb;
  const double qc = tbb - out.target;

  auto fall_back = [&](std::string why) {
    out.alpha = 1.0;
    out.fallback = true;
    out.reason = std::move(why);
    return out;
  };

  const double scale = std::max({taa, tbb, 1.0});
  std::vector<double> roots;
  if (qa <= 1e-14 * scale) {
    if (std::abs(qc) > 1e-12 * scale)
      return fall_back("Tr D0^2 does not depend on alpha and differs from the target");
    roots.push_back(0.5);
  } else {
    roots = unit_interval_roots(qa, qb, qc);
    if (roots.empty()) return fall_back("no root of the alpha quadratic in [0,1]");
  }

  const auto better = [](double x, double y) {
    const double dx = std::abs(x - 0.5);
    const double dy = std::abs(y - 0.5);
    return dx < dy || (dx == dy && x > y);
  };
  std::sort(roots.begin(), roots.end(), better);
  out.alpha = roots.front();

  const GuessReport trial = mixed_with_alpha(h, n_occ, s, out.alpha);
  if (!trial.constraints.all())
    return fall_back("optimized guess violates the first-step trace conditions");
  return out;
}

GuessReport build_guess(const SymMatrix& h, int n_occ, const GuessConfig& cfg) {
  switch (cfg.kind) {
    case GuessKind::ParticlePMCP:
      return build_particle_guess(h, n_occ, cfg);
    case GuessKind::HolePMCP:
      return build_hole_guess(h, n_occ, cfg);
    case GuessKind::MixedFixedAlpha:
      return build_mixed_guess(h, n_occ, cfg);
    case GuessKind::MixedOptimizedAlpha: {
      const AlphaSolution sol = solve_alpha(h, n_occ, cfg);
      if (sol.fallback) {
        GuessReport r = build_particle_guess(h, n_occ, cfg);
        r.alpha_used = 1.0;
        r.alpha_fallback = true;
        r.warning = "alpha search fell back to alpha=1: " + sol.reason;
        return r;
      }
      GuessConfig fixed = cfg;
      fixed.alpha = sol.alpha;
      return build_mixed_guess(h, n_occ, fixed);
    }
  }
  throw InvalidArgument("unknown guess kind");
}

GuessConstraints check_guess_constraints(const SymMatrix& d0, int n_occ) {
  const SymMatrix d2 = linalg::commuting_product(d0, d0);
  GuessConstraints g;
  g.t1 = linalg::trace(d0);
  g.t2 = linalg::trace(d2);
  g.t3 = linalg::trace_of_product(d0, d2);
  const double m = static_cast<double>(d0.order());
  // Strict inequalities are judged beyond the roundoff floor so that an exact
  // projector (all three traces equal) fails them.
  const double floor = degeneracy_floor(d0.order());
  g.trace_ok = std::abs(g.t1 - n_occ) <= 1e-9 * m;
  g.ordering_ok = (g.t1 - g.t2 > floor) && (g.t2 - g.t3 > floor);
  g.convexity_ok = g.t3 - (2.0 * g.t2 - g.t1) > floor;
  return g;
}

}  // namespace purikit
