#include "purikit/purify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "purikit/eigen.hpp"
#include "purikit/errors.hpp"
#include "purikit/linalg.hpp"

namespace purikit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// c outside this window means the iterate has left the region where the
// fixed point is meaningful and the recursion is running away.
constexpr double kRunawayLow = -0.5;
constexpr double kRunawayHigh = 1.5;

double require_c(const MatrixPowers& powers, std::size_t order) {
  const auto c = compute_c(powers.traces, order);
  if (!c) throw DegenerateTraces("Tr[D - D^2] is below the degeneracy floor");
  return *c;
}

// View of the iterated matrix X in particle terms: D = X or D = I - X.
struct ParticleView {
  bool hole;
  double order;
  double trace_h;
  const SymMatrix* h;

  double trace(double trace_x) const noexcept { return hole ? order - trace_x : trace_x; }
  double energy(const SymMatrix& x) const {
    if (h == nullptr) return kNaN;
    const double e = linalg::trace_of_product(*h, x);
    return hole ? trace_h - e : e;
  }
};

IterationRecord light_record(int n, const SymMatrix& x, double idem, const ParticleView& view) {
  IterationRecord r;
  r.n = n;
  r.trace_d = view.trace(linalg::trace(x));
  r.idempotency_error = idem;
  r.energy = view.energy(x);
  r.c = r.gamma = r.d = r.omega = r.lagrangian = r.grad_norm = kNaN;
  return r;
}

IterationRecord full_record(int n, const SymMatrix& x, const MatrixPowers& powers, double target,
                            const ParticleView& view, bool with_eigenvalues) {
  const LagrangianDiagnostics diag = diagnose(x, powers, target, nullptr);
  IterationRecord r;
  r.n = n;
  r.trace_d = view.trace(diag.trace_d);
  r.idempotency_error = powers.traces.idempotency();
  r.c = diag.c;
  r.gamma = diag.gamma;
  r.d = diag.d;
  r.energy = view.energy(x);
  r.omega = diag.omega;
  r.lagrangian = diag.lagrangian;
  r.grad_norm = diag.grad_norm;
  if (with_eigenvalues) {
    r.eigenvalues = eigenvalues_oracle(x);
    if (view.hole) {
      for (double& v : r.eigenvalues) v = 1.0 - v;
      std::sort(r.eigenvalues.begin(), r.eigenvalues.end());
    }
  }
  return r;
}

SymMatrix gradient_step(const SymMatrix& x, const MatrixPowers& powers, double gamma,
                        double sigma) {
  SymMatrix next = x;
  next.axpy(-sigma, grad_lagrangian(x, powers, gamma));
  return next;
}

SymMatrix advance(Method method, const SymMatrix& x, const MatrixPowers& powers, double c,
                  double sigma) {
  const bool half_step = sigma == 0.5;
  switch (method) {
    case Method::McWeeny:
      return half_step ? mcweeny_step(x, powers) : gradient_step(x, powers, 0.0, sigma);
    case Method::PMCP:
      return pmcp_step(x, powers).next;
    case Method::HPCP:
      return half_step ? hpcp_step(x, powers).next
                       : gradient_step(x, powers, compute_gamma(c), sigma);
  }
  throw InvalidArgument("unknown purification method");
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::McWeeny: return "mcweeny";
    case Method::PMCP: return "pmcp";
    case Method::HPCP: return "hpcp";
  }
  return "?";
}

std::string_view to_string(Subspace s) noexcept {
  return s == Subspace::Particle ? "particle" : "hole";
}

std::string_view to_string(FailureReason r) noexcept {
  switch (r) {
    case FailureReason::MaxIterations: return "max_iterations";
    case FailureReason::RunawayDetected: return "runaway";
    case FailureReason::DegenerateTraces: return "degenerate_traces";
  }
  return "?";
}

void PurifierConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (!(step_length > 0.0)) throw InvalidArgument("step_length must be positive");
  if (method == Method::PMCP && step_length != 0.5)
    throw InvalidArgument("the PMCP recursion has no step-length parameter (use 0.5)");
}

SymMatrix mcweeny_step([[maybe_unused]] const SymMatrix& d, const MatrixPowers& powers) {
  return combine({{3.0, &powers.d2}, {-2.0, &powers.d3}});
}

SymMatrix mcweeny_step(const SymMatrix& d) { return mcweeny_step(d, MatrixPowers::of(d)); }

PmcpStep pmcp_step(const SymMatrix& d, const MatrixPowers& powers) {
  const double c = require_c(powers, d.order());
  PmcpStep out;
  out.c = c;
  if (c <= 0.5) {
    const double s = 1.0 / (1.0 - c);
    out.branch = PmcpBranch::Low;
    out.next = combine({{-s, &powers.d3}, {(1.0 + c) * s, &powers.d2}, {(1.0 - 2.0 * c) * s, &d}});
  } else {
    const double s = 1.0 / c;
    out.branch = PmcpBranch::High;
    out.next = combine({{-s, &powers.d3}, {(1.0 + c) * s, &powers.d2}});
  }
  return out;
}

PmcpStep pmcp_step(const SymMatrix& d) { return pmcp_step(d, MatrixPowers::of(d)); }

HpcpStep hpcp_step(const SymMatrix& d, const MatrixPowers& powers) {
  const double c = require_c(powers, d.order());
  // D + 2(D^2 - D^3) - 2c(D - D^2)
  return {combine({{1.0 - 2.0 * c, &d}, {2.0 + 2.0 * c, &powers.d2}, {-2.0, &powers.d3}}), c};
}

HpcpStep hpcp_step(const SymMatrix& d) { return hpcp_step(d, MatrixPowers::of(d)); }

RunResult purify_from(SymMatrix start, int n_occ, const SymMatrix* h, const PurifierConfig& cfg) {
  cfg.validate();
  const std::size_t m = start.order();
  if (n_occ <= 0 || static_cast<std::size_t>(n_occ) >= m)
    throw InvalidArgument("occupancy must satisfy 0 < N < M");
  if (h != nullptr && h->order() != m) throw DimensionMismatch("Hamiltonian and guess orders differ");

  const bool hole = cfg.subspace == Subspace::Hole;
  const ParticleView view{hole, static_cast<double>(m), h ? linalg::trace(*h) : kNaN, h};
  const double target = hole ? static_cast<double>(m) - n_occ : static_cast<double>(n_occ);

  SymMatrix x = std::move(start);
  if (hole) {
    x *= -1.0;
    x.add_identity(1.0);
  }

  RunResult result;
  auto finish = [&](int n, double idem, std::optional<FailureReason> why) {
    result.iterations = n;
    result.failure_reason = why;
    result.converged = !why.has_value();
    if (cfg.record_trace) {
      if (std::isfinite(idem) && std::abs(idem) > degeneracy_floor(m)) {
        result.records.push_back(
            full_record(n, x, MatrixPowers::of(x), target, view, cfg.record_eigenvalues));
      } else {
        result.records.push_back(light_record(n, x, idem, view));
      }
    }
  };

  for (int n = 0;; ++n) {
    const double idem = idempotency_error(x);
    if (!std::isfinite(idem) || !std::isfinite(linalg::trace(x))) {
      finish(n, idem, FailureReason::RunawayDetected);
      break;
    }
    if (idem < -cfg.tol) {
      // Eigenvalues outside [0,1] dominate Tr[D Dbar]; c has no meaning.
      finish(n, idem, FailureReason::RunawayDetected);
      break;
    }
    if (idem <= cfg.tol) {
      finish(n, idem, std::nullopt);
      break;
    }
    if (n >= cfg.max_iter) {
      finish(n, idem, FailureReason::MaxIterations);
      break;
    }

    const MatrixPowers powers = MatrixPowers::of(x);
    const auto c = compute_c(powers.traces, m);
    if (!c) {
      finish(n, idem, FailureReason::DegenerateTraces);
      break;
    }
    if (cfg.method != Method::McWeeny && !(*c >= kRunawayLow && *c <= kRunawayHigh)) {
      finish(n, idem, FailureReason::RunawayDetected);
      break;
    }
    if (cfg.record_trace)
      result.records.push_back(full_record(n, x, powers, target, view, cfg.record_eigenvalues));

    x = advance(cfg.method, x, powers, *c, cfg.step_length);
  }

  if (hole) {
    x *= -1.0;
    x.add_identity(1.0);
  }
  result.final_d = std::move(x);
  return result;
}

RunResult run_purification(const SymMatrix& h, int n_occ, const GuessConfig& guess_cfg,
                           const PurifierConfig& cfg) {
  GuessReport guess = build_guess(h, n_occ, guess_cfg);
  SymMatrix start = guess.matrix;
  if (guess.hole) {
    start *= -1.0;
    start.add_identity(1.0);
  }
  RunResult result = purify_from(std::move(start), n_occ, &h, cfg);
  result.guess = std::move(guess);
  return result;
}

}  // namespace purikit
