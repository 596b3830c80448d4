#include <algorithm>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "purikit/eigen.hpp"
#include "purikit/errors.hpp"
#include "purikit/hamgen.hpp"
#include "purikit/linalg.hpp"
#include "purikit/purify.hpp"
#include "purikit/verify.hpp"
#include "support/oracles.hpp"

using namespace purikit;
using Catch::Matchers::WithinAbs;

namespace {

SymMatrix poly(const SymMatrix& x, double c0, double c1, double c2, double c3) {
  // c0 I + c1 X + c2 X^2 + c3 X^3 with long-double triple-loop products
  const Matrix x2 = oracle::naive_product(x.dense(), x.dense());
  const Matrix x3 = oracle::naive_product(x.dense(), x2);
  Matrix r(x.order());
  for (std::size_t i = 0; i < x.order(); ++i)
    for (std::size_t j = 0; j < x.order(); ++j)
      r(i, j) = (i == j ? c0 : 0.0) + c1 * x(i, j) + c2 * x2(i, j) + c3 * x3(i, j);
  return SymMatrix::symmetrized(r);
}

HamiltonianSpec spec_for(int m, int n, double gap, std::uint64_t seed) {
  HamiltonianSpec s;
  s.m = m;
  s.n_occ = n;
  s.gap = gap;
  s.seed = seed;
  return s;
}

SymMatrix rotated(const std::vector<double>& v, std::mt19937_64& rng) {
  return oracle::with_spectrum(v, oracle::random_rotation(v.size(), rng));
}

}  // namespace

TEST_CASE("McWeeny step") {
  std::vector<double> v(6, 0.0);
  v[1] = v[4] = 1.0;
  const SymMatrix p = SymMatrix::diagonal(v);
  CHECK(mcweeny_step(p) == p);

  const std::vector<double> w{0.9};
  CHECK_THAT(mcweeny_step(SymMatrix::diagonal(w))(0, 0), WithinAbs(0.972, 1e-15));

  std::mt19937_64 rng(41);
  const auto x = oracle::uniform_values(20, 0, 1, rng);
  const SymMatrix out = mcweeny_step(SymMatrix::diagonal(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK_THAT(out(i, i), WithinAbs(oracle::mcweeny(x[i]), 1e-13));
}

TEST_CASE("PMCP step") {
  std::vector<double> v(6, 0.0);
  v[1] = v[4] = 1.0;
  CHECK_THROWS_AS(pmcp_step(SymMatrix::diagonal(v)), DegenerateTraces);
  v[2] = 1e-17;
  CHECK_THROWS_AS(pmcp_step(SymMatrix::diagonal(v)), DegenerateTraces);

  const PmcpStep half = pmcp_step(SymMatrix::scaled_identity(8, 0.5));
  CHECK(half.c == 0.5);
  CHECK(half.branch == PmcpBranch::Low);
  CHECK(oracle::max_abs_diff(half.next.dense(), SymMatrix::scaled_identity(8, 0.5).dense()) <= 1e-15);

  std::mt19937_64 rng(42);
  for (auto [lo, hi, branch] : {std::tuple{0.0, 0.6, PmcpBranch::Low}, std::tuple{0.4, 1.0, PmcpBranch::High}}) {
    const auto x = oracle::uniform_values(30, lo, hi, rng);
    const PmcpStep s = pmcp_step(SymMatrix::diagonal(x));
    const double c = oracle::scalar_c(x);
    CHECK(s.branch == branch);
    CHECK_THAT(s.c, WithinAbs(c, 1e-13));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK_THAT(s.next(i, i), WithinAbs(oracle::pmcp(x[i], c), 1e-12));
  }
}

TEST_CASE("HPCP step") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = oracle::uniform_values(24, 0.0, 1.0, rng);
    const SymMatrix d = rotated(x, rng);
    const HpcpStep s = hpcp_step(d);
    CHECK(std::abs(linalg::trace(s.next) - linalg::trace(d)) <= 1e-9 * 24);

    // descent form D - grad L / 2 with gamma from the same c
    const SymMatrix descent = d - grad_lagrangian(d, compute_gamma(s.c)) * 0.5;
    CHECK(oracle::frobenius_diff(s.next.dense(), descent.dense()) <= 1e-12 * 24);

    // hole-particle symmetry: stepping I - D gives I - step(D)
    const SymMatrix i = SymMatrix::identity(24);
    const HpcpStep h = hpcp_step(i - d);
    CHECK(oracle::frobenius_diff(h.next.dense(), (i - s.next).dense()) <= 1e-12 * 24);
  }

  const auto x = oracle::uniform_values(20, 0.0, 1.0, rng);
  const HpcpStep s = hpcp_step(SymMatrix::diagonal(x));
  const double c = oracle::scalar_c(x);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK_THAT(s.next(i, i), WithinAbs(oracle::hpcp(x[i], c), 1e-12));
}

TEST_CASE("HPCP is the c-weighted blend of the particle and hole canonical steps") {
  std::mt19937_64 rng(44);
  for (auto [lo, hi] : {std::pair{0.0, 0.55}, std::pair{0.45, 1.0}}) {
    const auto x = oracle::uniform_values(16, lo, hi, rng);
    const SymMatrix d = rotated(x, rng);
    const SymMatrix y = SymMatrix::identity(16) - d;
    const double c = *compute_c(d, y);
    SymMatrix blend(16);
    if (c <= 0.5) {
      const SymMatrix particle = poly(d, 0.0, (1 - 2 * c) / (1 - c), (1 + c) / (1 - c), -1 / (1 - c));
      const SymMatrix hole = SymMatrix::identity(16) - poly(y, 0.0, -(1 - 2 * c) / c, (2 - c) / c, -1 / c);
      blend = particle * (1 - c) + hole * c;
    } else {
      const SymMatrix particle = poly(d, 0.0, 0.0, (1 + c) / c, -1 / c);
      const SymMatrix hole = SymMatrix::identity(16) - poly(y, 0.0, 0.0, (2 - c) / (1 - c), -1 / (1 - c));
      blend = particle * c + hole * (1 - c);
    }
    CHECK(oracle::frobenius_diff(blend.dense(), hpcp_step(d).next.dense()) <= 1e-12 * 16);
  }
}

TEST_CASE("configuration validation") {
  PurifierConfig cfg;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.tol = 1e-6;
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.max_iter = 10;
  cfg.method = Method::PMCP;
  cfg.step_length = 0.3;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.method = Method::HPCP;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("HPCP run on the occupation-0.1 test Hamiltonian") {
  const SymMatrix h = generate_hamiltonian(spec_for(100, 10, 0.1, 5));
  PurifierConfig cfg;
  const RunResult r = run_purification(h, 10, {}, cfg);
  REQUIRE(r.converged);
  CHECK(r.iterations >= 15);
  CHECK(r.iterations <= 35);
  CHECK(r.records.size() == static_cast<std::size_t>(r.iterations) + 1);
  CHECK(r.records.back().idempotency_error <= cfg.tol);
  for (const auto& rec : r.records) {
    CHECK(std::abs(rec.trace_d - 10) <= 1e-9 * 100);
    CHECK(rec.idempotency_error >= -1e-12);
  }
}

TEST_CASE("converged density matches the ground-state projector") {
  for (auto method : {Method::PMCP, Method::HPCP}) {
    for (auto sub : {Subspace::Particle, Subspace::Hole}) {
      const SymMatrix h = generate_hamiltonian(spec_for(60, 30, 1.0, 9));
      PurifierConfig cfg;
      cfg.method = method;
      cfg.subspace = sub;
      const RunResult r = run_purification(h, 30, {}, cfg);
      REQUIRE(r.converged);
      const GroundState gs = ground_state_oracle(h, 30);
      CHECK(oracle::frobenius_diff(r.final_d.dense(), gs.projector.dense()) <= 1e-4);
    }
  }
}

TEST_CASE("hole runs report particle-space diagnostics") {
  const SymMatrix h = generate_hamiltonian(spec_for(40, 7, 0.5, 10));
  PurifierConfig cfg;
  cfg.subspace = Subspace::Hole;
  const RunResult r = run_purification(h, 7, {}, cfg);
  REQUIRE(r.converged);
  CHECK_THAT(r.records.front().trace_d, WithinAbs(7.0, 1e-9));
  CHECK_THAT(r.records.back().energy, WithinAbs(linalg::trace_of_product(h, r.final_d), 1e-10));
}

TEST_CASE("an idempotent guess needs no iterations") {
  // two-level H: the particle guess is already the projector
  std::vector<double> eps(10, 1.0);
  std::fill(eps.begin(), eps.begin() + 5, -1.0);
  const SymMatrix h = SymMatrix::diagonal(eps);
  const RunResult r = run_purification(h, 5, {}, {});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK_FALSE(r.failure_reason);
}

TEST_CASE("iteration cap") {
  const SymMatrix h = generate_hamiltonian(spec_for(50, 25, 1e-7, 11));
  PurifierConfig cfg;
  cfg.max_iter = 2;
  const RunResult r = run_purification(h, 25, {}, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 2);
  CHECK(r.failure_reason == FailureReason::MaxIterations);
}

TEST_CASE("runaway is detected for a badly mixed guess") {
  const SymMatrix h = generate_hamiltonian(spec_for(100, 1, 1.0, 12));
  GuessConfig g;
  g.kind = GuessKind::MixedFixedAlpha;
  g.alpha = 0.5;
  const RunResult r = run_purification(h, 1, g, {});
  CHECK_FALSE(r.converged);
  CHECK(r.failure_reason == FailureReason::RunawayDetected);
}

TEST_CASE("two products per iteration") {
  const SymMatrix h = generate_hamiltonian(spec_for(40, 12, 0.2, 13));
  for (auto method : {Method::McWeeny, Method::PMCP, Method::HPCP}) {
    PurifierConfig cfg;
    cfg.method = method;
    cfg.record_trace = false;
    const GuessReport g = build_guess(h, 12, {});
    linalg::reset_multiply_count();
    const RunResult r = purify_from(g.matrix, 12, &h, cfg);
    CHECK(linalg::multiply_count() == 2u * static_cast<unsigned>(r.iterations));

    cfg.record_trace = true;
    linalg::reset_multiply_count();
    const RunResult t = purify_from(g.matrix, 12, &h, cfg);
    CHECK(t.iterations == r.iterations);
    CHECK(linalg::multiply_count() == 2u * static_cast<unsigned>(t.iterations) + 2u);
  }
}

TEST_CASE("eigenvalue recording") {
  const SymMatrix h = generate_hamiltonian(spec_for(20, 4, 0.5, 14));
  PurifierConfig cfg;
  cfg.record_eigenvalues = true;
  const RunResult r = run_purification(h, 4, {}, cfg);
  REQUIRE(r.converged);
  for (const auto& rec : r.records) CHECK(rec.eigenvalues.size() == 20);
  // eigenvalues follow the scalar map with the recorded c; the map is not
  // monotone, so compare as sorted sets
  for (std::size_t n = 0; n + 1 < r.records.size(); ++n) {
    std::vector<double> mapped;
    for (double x : r.records[n].eigenvalues) mapped.push_back(oracle::hpcp(x, r.records[n].c));
    std::sort(mapped.begin(), mapped.end());
    const auto& b = r.records[n + 1].eigenvalues;
    for (std::size_t k = 0; k < b.size(); ++k) CHECK_THAT(b[k], WithinAbs(mapped[k], 1e-9));
  }
}
