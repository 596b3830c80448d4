// purikit command-line tool: generate test Hamiltonians, purify, verify and
// run parameter sweeps. Exit codes: 0 ok, 1 usage, 2 non-convergence,
// 3 verification failure, 4 I/O or parse error. The last stdout line is
// always a RESULT summary.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "purikit/bench.hpp"
#include "purikit/config.hpp"
#include "purikit/errors.hpp"
#include "purikit/format.hpp"
#include "purikit/hamgen.hpp"
#include "purikit/lagrangian.hpp"
#include "purikit/linalg.hpp"
#include "purikit/matrix_market.hpp"
#include "purikit/purify.hpp"
#include "purikit/verify.hpp"

namespace {

using namespace purikit;

enum Exit { kOk = 0, kUsage = 1, kNoConvergence = 2, kVerifyFailed = 3, kIo = 4 };

struct Outcome {
  int code = kOk;
  std::string status = "ok";
  std::optional<int> p;
  std::optional<double> idem_err;
  std::optional<double> energy;
};

// An empty PURIKIT_SEED counts as unset.
std::uint64_t default_seed() {
  const char* env = std::getenv("PURIKIT_SEED");
  if (!env || !*env) return 1;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || end != text.data() + text.size())
    throw InvalidArgument("PURIKIT_SEED is not an unsigned integer: " + std::string(text));
  return seed;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

struct GenArgs {
  HamiltonianSpec spec;
  std::string basis = "diagonal";
  std::string out;
};

Outcome cmd_gen(GenArgs& a) {
  a.spec.basis = a.basis == "orthogonal" ? Basis::RandomOrthogonal : Basis::Diagonal;
  const SymMatrix h = generate_hamiltonian(a.spec);
  std::vector<std::string> comments;
  std::string kv = a.spec.to_key_values();
  for (std::size_t pos = 0; pos <= kv.size();) {
    const auto nl = kv.find('\n', pos);
    comments.push_back(kv.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  save_matrix(h, a.out, comments);
  std::cout << "wrote " << a.spec.m << "x" << a.spec.m << " Hamiltonian to " << a.out << '\n';
  Outcome o;
  o.status = "generated";
  return o;
}

struct PurifyArgs {
  std::string in;
  int n = 0;
  std::string method = "hpcp";
  std::string subspace = "particle";
  std::string guess = "pmcp";
  double alpha = 0.5;
  double delta = 2.0 / 3.0;
  double tol = 1e-6;
  int max_iter = 100;
  std::string trace;
  bool trace_eigenvalues = false;
  std::string curves;
  std::string out;
};

Outcome cmd_purify(const PurifyArgs& a) {
  const SymMatrix h = load_matrix(a.in);

  GuessConfig g;
  g.alpha = a.alpha;
  g.delta = a.delta;
  if (a.guess == "pmcp") {
    g.kind = GuessKind::ParticlePMCP;
  } else if (a.guess == "mixed") {
    g.kind = GuessKind::MixedFixedAlpha;
  } else {
    g.kind = GuessKind::MixedOptimizedAlpha;
  }

  PurifierConfig pc;
  pc.method = a.method == "mcweeny" ? Method::McWeeny : a.method == "pmcp" ? Method::PMCP : Method::HPCP;
  pc.subspace = a.subspace == "hole" ? Subspace::Hole : Subspace::Particle;
  pc.tol = a.tol;
  pc.max_iter = a.max_iter;
  pc.record_trace = true;
  pc.record_eigenvalues = a.trace_eigenvalues;

  const RunResult r = run_purification(h, a.n, g, pc);
  if (!r.guess.warning.empty()) std::cerr << "warning: " << r.guess.warning << '\n';
  if (r.guess.alpha_used) std::cout << "alpha " << format_double(*r.guess.alpha_used) << '\n';

  if (!a.trace.empty()) {
    auto os = open_out(a.trace);
    write_trace_csv(os, r, {"purikit trace", "input " + a.in, "method " + a.method,
                            "subspace " + a.subspace, "guess " + a.guess,
                            "n_occ " + std::to_string(a.n)});
  }
  if (!a.curves.empty()) {
    auto os = open_out(a.curves);
    write_lagrangian_curves(os, r);
  }
  if (!a.out.empty()) save_matrix(r.final_d, a.out);

  Outcome o;
  o.p = r.iterations;
  o.idem_err = r.records.empty() ? idempotency_error(r.final_d) : r.records.back().idempotency_error;
  o.energy = linalg::trace_of_product(h, r.final_d);
  if (r.converged) {
    o.status = "converged";
    std::cout << "converged in " << r.iterations << " iterations\n";
  } else {
    o.code = kNoConvergence;
    o.status = r.failure_reason ? std::string(to_string(*r.failure_reason)) : "failed";
    std::cout << "not converged after " << r.iterations << " iterations (" << o.status << ")\n";
  }
  return o;
}

struct VerifyArgs {
  std::string in;
  std::string hamiltonian;
  int n = 0;
  double threshold = 1e-6;
  double energy_tol = 1e-5;
};

Outcome cmd_verify(const VerifyArgs& a) {
  const SymMatrix d = load_matrix(a.in);
  Outcome o;
  o.idem_err = idempotency_error(d);
  VerificationReport rep;
  try {
    if (a.hamiltonian.empty()) {
      rep = verify(d, a.n, a.threshold);
    } else {
      const SymMatrix h = load_matrix(a.hamiltonian);
      rep = verify(d, a.n, h, a.threshold, a.energy_tol);
      o.energy = linalg::trace_of_product(h, d);
    }
  } catch (const NonPhysicalState& e) {
    std::cout << "non-physical state: " << e.what() << '\n';
    o.code = kVerifyFailed;
    o.status = "verification_failed";
    return o;
  }
  std::cout << "norm_trace_gap " << format_double(rep.norm_trace_gap) << '\n'
            << "norm_occupancy_gap " << format_double(rep.norm_occupancy_gap) << '\n'
            << "norm_occupancy_gap_literal " << format_double(rep.norm_occupancy_gap_literal) << '\n'
            << "spectrum_gap " << format_double(rep.spectrum_gap) << '\n';
  if (rep.oracle_projector_distance)
    std::cout << "oracle_projector_distance " << format_double(*rep.oracle_projector_distance) << '\n';
  if (rep.oracle_energy_gap)
    std::cout << "oracle_energy_gap " << format_double(*rep.oracle_energy_gap) << '\n';
  o.status = rep.passed ? "verified" : "verification_failed";
  o.code = rep.passed ? kOk : kVerifyFailed;
  return o;
}

struct BatchArgs {
  std::string config;
  std::string out;
  int jobs = 0;
};

SweepConfig load_sweep(const BatchArgs& a) {
  const KeyValues kv = KeyValues::load(a.config);
  const bool has_seed = kv.get("seed").has_value();
  SweepConfig cfg = SweepConfig::from_key_values(kv);
  if (!has_seed) cfg.base_seed = default_seed();
  if (a.jobs > 0) cfg.jobs = a.jobs;
  return cfg;
}

Outcome cmd_sweep(const BatchArgs& a) {
  const SweepConfig cfg = load_sweep(a);
  const SweepResult r = run_sweep(cfg);
  auto os = open_out(a.out);
  write_sweep_csv(os, cfg, r, utc_timestamp());
  int fails = 0;
  for (const auto& c : r.cells) fails += c.n_fail;
  std::cout << r.cells.size() << " cells written to " << a.out << ", " << fails << " failed runs\n";
  Outcome o;
  o.status = "completed";
  return o;
}

Outcome cmd_gapscan(const BatchArgs& a) {
  const SweepConfig cfg = load_sweep(a);
  std::vector<GapFit> fits;
  Outcome o;
  o.status = "completed";
  for (double theta : cfg.thetas) {
    try {
      for (auto& f : gap_scan(theta, cfg.gaps, cfg)) fits.push_back(std::move(f));
    } catch (const FitError& e) {
      std::cerr << "fit error: " << e.what() << '\n';
      o.code = kNoConvergence;
      o.status = "fit_error";
    }
  }
  auto os = open_out(a.out);
  write_gapscan_csv(os, cfg, fits, utc_timestamp());
  for (const auto& f : fits)
    std::cout << "theta " << format_double(f.theta) << ' ' << f.method << " intercept "
              << format_double(f.fit.intercept) << " slope " << format_double(f.fit.slope) << " r2 "
              << format_double(f.fit.r2) << '\n';
  return o;
}

Outcome cmd_profile(const BatchArgs& a) {
  const SweepConfig cfg = load_sweep(a);
  const ProfileResult r = profile_grid(cfg);
  auto os = open_out(a.out);
  write_profile_csv(os, cfg, r, utc_timestamp());
  std::cout << r.rows.size() << " rows written to " << a.out << '\n';
  Outcome o;
  o.status = "completed";
  if (!r.failures.empty()) {
    for (const auto& f : r.failures) std::cerr << "run failed: " << f << '\n';
    o.code = kNoConvergence;
    o.status = "run_failed";
  }
  return o;
}

int finish(const Outcome& o) {
  std::cout << result_line(o.status, o.p, o.idem_err, o.energy) << std::endl;
  return o.code;
}

int fail(int code, const std::string& status, const std::string& message) {
  std::cerr << "purikit: " << message << '\n';
  Outcome o;
  o.code = code;
  o.status = status;
  return finish(o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Density-matrix purification toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  gen.spec.seed = 1;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random gapped test Hamiltonian");
  gen_cmd->add_option("--m", gen.spec.m, "Matrix order")->capture_default_str();
  gen_cmd->add_option("--n", gen.spec.n_occ, "Occupied states N")->capture_default_str();
  gen_cmd->add_option("--gap", gen.spec.gap, "Frontier gap")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "RNG seed (default: PURIKIT_SEED or 1)");
  gen_cmd->add_option("--range-low", gen.spec.range_low)->capture_default_str();
  gen_cmd->add_option("--range-high", gen.spec.range_high)->capture_default_str();
  gen_cmd->add_option("--basis", gen.basis)
      ->check(CLI::IsMember({"diagonal", "orthogonal"}))
      ->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.out, "Matrix Market output")->required();

  PurifyArgs pur;
  auto* pur_cmd = app.add_subcommand("purify", "Purify a Hamiltonian's density matrix");
  pur_cmd->add_option("-i,--input", pur.in, "Hamiltonian (Matrix Market)")->required();
  pur_cmd->add_option("--n", pur.n, "Occupied states N")->required();
  pur_cmd->add_option("--method", pur.method)
      ->check(CLI::IsMember({"mcweeny", "pmcp", "hpcp"}))
      ->capture_default_str();
  pur_cmd->add_option("--subspace", pur.subspace)
      ->check(CLI::IsMember({"particle", "hole"}))
      ->capture_default_str();
  pur_cmd->add_option("--guess", pur.guess)
      ->check(CLI::IsMember({"pmcp", "mixed", "mixed-opt"}))
      ->capture_default_str();
  pur_cmd->add_option("--alpha", pur.alpha, "Mixing weight for --guess mixed")->capture_default_str();
  pur_cmd->add_option("--delta", pur.delta, "Target parameter for --guess mixed-opt")
      ->capture_default_str();
  pur_cmd->add_option("--tol", pur.tol, "Stop once Tr[D(I-D)] <= tol")->capture_default_str();
  pur_cmd->add_option("--max-iter", pur.max_iter)->capture_default_str();
  pur_cmd->add_option("--trace", pur.trace, "Per-iteration CSV");
  pur_cmd->add_flag("--trace-eigenvalues", pur.trace_eigenvalues,
                    "Add the spectrum of every iterate to --trace");
  pur_cmd->add_option("--curves", pur.curves, "Scalar Lagrangian curves CSV");
  pur_cmd->add_option("-o,--output", pur.out, "Converged density matrix (Matrix Market)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "Check idempotency and occupancy of a density matrix");
  ver_cmd->add_option("-i,--input", ver.in, "Density matrix (Matrix Market)")->required();
  ver_cmd->add_option("--hamiltonian", ver.hamiltonian, "Hamiltonian for the oracle comparison");
  ver_cmd->add_option("--n", ver.n, "Occupied states N")->required();
  ver_cmd->add_option("--threshold", ver.threshold)->capture_default_str();
  ver_cmd->add_option("--energy-tol", ver.energy_tol)->capture_default_str();

  BatchArgs sweep, scan, prof;
  auto add_batch = [&](const char* name, const char* help, BatchArgs& b, bool jobs) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", b.config, "key=value configuration")->required();
    cmd->add_option("-o,--output", b.out, "CSV output")->required();
    if (jobs) cmd->add_option("--jobs", b.jobs, "Worker threads (overrides config)");
    return cmd;
  };
  auto* sweep_cmd = add_batch("sweep", "Average iteration counts over a theta x gap grid", sweep, true);
  auto* scan_cmd = add_batch("gapscan", "Fit iteration counts against ln(1/gap)", scan, true);
  auto* prof_cmd = add_batch("profile", "Per-iteration energy profiles", prof, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return finish({kOk, "help", {}, {}, {}});
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (const auto nl = msg.find('\n'); nl != std::string::npos) msg.resize(nl);
    return fail(kUsage, "usage_error", msg);
  }

  try {
    if (!gen_cmd->get_option("--seed")->count()) gen.spec.seed = default_seed();
    if (*gen_cmd) return finish(cmd_gen(gen));
    if (*pur_cmd) return finish(cmd_purify(pur));
    if (*ver_cmd) return finish(cmd_verify(ver));
    if (*sweep_cmd) return finish(cmd_sweep(sweep));
    if (*scan_cmd) return finish(cmd_gapscan(scan));
    if (*prof_cmd) return finish(cmd_profile(prof));
  } catch (const ParseError& e) {
    return fail(kIo, "parse_error", e.what());
  } catch (const IoError& e) {
    return fail(kIo, "io_error", e.what());
  } catch (const Error& e) {
    return fail(kUsage, "error", e.what());
  }
  return fail(kUsage, "usage_error", "no subcommand");
}
