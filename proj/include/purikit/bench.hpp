#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "purikit/guess.hpp"
#include "purikit/hamgen.hpp"
#include "purikit/purify.hpp"

namespace purikit {

class KeyValues;

/// A labeled (guess, purifier) pair. Known labels:
///   pmcp, hpcp        particle guess
///   pmcp+, hpcp+      mixed guess with optimized alpha
///   pmcp-mix, hpcp-mix  mixed guess with fixed alpha
///   mcweeny           particle guess, McWeeny steps
struct MethodVariant {
  std::string label;
  GuessConfig guess;
  PurifierConfig purifier;
};

/// Throws InvalidArgument for unknown labels.
MethodVariant method_variant(const std::string& label, double alpha = 0.5, double delta = 2.0 / 3.0,
                             double tol = 1e-6, int max_iter = 100);

struct SweepConfig {
  std::vector<double> thetas;
  std::vector<double> gaps;
  int samples = 32;
  int m = 100;
  std::vector<MethodVariant> methods;
  std::uint64_t base_seed = 1;
  int jobs = 1;
  double range_low = -2.5;
  double range_high = 2.5;
  Basis basis = Basis::Diagonal;
  /// Echoed in provenance; `methods` are built from them by from_key_values.
  double tol = 1e-6;
  int max_iter = 100;
  double alpha = 0.5;
  double delta = 2.0 / 3.0;

  void validate() const;

  /// theta in {0.01, 0.05, 0.1, ..., 0.95, 0.99}, gap in {1, 1e-1, ..., 1e-7},
  /// 32 samples, M = 100, methods pmcp, hpcp, pmcp+, hpcp+.
  static SweepConfig reference_grid();

  /// Keys: preset (reference-grid), thetas, gaps, samples, m, methods, seed, jobs,
  /// range_low, range_high, basis, tol, max_iter, alpha, delta. Unknown keys
  /// throw ParseError.
  static SweepConfig from_key_values(const KeyValues& kv);
  /// Everything but `jobs`, which never changes results.
  std::string to_key_values() const;
};

/// Occupancy for a grid theta: round(theta M) clamped to [1, M - 1].
int occupancy_for(double theta, int m);

/// Hamiltonian recipe of sample k in cell (ti, gi); the seed depends on the
/// indices only.
HamiltonianSpec sample_spec(const SweepConfig& cfg, std::size_t ti, std::size_t gi, std::size_t k);

/// Welford accumulator; stddev is the sample (n - 1) estimate, 0 for n < 2.
class RunningStats {
 public:
  void add(double x) noexcept;
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept;
  double stddev() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct CellRecord {
  double theta = 0.0;
  double gap = 0.0;
  std::string method;
  int n_occ = 0;
  double p_mean = 0.0;  ///< NaN when nothing converged
  double p_std = 0.0;
  int n_conv = 0;
  int n_fail = 0;
  std::map<std::string, int> failures;  ///< reason -> count
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept. Throws FitError for fewer
/// than two points or constant x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct GapFit {
  double theta = 0.0;
  std::string method;
  LineFit fit;
};

struct SweepResult {
  std::vector<CellRecord> cells;  ///< theta-major, then gap, then method
  /// Fits of p_mean against ln(1/gap), present when the gap list qualifies
  /// for a scan and at least two cells converged.
  std::vector<GapFit> fits;
};

/// Deterministic for a fixed config regardless of `jobs`.
SweepResult run_sweep(const SweepConfig& cfg);

/// Throws InvalidArgument unless there are >= 3 gaps spanning >= 2 decades.
void check_scan_gaps(const std::vector<double>& gaps);

/// Sweeps one theta over `gaps` and fits every method. Throws FitError when a
/// method has fewer than two converged cells.
std::vector<GapFit> gap_scan(double theta, const std::vector<double>& gaps, const SweepConfig& cfg);

struct ProfileRow {
  double theta = 0.0;
  double gap = 0.0;
  std::string method;
  int n = 0;
  double energy = 0.0;
  double energy_gap_to_oracle = 0.0;  ///< E_n - E_oracle
  double trace_err = 0.0;             ///< Tr D_n - N
  double idem_err = 0.0;              ///< Tr[D_n Dbar_n]
  double c = 0.0;                     ///< NaN once undefined
  double gamma = 0.0;
};

struct ProfileResult {
  std::vector<ProfileRow> rows;
  double oracle_energy = 0.0;
  std::vector<std::string> failures;  ///< "<method> theta=<t> gap=<g>: <reason>"
};

/// Every iterate (n = 0 .. p) of each method on sample 0 of the (theta, gap)
/// cell; E_oracle comes from ground_state_oracle.
ProfileResult convergence_profile(double theta, double gap, const SweepConfig& cfg);

/// Profiles sample 0 of every grid cell of `cfg`, seeded like run_sweep.
/// `oracle_energy` is left at its default; each row carries its own gap.
ProfileResult profile_grid(const SweepConfig& cfg);

/// CSV writers. Each file opens with `#` provenance lines (a `# generated`
/// timestamp line, then the config echo) followed by a fixed header.
void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& r,
                     const std::string& timestamp);
void write_gapscan_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<GapFit>& fits,
                       const std::string& timestamp);
void write_profile_csv(std::ostream& os, const SweepConfig& cfg, const ProfileResult& r,
                       const std::string& timestamp);

/// Full IterationRecord stream: n,trace_d,idem_err,c,gamma,d,energy,omega,
/// lagrangian,grad_norm, then eig_0.. columns when eigenvalues were recorded.
void write_trace_csv(std::ostream& os, const RunResult& r, const std::vector<std::string>& comments);

/// Scalar Lagrangian (x^2 - x)^2 - gamma (3x^2 - 2x^3) and its slope on
/// `points` samples of [x_lo, x_hi], one block per iteration with a defined
/// gamma. Columns n,gamma,x,lagrangian,slope.
void write_lagrangian_curves(std::ostream& os, const RunResult& r, double x_lo = -0.25,
                             double x_hi = 1.25, int points = 151);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace purikit
