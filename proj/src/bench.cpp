#include "purikit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "purikit/config.hpp"
#include "purikit/errors.hpp"
#include "purikit/format.hpp"
#include "purikit/linalg.hpp"
#include "purikit/random.hpp"
#include "purikit/verify.hpp"

namespace purikit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += xs[i];
  }
  return out;
}

std::string num(double x) { return x == x ? format_double(x) : "na"; }

}  // namespace

MethodVariant method_variant(const std::string& label, double alpha, double delta, double tol,
                             int max_iter) {
  MethodVariant v;
  v.label = label;
  v.guess.alpha = alpha;
  v.guess.delta = delta;
  v.purifier.tol = tol;
  v.purifier.max_iter = max_iter;
  v.purifier.record_trace = false;

  std::string base = label;
  if (label.ends_with("+")) {
    v.guess.kind = GuessKind::MixedOptimizedAlpha;
    base = label.substr(0, label.size() - 1);
  } else if (label.ends_with("-mix")) {
    v.guess.kind = GuessKind::MixedFixedAlpha;
    base = label.substr(0, label.size() - 4);
  } else {
    v.guess.kind = GuessKind::ParticlePMCP;
  }

  if (base == "pmcp") {
    v.purifier.method = Method::PMCP;
  } else if (base == "hpcp") {
    v.purifier.method = Method::HPCP;
  } else if (base == "mcweeny" && label == base) {
    v.purifier.method = Method::McWeeny;
  } else {
    throw InvalidArgument("unknown method variant '" + label + "'");
  }
  v.guess.validate();
  v.purifier.validate();
  return v;
}

void SweepConfig::validate() const {
  if (thetas.empty()) throw InvalidArgument("sweep needs at least one theta");
  if (gaps.empty()) throw InvalidArgument("sweep needs at least one gap");
  if (methods.empty()) throw InvalidArgument("sweep needs at least one method");
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  if (m < 2) throw InvalidArgument("m must be >= 2");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  for (double t : thetas)
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("theta must lie in (0,1)");
  for (double g : gaps)
    if (!(g > 0.0)) throw InvalidArgument("gaps must be positive");
}

SweepConfig SweepConfig::reference_grid() {
  SweepConfig cfg;
  cfg.thetas = {0.01};
  for (int i = 1; i <= 19; ++i) cfg.thetas.push_back(i / 20.0);
  cfg.thetas.push_back(0.99);
  cfg.gaps = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  for (const char* label : {"pmcp", "hpcp", "pmcp+", "hpcp+"}) cfg.methods.push_back(method_variant(label));
  return cfg;
}

SweepConfig SweepConfig::from_key_values(const KeyValues& kv) {
  const std::string preset = kv.get_string("preset", "");
  SweepConfig cfg;
  if (preset == "reference-grid") {
    cfg = reference_grid();
  } else if (!preset.empty()) {
    throw InvalidArgument("unknown preset '" + preset + "'");
  }
  cfg.thetas = kv.get_doubles("thetas", cfg.thetas);
  cfg.gaps = kv.get_doubles("gaps", cfg.gaps);
  cfg.samples = static_cast<int>(kv.get_int("samples", cfg.samples));
  cfg.m = static_cast<int>(kv.get_int("m", cfg.m));
  cfg.base_seed = kv.get_uint("seed", cfg.base_seed);
  cfg.jobs = static_cast<int>(kv.get_int("jobs", cfg.jobs));
  cfg.range_low = kv.get_double("range_low", cfg.range_low);
  cfg.range_high = kv.get_double("range_high", cfg.range_high);
  const std::string basis = kv.get_string("basis", std::string(to_string(cfg.basis)));
  if (basis == "diagonal") {
    cfg.basis = Basis::Diagonal;
  } else if (basis == "orthogonal") {
    cfg.basis = Basis::RandomOrthogonal;
  } else {
    throw InvalidArgument("unknown basis '" + basis + "'");
  }
  cfg.tol = kv.get_double("tol", cfg.tol);
  cfg.max_iter = static_cast<int>(kv.get_int("max_iter", cfg.max_iter));
  cfg.alpha = kv.get_double("alpha", cfg.alpha);
  cfg.delta = kv.get_double("delta", cfg.delta);

  std::vector<std::string> labels;
  for (const auto& mv : cfg.methods) labels.push_back(mv.label);
  if (labels.empty()) labels = {"pmcp", "hpcp", "pmcp+", "hpcp+"};
  labels = kv.get_strings("methods", labels);
  cfg.methods.clear();
  for (const auto& l : labels)
    cfg.methods.push_back(method_variant(l, cfg.alpha, cfg.delta, cfg.tol, cfg.max_iter));

  if (const auto unused = kv.unused_keys(); !unused.empty()) {
    for (const auto& e : kv.entries())
      if (e.key == unused.front()) throw ParseError(e.line, "unknown key '" + e.key + "'");
  }
  cfg.validate();
  return cfg;
}

std::string SweepConfig::to_key_values() const {
  std::vector<std::string> labels;
  for (const auto& mv : methods) labels.push_back(mv.label);
  std::ostringstream os;
  os << "thetas=" << join(thetas) << "\ngaps=" << join(gaps) << "\nsamples=" << samples
     << "\nm=" << m << "\nmethods=" << join(labels) << "\nseed=" << base_seed
     << "\nrange_low=" << format_double(range_low) << "\nrange_high=" << format_double(range_high)
     << "\nbasis=" << to_string(basis) << "\ntol=" << format_double(tol) << "\nmax_iter=" << max_iter
     << "\nalpha=" << format_double(alpha) << "\ndelta=" << format_double(delta);
  return os.str();
}

int occupancy_for(double theta, int m) {
  const auto n = static_cast<int>(std::lround(theta * m));
  return std::clamp(n, 1, m - 1);
}

HamiltonianSpec sample_spec(const SweepConfig& cfg, std::size_t ti, std::size_t gi, std::size_t k) {
  HamiltonianSpec spec;
  spec.m = cfg.m;
  spec.n_occ = occupancy_for(cfg.thetas.at(ti), cfg.m);
  spec.gap = cfg.gaps.at(gi);
  spec.range_low = cfg.range_low;
  spec.range_high = cfg.range_high;
  spec.basis = cfg.basis;
  spec.seed = derive_seed(cfg.base_seed, {ti, gi, k});
  return spec;
}

void RunningStats::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::mean() const noexcept { return n_ ? mean_ : kNaN; }

double RunningStats::stddev() const noexcept {
  return n_ < 2 ? 0.0 : std::sqrt(m2_ / static_cast<double>(n_ - 1));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionMismatch("fit_line: x and y lengths differ");
  if (x.size() < 2) throw FitError("need at least two points to fit a line");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("all x values coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = x.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

namespace {

struct Outcome {
  bool converged = false;
  int iterations = 0;
  std::string failure;
};

Outcome run_one(const SymMatrix& h, int n_occ, const MethodVariant& mv) {
  Outcome o;
  try {
    const RunResult r = run_purification(h, n_occ, mv.guess, mv.purifier);
    o.converged = r.converged;
    o.iterations = r.iterations;
    if (!r.converged) o.failure = r.failure_reason ? std::string(to_string(*r.failure_reason)) : "unknown";
  } catch (const Error&) {
    o.failure = "error";
  }
  return o;
}

bool scan_gaps_ok(const std::vector<double>& gaps) {
  if (gaps.size() < 3) return false;
  const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
  return *hi / *lo >= 100.0 * (1.0 - 1e-12);
}

std::vector<GapFit> fit_cells(const SweepConfig& cfg, const std::vector<CellRecord>& cells,
                              bool strict) {
  std::vector<GapFit> fits;
  const std::size_t nm = cfg.methods.size();
  const std::size_t ng = cfg.gaps.size();
  for (std::size_t ti = 0; ti < cfg.thetas.size(); ++ti) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      std::vector<double> x, y;
      for (std::size_t gi = 0; gi < ng; ++gi) {
        const CellRecord& c = cells[(ti * ng + gi) * nm + mi];
        if (c.n_conv == 0) continue;
        x.push_back(std::log(1.0 / c.gap));
        y.push_back(c.p_mean);
      }
      if (x.size() < 2) {
        if (strict)
          throw FitError(cfg.methods[mi].label + ": fewer than two converged cells at theta " +
                         format_double(cfg.thetas[ti]));
        continue;
      }
      fits.push_back({cfg.thetas[ti], cfg.methods[mi].label, fit_line(x, y)});
    }
  }
  return fits;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const std::size_t nt = cfg.thetas.size();
  const std::size_t ng = cfg.gaps.size();
  const std::size_t nm = cfg.methods.size();
  const auto ns = static_cast<std::size_t>(cfg.samples);
  const std::size_t tasks = nt * ng * ns;

  // outcomes[task * nm + method]; filled by index, so scheduling is irrelevant
  std::vector<Outcome> outcomes(tasks * nm);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) num_threads(cfg.jobs)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(tasks); ++t) {
    const auto task = static_cast<std::size_t>(t);
    const std::size_t k = task % ns;
    const std::size_t gi = (task / ns) % ng;
    const std::size_t ti = task / (ns * ng);
    try {
      const HamiltonianSpec spec = sample_spec(cfg, ti, gi, k);
      const SymMatrix h = generate_hamiltonian(spec);
      for (std::size_t mi = 0; mi < nm; ++mi)
        outcomes[task * nm + mi] = run_one(h, spec.n_occ, cfg.methods[mi]);
    } catch (...) {
#pragma omp critical(purikit_sweep_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult result;
  result.cells.reserve(nt * ng * nm);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t gi = 0; gi < ng; ++gi) {
      for (std::size_t mi = 0; mi < nm; ++mi) {
        CellRecord c;
        c.theta = cfg.thetas[ti];
        c.gap = cfg.gaps[gi];
        c.method = cfg.methods[mi].label;
        c.n_occ = occupancy_for(c.theta, cfg.m);
        RunningStats stats;
        for (std::size_t k = 0; k < ns; ++k) {
          const Outcome& o = outcomes[((ti * ng + gi) * ns + k) * nm + mi];
          if (o.converged) {
            stats.add(o.iterations);
          } else {
            ++c.failures[o.failure];
          }
        }
        c.n_conv = static_cast<int>(stats.count());
        c.n_fail = cfg.samples - c.n_conv;
        c.p_mean = stats.mean();
        c.p_std = stats.stddev();
        result.cells.push_back(std::move(c));
      }
    }
  }
  if (scan_gaps_ok(cfg.gaps)) result.fits = fit_cells(cfg, result.cells, false);
  return result;
}

void check_scan_gaps(const std::vector<double>& gaps) {
  for (double g : gaps)
    if (!(g > 0.0)) throw InvalidArgument("gaps must be positive");
  if (!scan_gaps_ok(gaps))
    throw InvalidArgument("a gap scan needs at least 3 gaps spanning at least 2 decades");
}

std::vector<GapFit> gap_scan(double theta, const std::vector<double>& gaps, const SweepConfig& cfg) {
  check_scan_gaps(gaps);
  SweepConfig one = cfg;
  one.thetas = {theta};
  one.gaps = gaps;
  const SweepResult r = run_sweep(one);
  return fit_cells(one, r.cells, true);
}

namespace {

void profile_cell(const SweepConfig& cfg, std::size_t ti, std::size_t gi, ProfileResult& out) {
  const HamiltonianSpec spec = sample_spec(cfg, ti, gi, 0);
  const SymMatrix h = generate_hamiltonian(spec);
  const double e_oracle = ground_state_oracle(h, spec.n_occ).energy;
  out.oracle_energy = e_oracle;
  for (const auto& mv : cfg.methods) {
    PurifierConfig pc = mv.purifier;
    pc.record_trace = true;
    RunResult r;
    try {
      r = run_purification(h, spec.n_occ, mv.guess, pc);
    } catch (const Error& e) {
      out.failures.push_back(mv.label + " theta=" + format_double(cfg.thetas[ti]) +
                             " gap=" + format_double(spec.gap) + ": " + e.what());
      continue;
    }
    if (!r.converged)
      out.failures.push_back(mv.label + " theta=" + format_double(cfg.thetas[ti]) +
                             " gap=" + format_double(spec.gap) + ": " +
                             std::string(r.failure_reason ? to_string(*r.failure_reason) : "unknown"));
    for (const auto& rec : r.records) {
      ProfileRow row;
      row.theta = cfg.thetas[ti];
      row.gap = spec.gap;
      row.method = mv.label;
      row.n = rec.n;
      row.energy = rec.energy;
      row.energy_gap_to_oracle = rec.energy - e_oracle;
      row.trace_err = rec.trace_d - spec.n_occ;
      row.idem_err = rec.idempotency_error;
      row.c = rec.c;
      row.gamma = rec.gamma;
      out.rows.push_back(std::move(row));
    }
  }
}

void provenance(std::ostream& os, const char* kind, const SweepConfig& cfg,
                const std::string& timestamp) {
  os << "# purikit " << kind << "\n# generated " << timestamp << '\n';
  std::istringstream kv(cfg.to_key_values());
  for (std::string line; std::getline(kv, line);) os << "# " << line << '\n';
}

}  // namespace

ProfileResult convergence_profile(double theta, double gap, const SweepConfig& cfg) {
  SweepConfig one = cfg;
  one.thetas = {theta};
  one.gaps = {gap};
  one.validate();
  ProfileResult out;
  profile_cell(one, 0, 0, out);
  return out;
}

ProfileResult profile_grid(const SweepConfig& cfg) {
  cfg.validate();
  ProfileResult out;
  for (std::size_t ti = 0; ti < cfg.thetas.size(); ++ti)
    for (std::size_t gi = 0; gi < cfg.gaps.size(); ++gi) profile_cell(cfg, ti, gi, out);
  out.oracle_energy = kNaN;
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& r,
                     const std::string& timestamp) {
  provenance(os, "sweep", cfg, timestamp);
  for (const auto& c : r.cells) {
    for (const auto& [reason, count] : c.failures)
      os << "# failures theta=" << format_double(c.theta) << " gap=" << format_double(c.gap)
         << " method=" << c.method << ' ' << reason << '=' << count << '\n';
  }
  os << "theta,gap,method,p_mean,p_std,n_conv,n_fail\n";
  for (const auto& c : r.cells)
    os << format_double(c.theta) << ',' << format_double(c.gap) << ',' << c.method << ','
       << num(c.p_mean) << ',' << num(c.p_std) << ',' << c.n_conv << ',' << c.n_fail << '\n';
}

void write_gapscan_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<GapFit>& fits,
                       const std::string& timestamp) {
  provenance(os, "gapscan", cfg, timestamp);
  os << "theta,method,slope,intercept,r2\n";
  for (const auto& f : fits)
    os << format_double(f.theta) << ',' << f.method << ',' << format_double(f.fit.slope) << ','
       << format_double(f.fit.intercept) << ',' << format_double(f.fit.r2) << '\n';
}

void write_profile_csv(std::ostream& os, const SweepConfig& cfg, const ProfileResult& r,
                       const std::string& timestamp) {
  provenance(os, "profile", cfg, timestamp);
  for (const auto& f : r.failures) os << "# failure " << f << '\n';
  os << "theta,gap,method,n,energy,energy_gap_to_oracle,trace_err,idem_err,c,gamma\n";
  for (const auto& row : r.rows)
    os << format_double(row.theta) << ',' << format_double(row.gap) << ',' << row.method << ','
       << row.n << ',' << num(row.energy) << ',' << num(row.energy_gap_to_oracle) << ','
       << num(row.trace_err) << ',' << num(row.idem_err) << ',' << num(row.c) << ','
       << num(row.gamma) << '\n';
}

void write_trace_csv(std::ostream& os, const RunResult& r, const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  std::size_t n_eig = 0;
  for (const auto& rec : r.records) n_eig = std::max(n_eig, rec.eigenvalues.size());
  os << "n,trace_d,idem_err,c,gamma,d,energy,omega,lagrangian,grad_norm";
  for (std::size_t k = 0; k < n_eig; ++k) os << ",eig_" << k;
  os << '\n';
  for (const auto& rec : r.records) {
    os << rec.n << ',' << num(rec.trace_d) << ',' << num(rec.idempotency_error) << ',' << num(rec.c)
       << ',' << num(rec.gamma) << ',' << num(rec.d) << ',' << num(rec.energy) << ','
       << num(rec.omega) << ',' << num(rec.lagrangian) << ',' << num(rec.grad_norm);
    for (std::size_t k = 0; k < n_eig; ++k)
      os << ',' << (k < rec.eigenvalues.size() ? num(rec.eigenvalues[k]) : "na");
    os << '\n';
  }
}

void write_lagrangian_curves(std::ostream& os, const RunResult& r, double x_lo, double x_hi,
                             int points) {
  if (points < 2) throw InvalidArgument("need at least two curve points");
  os << "# scalar Lagrangian L(x) = (x^2 - x)^2 - gamma (3x^2 - 2x^3)\n"
     << "# the constant +gamma*N term is omitted; curve shapes are unaffected\n"
     << "n,gamma,x,lagrangian,slope\n";
  for (const auto& rec : r.records) {
    if (rec.gamma != rec.gamma) continue;
    for (int i = 0; i < points; ++i) {
      const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
      os << rec.n << ',' << format_double(rec.gamma) << ',' << format_double(x) << ','
         << format_double(scalar_lagrangian(x, rec.gamma)) << ','
         << format_double(scalar_lagrangian_slope(x, rec.gamma)) << '\n';
    }
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace purikit
