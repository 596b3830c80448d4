#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "purikit/format.hpp"
#include "purikit/matrix_market.hpp"
#include "purikit/purify.hpp"

namespace fs = std::filesystem;
using namespace purikit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;

namespace {

struct Run {
  int code = -1;
  std::string out;

  std::string last_line() const {
    std::string s = out;
    while (!s.empty() && s.back() == '\n') s.pop_back();
    const auto nl = s.rfind('\n');
    return nl == std::string::npos ? s : s.substr(nl + 1);
  }
};

Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PURIKIT_CLI_PATH + "\" " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (const std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string without_generated(const std::string& csv) {
  std::istringstream is(csv);
  std::string out;
  for (std::string line; std::getline(is, line);)
    if (line.rfind("# generated", 0) != 0) out += line + '\n';
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("purikit_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("RESULT line format") {
  CHECK(result_line("converged", 12, 1e-7, -3.5) ==
        "RESULT status=converged p=12 idem_err=9.9999999999999995e-08 energy=-3.5000000000000000e+00");
  CHECK(result_line("generated", std::nullopt, std::nullopt, std::nullopt) ==
        "RESULT status=generated p=na idem_err=na energy=na");
}

TEST_CASE("gen, purify and verify pipeline") {
  TempDir dir;
  const Run gen = cli("gen --m 60 --n 12 --gap 0.5 --seed 3 -o " + dir / "h.mtx");
  CHECK(gen.code == 0);
  CHECK(gen.last_line() == "RESULT status=generated p=na idem_err=na energy=na");
  const std::string text = slurp(dir / "h.mtx");
  CHECK_THAT(text, StartsWith("%%MatrixMarket matrix array real symmetric\n% m=60\n% n_occ=12\n"));
  CHECK_THAT(text, ContainsSubstring("% seed=3\n% basis=diagonal\n60 60\n"));

  const Run pur = cli("purify -i " + dir / "h.mtx" + " --n 12 --trace " + dir / "t.csv" + " -o " + dir / "d.mtx");
  CHECK(pur.code == 0);
  CHECK_THAT(pur.last_line(), StartsWith("RESULT status=converged p="));

  // the same run through the library gives the same RESULT line
  const SymMatrix h = load_matrix(dir / "h.mtx");
  PurifierConfig pc;
  const RunResult r = run_purification(h, 12, {}, pc);
  CHECK(pur.last_line() == result_line("converged", r.iterations, r.records.back().idempotency_error,
                                       r.records.back().energy));
  CHECK(load_matrix(dir / "d.mtx") == r.final_d);
  CHECK_THAT(slurp(dir / "t.csv"), ContainsSubstring("\nn,trace_d,idem_err,c,gamma,d,energy,omega,lagrangian,grad_norm\n0,"));

  const Run ver = cli("verify -i " + dir / "d.mtx" + " --n 12 --hamiltonian " + dir / "h.mtx");
  CHECK(ver.code == 0);
  CHECK_THAT(ver.last_line(), StartsWith("RESULT status=verified p=na idem_err="));
  CHECK_THAT(ver.out, ContainsSubstring("oracle_energy_gap "));

  const Run wrong = cli("verify -i " + dir / "d.mtx" + " --n 11");
  CHECK(wrong.code == 3);
  CHECK_THAT(wrong.last_line(), StartsWith("RESULT status=verification_failed"));
}

TEST_CASE("exit codes") {
  TempDir dir;
  REQUIRE(cli("gen --m 50 --n 25 --gap 1e-7 --seed 11 -o " + dir / "h.mtx").code == 0);
  const Run capped = cli("purify -i " + dir / "h.mtx" + " --n 25 --max-iter 2");
  CHECK(capped.code == 2);
  CHECK_THAT(capped.last_line(), StartsWith("RESULT status=max_iterations p=2 "));

  const Run missing = cli("purify -i " + dir / "absent.mtx" + " --n 3");
  CHECK(missing.code == 4);
  CHECK(missing.last_line() == "RESULT status=io_error p=na idem_err=na energy=na");

  std::ofstream(dir / "bad.mtx") << "%%MatrixMarket matrix array real symmetric\n2 2\n1\n";
  const Run bad = cli("purify -i " + dir / "bad.mtx" + " --n 1");
  CHECK(bad.code == 4);
  CHECK(bad.last_line() == "RESULT status=parse_error p=na idem_err=na energy=na");

  const Run flag = cli("purify --bogus");
  CHECK(flag.code == 1);
  CHECK(flag.last_line() == "RESULT status=usage_error p=na idem_err=na energy=na");

  const Run none = cli("");
  CHECK(none.code == 1);

  const Run help = cli("--help");
  CHECK(help.code == 0);
  CHECK(help.last_line() == "RESULT status=help p=na idem_err=na energy=na");
}

TEST_CASE("seed comes from the environment when not given") {
  TempDir dir;
  REQUIRE(cli("gen --m 20 --n 4 --seed 9 -o " + dir / "a.mtx").code == 0);
  REQUIRE(cli("gen --m 20 --n 4 -o " + dir / "b.mtx").code == 0);
  CHECK(slurp(dir / "a.mtx") != slurp(dir / "b.mtx"));
  const std::string env = "PURIKIT_SEED=9 ";
  const std::string cmd = env + "\"" + PURIKIT_CLI_PATH + "\" gen --m 20 --n 4 -o " + dir / "c.mtx" + " >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(dir / "a.mtx") == slurp(dir / "c.mtx"));

  const std::string junk = "PURIKIT_SEED=9x \"" + std::string(PURIKIT_CLI_PATH) + "\" gen --m 20 --n 4 -o " +
                           dir / "d.mtx" + " >/dev/null 2>&1";
  const int status = std::system(junk.c_str());
  CHECK(WEXITSTATUS(status) == 1);
}

TEST_CASE("sweep output is independent of the worker count") {
  TempDir dir;
  std::ofstream(dir / "sweep.cfg") << "# small grid\nthetas=0.1,0.5\ngaps=1,0.01\nsamples=3\nm=30\n"
                                      "methods=pmcp,hpcp,hpcp+\nseed=4\n";
  const Run one = cli("sweep --config " + dir / "sweep.cfg" + " -o " + dir / "a.csv" + " --jobs 1");
  const Run four = cli("sweep --config " + dir / "sweep.cfg" + " -o " + dir / "b.csv" + " --jobs 4");
  CHECK(one.code == 0);
  CHECK(four.code == 0);
  CHECK(one.last_line() == "RESULT status=completed p=na idem_err=na energy=na");
  const std::string a = slurp(dir / "a.csv"), b = slurp(dir / "b.csv");
  CHECK_THAT(a, StartsWith("# purikit sweep\n# generated "));
  CHECK_THAT(a, ContainsSubstring("\ntheta,gap,method,p_mean,p_std,n_conv,n_fail\n"));

  CHECK(without_generated(a) == without_generated(b));

  const Run again = cli("sweep --config " + dir / "sweep.cfg" + " -o " + dir / "c.csv" + " --jobs 1");
  CHECK(again.code == 0);
  CHECK(without_generated(slurp(dir / "c.csv")) == without_generated(a));

  std::ofstream(dir / "bad.cfg") << "thetas=0.1\ngaps=1\ncolour=red\n";
  CHECK(cli("sweep --config " + dir / "bad.cfg" + " -o " + dir / "x.csv").code == 4);
}

TEST_CASE("gap scan and profile commands") {
  TempDir dir;
  std::ofstream(dir / "scan.cfg") << "thetas=0.5\ngaps=1,0.1,0.01\nsamples=2\nm=30\nmethods=hpcp\nseed=2\n";
  const Run scan = cli("gapscan --config " + dir / "scan.cfg" + " -o " + dir / "g.csv");
  CHECK(scan.code == 0);
  CHECK_THAT(slurp(dir / "g.csv"), ContainsSubstring("\ntheta,method,slope,intercept,r2\n"));

  const Run prof = cli("profile --config " + dir / "scan.cfg" + " -o " + dir / "p.csv");
  CHECK(prof.code == 0);
  CHECK_THAT(slurp(dir / "p.csv"),
             ContainsSubstring("\ntheta,gap,method,n,energy,energy_gap_to_oracle,trace_err,idem_err,c,gamma\n"));
}
