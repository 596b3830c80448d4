#include <filesystem>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "purikit/config.hpp"
#include "purikit/eigen.hpp"
#include "purikit/errors.hpp"
#include "purikit/format.hpp"
#include "purikit/hamgen.hpp"
#include "purikit/matrix_market.hpp"

using namespace purikit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

SymMatrix read(const std::string& text) {
  std::istringstream is(text);
  return read_matrix_market(is);
}

std::size_t parse_error_line(const std::string& text) {
  try {
    read(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(1.0) == "1.0000000000000000e+00");
  CHECK(format_double(-0.1) == "-1.0000000000000001e-01");
  CHECK(format_or_na(std::nullopt) == "na");
  CHECK(format_or_na(std::nan("")) == "na");
}

TEST_CASE("Matrix Market round trip is bitwise") {
  HamiltonianSpec s;
  s.seed = 4;
  s.basis = Basis::RandomOrthogonal;
  const SymMatrix h = generate_hamiltonian(s);
  std::stringstream ss;
  write_matrix_market(ss, h, {"a comment"});
  const std::string text = ss.str();
  CHECK(text.rfind("%%MatrixMarket matrix array real symmetric\n% a comment\n100 100\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(read(text) == h);

  const auto path = std::filesystem::temp_directory_path() / "purikit_roundtrip.mtx";
  save_matrix(h, path);
  CHECK(load_matrix(path) == h);
  std::filesystem::remove(path);
}

TEST_CASE("writer layout: lower triangle, column-major") {
  SymMatrix a(2);
  a.set(0, 0, 1.0);
  a.set(1, 0, 2.0);
  a.set(1, 1, 3.0);
  std::ostringstream os;
  write_matrix_market(os, a);
  CHECK(os.str() ==
        "%%MatrixMarket matrix array real symmetric\n2 2\n1.0000000000000000e+00\n"
        "2.0000000000000000e+00\n3.0000000000000000e+00\n");
}

TEST_CASE("hand-written inputs") {
  const SymMatrix x = read("%%MatrixMarket matrix coordinate real symmetric\n% swap\n2 2 1\n2 1 1\n");
  const auto ev = eigenvalues_oracle(x);
  CHECK_THAT(ev[0], WithinAbs(-1.0, 1e-15));
  CHECK_THAT(ev[1], WithinAbs(1.0, 1e-15));

  const SymMatrix g = read("%%MatrixMarket matrix array real general\n2 2\n0\n1\n1\n0\n");
  CHECK(g == x);
  const SymMatrix i = read("%%MatrixMarket matrix array integer symmetric\n2 2\n0 1 0\n");
  CHECK(i == x);
}

TEST_CASE("malformed inputs report the offending line") {
  // 3x3 symmetric expects 6 lower-triangle values; the file stops at 5
  const std::string short_file =
      "%%MatrixMarket matrix array real symmetric\n3 3\n1\n2\n3\n4\n5\n";
  CHECK(parse_error_line(short_file) == 7);
  CHECK_THROWS_WITH(read(short_file), ContainsSubstring("expected 6 entries, found 5"));

  CHECK(parse_error_line("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n4\n") == 6);
  CHECK(parse_error_line("%%MatrixMarket vector array real symmetric\n") == 1);
  CHECK(parse_error_line("%%MatrixMarket matrix array complex symmetric\n") == 1);
  CHECK(parse_error_line("%%MatrixMarket matrix array real symmetric\n2 3\n") == 2);
  CHECK(parse_error_line("%%MatrixMarket matrix array real symmetric\n% c\n2 2\n1\nx\n3\n") == 5);
  CHECK(parse_error_line("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 5\n") == 3);
  CHECK(parse_error_line("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 5\n") == 3);
  CHECK(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 5\n2 1 4\n") > 0);
  CHECK(parse_error_line("") == 1);
  CHECK_THROWS_AS(load_matrix("/nonexistent/purikit.mtx"), IoError);
}

TEST_CASE("key=value configuration") {
  const KeyValues kv = KeyValues::parse(
      "# sweep\nthetas = 0.1, 0.5\n\nsamples=4\nname = x y\nflag=true\nseed=18446744073709551615\n");
  CHECK(kv.get_doubles("thetas", {}) == std::vector<double>{0.1, 0.5});
  CHECK(kv.get_int("samples", 0) == 4);
  CHECK(kv.get_string("name", "") == "x y");
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_uint("seed", 0) == 18446744073709551615ULL);
  CHECK(kv.get_double("absent", 2.5) == 2.5);
  CHECK(kv.unused_keys().empty());

  const KeyValues extra = KeyValues::parse("a=1\nb=2\n");
  (void)extra.get_int("a", 0);
  CHECK(extra.unused_keys() == std::vector<std::string>{"b"});

  auto line_of = [](const std::string& text, auto&& use) -> std::size_t {
    try {
      use(KeyValues::parse(text));
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("a=1\nnot a pair\n", [](const KeyValues&) {}) == 2);
  CHECK(line_of("a=1\na=2\n", [](const KeyValues&) {}) == 2);
  CHECK(line_of("\nsamples=four\n", [](const KeyValues& k) { (void)k.get_int("samples", 0); }) == 2);
  CHECK(line_of("x=1,,2\n", [](const KeyValues& k) { (void)k.get_doubles("x", {}); }) == 1);
}
