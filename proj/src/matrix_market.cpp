#include "purikit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "purikit/errors.hpp"
#include "purikit/format.hpp"

namespace purikit {

void write_matrix_market(std::ostream& os, const SymMatrix& a,
                         const std::vector<std::string>& comments) {
  const std::size_t n = a.order();
  os << "%%MatrixMarket matrix array real symmetric\n";
  for (const auto& c : comments) os << '%' << (c.empty() ? "" : " ") << c << '\n';
  os << n << ' ' << n << '\n';
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n; ++i) os << format_double(a(i, j)) << '\n';
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char ch) { return std::isspace(ch) != 0; });
}

double parse_real(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad numeric value '" + tok + "'");
  return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "bad integer '" + tok + "'");
  return v;
}

/// Line-oriented reader that skips `%` comments and blank lines.
class Lines {
 public:
  Lines(std::istream& is, std::size_t consumed) : is_(is), number_(consumed) {}

  std::optional<std::string> next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '%' || blank(line)) continue;
      return line;
    }
    return std::nullopt;
  }

  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& is_;
  std::size_t number_ = 0;
};

}  // namespace

SymMatrix read_matrix_market(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError(1, "empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto h = split(header);
  if (h.size() != 5 || h[0] != "%%MatrixMarket" || lower(h[1]) != "matrix")
    throw ParseError(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'");
  const std::string format = lower(h[2]);
  const std::string field = lower(h[3]);
  const std::string symmetry = lower(h[4]);
  if (format != "array" && format != "coordinate")
    throw ParseError(1, "unsupported format '" + h[2] + "'");
  if (field != "real" && field != "double" && field != "integer")
    throw ParseError(1, "unsupported field '" + h[3] + "'");
  if (symmetry != "symmetric" && symmetry != "general")
    throw ParseError(1, "unsupported symmetry '" + h[4] + "'");
  const bool sym = symmetry == "symmetric";

  Lines lines(is, 1);
  const auto size_line = lines.next();
  if (!size_line) throw ParseError(lines.number() + 1, "missing size line");
  const auto dims = split(*size_line);
  const std::size_t want_tokens = format == "array" ? 2 : 3;
  if (dims.size() != want_tokens) throw ParseError(lines.number(), "malformed size line");
  const std::size_t rows = parse_index(dims[0], lines.number());
  const std::size_t cols = parse_index(dims[1], lines.number());
  if (rows != cols) throw ParseError(lines.number(), "matrix is not square");
  if (rows == 0) throw ParseError(lines.number(), "matrix order is zero");
  const std::size_t n = rows;

  Matrix a(n);
  if (format == "array") {
    const std::size_t expected = sym ? n * (n + 1) / 2 : n * n;
    std::size_t count = 0;
    std::size_t i = 0, j = 0;  // column-major cursor
    while (auto line = lines.next()) {
      for (const auto& tok : split(*line)) {
        if (count == expected)
          throw ParseError(lines.number(), "more than the expected " + std::to_string(expected) +
                                               " entries");
        const double v = parse_real(tok, lines.number());
        a(i, j) = v;
        if (sym) a(j, i) = v;
        ++count;
        if (++i == n) {
          ++j;
          i = sym ? j : 0;
        }
      }
    }
    if (count != expected)
      throw ParseError(lines.number(), "expected " + std::to_string(expected) +
                                               " entries, found " + std::to_string(count));
  } else {
    const std::size_t nnz = parse_index(dims[2], lines.number());
    std::vector<char> seen(n * n, 0);
    std::size_t count = 0;
    while (auto line = lines.next()) {
      const auto t = split(*line);
      if (count == nnz)
        throw ParseError(lines.number(), "more than the declared " + std::to_string(nnz) + " entries");
      if (t.size() != 3) throw ParseError(lines.number(), "expected 'row col value'");
      const std::size_t r = parse_index(t[0], lines.number());
      const std::size_t c = parse_index(t[1], lines.number());
      if (r < 1 || r > n || c < 1 || c > n) throw ParseError(lines.number(), "index out of range");
      if (sym && c > r)
        throw ParseError(lines.number(), "upper-triangle entry in a symmetric file");
      if (seen[(r - 1) * n + (c - 1)]) throw ParseError(lines.number(), "duplicate entry");
      seen[(r - 1) * n + (c - 1)] = 1;
      const double v = parse_real(t[2], lines.number());
      a(r - 1, c - 1) = v;
      if (sym) a(c - 1, r - 1) = v;
      ++count;
    }
    if (count != nnz)
      throw ParseError(lines.number(), "declared " + std::to_string(nnz) + " entries, found " +
                                               std::to_string(count));
  }

  if (!sym) {
    try {
      return SymMatrix::from_dense(a);
    } catch (const InvalidArgument& e) {
      throw ParseError(lines.number(), std::string("general matrix is not symmetric: ") + e.what());
    }
  }
  return SymMatrix::symmetrized(a);
}

void save_matrix(const SymMatrix& a, const std::filesystem::path& path,
                 const std::vector<std::string>& comments) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_matrix_market(os, a, comments);
  os.flush();
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

SymMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  return read_matrix_market(is);
}

}  // namespace purikit
