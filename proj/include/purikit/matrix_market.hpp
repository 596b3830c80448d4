#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "purikit/matrix.hpp"

namespace purikit {

/// Writes `%%MatrixMarket matrix array real symmetric`: optional `%` comment
/// lines, "M M", then the lower triangle column by column, one value per line
/// with 17 significant digits. ASCII, LF line endings.
void write_matrix_market(std::ostream& os, const SymMatrix& a,
                         const std::vector<std::string>& comments = {});

/// Reads array or coordinate files with real/integer fields and symmetric or
/// general symmetry. General input must be symmetric to 1e-14 relative.
/// Throws ParseError (with the 1-based line) on malformed input.
SymMatrix read_matrix_market(std::istream& is);

/// File wrappers; I/O failures throw Error.
void save_matrix(const SymMatrix& a, const std::filesystem::path& path,
                 const std::vector<std::string>& comments = {});
SymMatrix load_matrix(const std::filesystem::path& path);

}  // namespace purikit
