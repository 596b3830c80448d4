#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "purikit/matrix.hpp"

namespace purikit {

class Rng;

enum class Basis { Diagonal, RandomOrthogonal };

std::string_view to_string(Basis b) noexcept;

/// Recipe for a random gapped test Hamiltonian. The frontier eigenvalues are
/// pinned at eps_N = -gap/2 and eps_{N+1} = +gap/2; the remaining N-1 occupied
/// and M-N-1 virtual levels are uniform in [low, -gap/2] and [gap/2, high].
struct HamiltonianSpec {
  int m = 100;
  int n_occ = 10;
  double gap = 1.0;
  double range_low = -2.5;
  double range_high = 2.5;
  std::uint64_t seed = 1;
  Basis basis = Basis::Diagonal;

  /// Throws InvalidArgument when the recipe cannot be realized.
  void validate() const;

  /// Flat `key=value` lines (no trailing newline on the last one).
  std::string to_key_values() const;
};

/// Sorted ascending eigenvalues of the Hamiltonian described by `spec`.
std::vector<double> generate_spectrum(const HamiltonianSpec& spec);

/// Bit-reproducible for a fixed spec. The basis rotation draws from the same
/// stream after the eigenvalues, so both bases share one spectrum.
SymMatrix generate_hamiltonian(const HamiltonianSpec& spec);

/// Haar-distributed orthogonal matrix: Gram-Schmidt QR of a standard-normal
/// matrix with R's diagonal made positive.
Matrix random_orthogonal(std::size_t order, Rng& rng);

}  // namespace purikit
