#pragma once

#include <vector>

#include "purikit/matrix.hpp"

namespace purikit {

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  Matrix vectors;              ///< column k is the eigenvector of values[k]
};

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Verification oracle only: used by tests, the verify module and oracle
/// energies, never inside a purification loop. Throws EigenNonConvergence if
/// the off-diagonal mass is still above roundoff after max_sweeps sweeps.
EigenDecomposition eig_oracle(const SymMatrix& a, int max_sweeps = 64);

/// Eigenvalues only (same algorithm, skips accumulating the rotations).
std::vector<double> eigenvalues_oracle(const SymMatrix& a, int max_sweeps = 64);

}  // namespace purikit
