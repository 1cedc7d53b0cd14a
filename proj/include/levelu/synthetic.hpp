#pragma once

#include <cstdint>

#include "levelu/sparse.hpp"

namespace levelu::synthetic {

/// Every off-diagonal position kept independently with probability
/// `density`; the diagonal is always present.
CscPattern random_pattern(Index n, double density, std::uint64_t seed);

/// Random pattern with values in [-1, 1] and a diagonal exceeding both the
/// row and the column sums of magnitudes.
CscMatrix random_diag_dominant(Index n, double density, std::uint64_t seed);

CscMatrix diagonal(Index n);

/// Tridiagonal; every column depends on its predecessor.
CscMatrix chain(Index n);

/// Diagonally dominant band with `half_bandwidth` entries on each side.
CscMatrix banded(Index n, Index half_bandwidth);

/// Dense diagonal blocks plus a dense border of `border` trailing rows and
/// columns. Each level of its schedule holds one column of every block.
CscMatrix block_arrow(Index blocks, Index block_size, Index border);

/// 8x8 example with the couplings used to illustrate double-U dependencies
/// (0-based): (1,0) (0,4) (1,4) (2,4) (2,7) (3,6) (5,3) (5,6) (6,7) (7,3)
/// (7,5) (7,6) plus the diagonal. Closed under fill-in.
CscMatrix double_u_example();

}  // namespace levelu::synthetic
