#pragma once

#include <cstdint>
#include <vector>

#include "bianchi/int_matrix.hpp"

namespace bianchi {

/// Pivot rows and columns of Gaussian elimination over Z/p; the submatrix on
/// them is nonsingular mod p.
struct RankProfile {
  std::vector<size_t> rows;
  std::vector<size_t> cols;
  size_t rank() const { return rows.size(); }
};

RankProfile rank_profile_mod_p(const IntMatrix& a, uint64_t p);

/// log2 of the Hadamard bound prod_i ||row_i||.
double hadamard_log2(const IntMatrix& a);

/// Exact determinant by Chinese remaindering over primes below 2^62 until the
/// product exceeds twice the Hadamard bound.
Int determinant_multimodular(const IntMatrix& a);

/// Smith form of a over Z/M as divisors of M in [1, M], sorted so that each
/// entry divides the next. Length min(rows, cols).
std::vector<Int> smith_diagonal_mod(const IntMatrix& a, const Int& modulus);

}  // namespace bianchi
