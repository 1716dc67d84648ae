#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/int_matrix.hpp"
#include "bianchi/sparse_matrix.hpp"

namespace bianchi {

enum class PivotStrategy { MinMagnitude, MinDegree };

// Modular: unit pivots and content extraction on the sparse matrix, then a
// dense Smith form modulo twice a gcd of two maximal minors.
// Euclidean: sparse elimination with Euclidean steps throughout; entries can
// grow quickly, so it is only practical for small inputs.
enum class SnfMethod { Modular, Euclidean };

struct SnfOptions {
  SnfMethod method = SnfMethod::Modular;
  // Pivot order for sparse elimination.
  PivotStrategy strategy = PivotStrategy::MinMagnitude;
  // Compare the exact rank with ranks modulo two primes above 2^30.
  bool check_rank = true;
  bool split_components = true;
};

struct SnfStats {
  size_t components = 0;
  size_t max_entry_bits = 0;
  size_t euclid_steps = 0;
  size_t modular_rank = 0;
  // largest dense block handed to the modular phase
  size_t dense_rows = 0;
  size_t dense_cols = 0;
  size_t modulus_bits = 0;
};

struct SnfResult {
  // Invariant factors d_1 | d_2 | ... | d_r, all positive, r = rank.
  std::vector<Int> invariant_factors;
  size_t rank = 0;
  SnfStats stats;

  std::vector<Int> torsion_factors() const;  // factors > 1
};

/// Smith normal form diagonal of a sparse integer matrix by sparse Euclidean
/// elimination with the chosen pivot strategy. Throws std::runtime_error if the
/// exact rank disagrees with the modular rank.
SnfResult smith_form(const SparseIntMatrix& m, const SnfOptions& opts = {});

struct SnfTransform {
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix v;  // cols x cols, unimodular
  IntMatrix d;  // u * m * v
  std::vector<Int> invariant_factors;
  size_t rank = 0;
};

/// Dense Smith normal form with unimodular transforms.
SnfTransform smith_form_with_transforms(const IntMatrix& m);

/// Eliminates unit pivots (Markowitz order) by unimodular row and column
/// operations. Z^cols / rows(m) is isomorphic to Z^cols' / rows(result), and
/// rank(m) = rank(result) + eliminated.
SparseIntMatrix unit_pivot_reduce(const SparseIntMatrix& m, size_t* eliminated = nullptr, size_t* max_bits = nullptr);

/// Rank over Z/p by sparse elimination.
size_t rank_mod_p(const SparseIntMatrix& m, uint64_t p);

/// The two fixed primes above 2^30 used for rank checks.
std::vector<uint64_t> rank_check_primes();

/// Sorts a multiset of nonzero diagonal entries into invariant-factor form.
std::vector<Int> normalize_diagonal(std::vector<Int> diag);

struct AbelianGroup {
  size_t betti = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next

  Int torsion_order() const;
  double log_torsion_order() const;
  std::string to_string() const;
  bool operator==(const AbelianGroup& o) const { return betti == o.betti && torsion == o.torsion; }
};

/// ker(a) / im(b) for composable maps on column vectors with a * b = 0.
/// Throws std::invalid_argument on mismatched shapes or a * b != 0.
AbelianGroup homology(const IntMatrix& a, const IntMatrix& b);

/// Z^cols / (row span of m).
AbelianGroup row_cokernel(const SparseIntMatrix& m, const SnfOptions& opts = {});

/// Natural log of a positive integer, accurate for arbitrary size.
double log_int(const Int& x);

}  // namespace bianchi
