#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bianchi/congruence.hpp"
#include "bianchi/presentation.hpp"
#include "bianchi/snf.hpp"
#include "bianchi/sparse_matrix.hpp"
#include "bianchi/symmpow.hpp"

namespace bianchi {

/// Element of the integral group ring of a free group: reduced words with
/// nonzero integer coefficients.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  static GroupRingElement from_word(const Word& w, const Int& c = 1);
  static GroupRingElement one() { return from_word({}); }

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement operator*(const Int& s) const;
  bool operator==(const GroupRingElement& o) const { return terms_ == o.terms_; }
  bool is_zero() const { return terms_.empty(); }

  Int augmentation() const;
  const std::map<Word, Int>& terms() const { return terms_; }
  std::string to_string(const std::vector<std::string>& names) const;

 private:
  void add_term(const Word& w, const Int& c);
  std::map<Word, Int> terms_;
};

/// Fox derivative of w with respect to generator g (0-based). Throws
/// std::out_of_range for letters outside [1, generator_count].
GroupRingElement fox_derivative(const Word& w, size_t g, size_t generator_count);

/// Integer row block attached to a group element; must be multiplicative.
using RowBlockFn = std::function<IntMatrix(const Mat2&)>;

/// Presentation complex Z[G]^R -> Z[G]^G -> Z[G] tensored with a module, in
/// row-vector form: d2 has a (dim x dim) block sigma(dr/dx) per relator and
/// generator, d1 has the blocks sigma(x) - 1. With sigma(g) = A(g^-1)^T for a
/// module action A, the homology of this complex is H_*(Gamma; module).
struct FoxJacobian {
  SparseIntMatrix d2;
  SparseIntMatrix d1;
  size_t dim = 0;
  size_t generators = 0;
  size_t relators = 0;

  bool chain_condition() const;
};

/// With a nonzero modulus, prefix products are reduced into [0, modulus).
FoxJacobian build_fox_jacobian(const GroupPresentation& p, size_t dim, const RowBlockFn& sigma, uint64_t modulus = 0);
FoxJacobian build_complex(const GroupPresentation& p, const LatticeRep& rep);

struct TorsionOptions {
  SnfOptions snf;
  bool verify_chain = true;
  // Write d2 in snapshot format here before the Smith form, if set.
  std::optional<std::string> snapshot_path;
};

struct TorsionReport {
  long D = 0;
  std::string ideal;
  int m = 0;
  LatticeKind variant = LatticeKind::Barred;
  size_t dim = 0;  // Z-rank of the coefficient module
  size_t generators = 0;
  size_t relators = 0;

  AbelianGroup h0;
  AbelianGroup h1;
  Int h0_order = 0;  // 0 when H_0 is infinite
  double h1_torsion_log = 0;
  // log |H^2_tors|, equal to h1_torsion_log for the self-dual barred module
  std::optional<double> h2_tors_log;
  bool chain_ok = false;

  // Cusp count of the subgroup, when known.
  std::optional<size_t> kappa;
  // h1.betti == kappa, taken literally
  std::optional<bool> betti_equals_kappa;
  // h1.betti == (Z-rank of V(m) (x) C per copy) * kappa: 4 kappa barred, 2 kappa otherwise
  std::optional<bool> betti_matches_cusps;

  size_t d2_rows = 0, d2_cols = 0, d2_nnz = 0;
  size_t max_entry_bits = 0;
  // natural logs of the largest Euclidean row and column norms of d2
  double log_max_row_norm = 0, log_max_col_norm = 0;
  size_t rank_d1 = 0, rank_d2 = 0;
  double seconds_build = 0, seconds_snf = 0;
};

TorsionReport compute_torsion(const GroupPresentation& p, const LatticeRep& rep, const TorsionOptions& opts = {});

/// dim H_1(Gamma; V(m) (x) F_p) for a prime p split in O, computed from the
/// complex reduced modulo a degree-one prime above p. For all but finitely
/// many p this is the complex dimension dim H_1(Gamma; V(m)).
struct SplitPrimeBetti {
  uint64_t p = 0;
  uint64_t omega_image = 0;
  size_t betti1 = 0;
  size_t betti0 = 0;
};
SplitPrimeBetti split_prime_betti(const GroupPresentation& p, int m);

/// H_0 with coefficients in the given module, from d1 alone.
AbelianGroup coinvariants(const GroupPresentation& p, const LatticeRep& rep);

/// Barred-coefficient run on Gamma(a): H_1 betti and torsion, H^2 torsion via
/// self-duality, betti checked against the cusp count. A betti mismatch is
/// recorded in the report, not thrown.
TorsionReport torsion_h2(const CongruenceSubgroup& S, int m, const TorsionOptions& opts = {});

/// Torsion of H_1 with coefficients in Lambda(m) and in its dual.
struct DualTorsionComparison {
  TorsionReport standard;
  TorsionReport dual;
  double log_ratio() const { return standard.h1_torsion_log - dual.h1_torsion_log; }
};
DualTorsionComparison compare_dual_torsion(const CongruenceSubgroup& S, int m, const TorsionOptions& opts = {});

}  // namespace bianchi
