#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bianchi/int_matrix.hpp"
#include "bianchi/quadfield.hpp"

namespace bianchi {

/// Square matrix over O.
struct OMatrix {
  size_t n = 0;
  std::vector<RingElement> d;

  OMatrix() = default;
  explicit OMatrix(size_t size) : n(size), d(size * size) {}
  RingElement& operator()(size_t r, size_t c) { return d[r * n + c]; }
  const RingElement& operator()(size_t r, size_t c) const { return d[r * n + c]; }
  bool operator==(const OMatrix& o) const { return n == o.n && d == o.d; }
  OMatrix transpose() const;
};

OMatrix omatrix_mul(const QuadField& F, const OMatrix& x, const OMatrix& y);
OMatrix omatrix_identity(size_t n);

/// rho_m(g) on the basis v_j = e1^{m-j} e2^j, acting by
/// v_j -> (g e1)^{m-j} (g e2)^j; column j holds the image of v_j.
OMatrix sym_power(const QuadField& F, const Mat2& g, int m);

/// Integer version for g in SL_2(Z) (or any integer 2x2 matrix).
IntMatrix sym_power_int(const IntMatrix& g, int m);

/// Z-expansion: each O-entry becomes its 2x2 multiplication block in the
/// basis {1, omega}; coordinates are ordered (v_0, omega v_0, v_1, ...).
IntMatrix z_expand(const QuadField& F, const OMatrix& x);

enum class LatticeKind { Standard, Dual, Barred };
std::string to_string(LatticeKind k);

/// The Gamma-module Lambda(m), its Z-dual, or their direct sum.
class LatticeRep {
 public:
  LatticeRep(const QuadField& F, int m, LatticeKind kind);

  int m() const { return m_; }
  LatticeKind kind() const { return kind_; }
  const QuadField& field() const { return F_; }
  // Dimension over O: m+1, or 2(m+1) for the barred module.
  size_t dim() const { return kind_ == LatticeKind::Barred ? 2 * (m_ + 1) : m_ + 1; }
  size_t z_rank() const { return 2 * dim(); }

  /// Action over O; the dual part uses the contragredient rho(g^-1)^T.
  OMatrix action(const Mat2& g) const;
  /// Action on the underlying free Z-module; the dual part is Hom_Z(Lambda, Z)
  /// with (g f)(v) = f(g^-1 v), i.e. the transpose of the Z-expanded rho(g^-1).
  IntMatrix z_action(const Mat2& g) const;

 private:
  QuadField F_;
  int m_;
  LatticeKind kind_;
};

/// Largest singular value of x viewed as a complex matrix.
double operator_norm(const QuadField& F, const OMatrix& x);

struct NormComparison {
  double direct = 0;          // ||rho_m(g)|| for the orthonormal monomial basis
  double rho1_power = 0;      // ||rho_1(g)||^m
  double binomial_bound = 0;  // sqrt(C(m, floor(m/2))) * ||rho_1(g)||^m
  bool power_bound_holds = false;
  bool binomial_bound_holds = false;
};

NormComparison compare_norms(const QuadField& F, const Mat2& g, int m, double rel_tol = 1e-12);

/// (1/denominator) * basis * Z^{m+1}, basis columns in column HNF.
struct LatticeInZBasis {
  int m = 0;
  IntMatrix basis;
  Int denominator = 1;

  bool operator==(const LatticeInZBasis& o) const {
    return m == o.m && basis == o.basis && denominator == o.denominator;
  }
  RatMatrix rational_basis() const;
};

LatticeInZBasis make_lattice(int m, const RatMatrix& basis);
LatticeInZBasis standard_lattice(int m);

/// Gram matrix of the pairing on V(m) induced by the determinant:
/// <v_j, v_k> = (-1)^j / C(m, j) when j + k = m, zero otherwise.
RatMatrix determinant_pairing(int m);

LatticeInZBasis dual_lattice(const LatticeInZBasis& L);
LatticeInZBasis scale_lattice(const LatticeInZBasis& L, const Rat& s);
/// Whether `inner` is contained in `outer`.
bool lattice_contains(const LatticeInZBasis& outer, const LatticeInZBasis& inner);
/// Invariance under rho_m of the given integer matrices.
bool lattice_invariant(const LatticeInZBasis& L, const std::vector<IntMatrix>& gens);

struct Sandwich {
  Rat lower;               // minimal a > 0 with a L1 inside L2
  Rat upper;               // maximal b > 0 with L2 inside b L1
  std::optional<int> k;    // minimal k with L2 inside a (m!)^-k L1
};

Sandwich lattice_sandwich(const LatticeInZBasis& L1, const LatticeInZBasis& L2);

Int factorial(int m);
Int binomial(int n, int k);

}  // namespace bianchi
