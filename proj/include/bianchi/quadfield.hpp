#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/int_matrix.hpp"

namespace bianchi {

/// Element a + b*omega of the ring of integers O_D.
struct RingElement {
  Int a = 0;
  Int b = 0;

  RingElement() = default;
  RingElement(long x) : a(x), b(0) {}
  RingElement(Int x, Int y) : a(std::move(x)), b(std::move(y)) {}

  bool is_zero() const { return a == 0 && b == 0; }
  bool operator==(const RingElement& o) const { return a == o.a && b == o.b; }
  bool operator!=(const RingElement& o) const { return !(*this == o); }
};

/// Imaginary quadratic field Q(sqrt(-D)), D > 0 squarefree. The integral basis
/// is {1, omega} with omega = sqrt(-D) or (1 + sqrt(-D))/2, so that
/// omega^2 = t*omega - n.
class QuadField {
 public:
  explicit QuadField(long D);

  long D() const { return D_; }
  long discriminant() const { return disc_; }
  long omega_trace() const { return t_; }
  long omega_norm() const { return n_; }
  bool omega_is_half_integral() const { return t_ == 1; }
  std::string omega_description() const;

  int unit_count() const;
  std::vector<RingElement> units() const;
  int class_number() const;

  RingElement add(const RingElement& x, const RingElement& y) const;
  RingElement sub(const RingElement& x, const RingElement& y) const;
  RingElement neg(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;
  RingElement conj(const RingElement& x) const;
  RingElement pow(RingElement x, unsigned e) const;
  Int norm(const RingElement& x) const;
  Int trace(const RingElement& x) const;
  bool is_unit(const RingElement& x) const;
  // Exact quotient x / y if it lies in O, otherwise throws std::domain_error.
  RingElement divexact(const RingElement& x, const RingElement& y) const;

  std::complex<double> embed(const RingElement& x) const;
  std::string format(const RingElement& x) const;

  /// Matrix of multiplication by x on Z^2 = O in the basis {1, omega},
  /// acting on column vectors.
  IntMatrix mult_matrix(const RingElement& x) const;

  bool operator==(const QuadField& o) const { return D_ == o.D_; }

 private:
  long D_;
  long disc_;
  long t_;
  long n_;
};

bool is_squarefree(long n);

/// Parses the output of QuadField::format: "a", "a+b*w", "-w", "3-2*w", ...
/// Throws std::invalid_argument on malformed input.
RingElement parse_ring_element(const std::string& text);


/// Integral ideal with Z-basis {n, s + h*omega}, n, h > 0, 0 <= s < n.
class RingIdeal {
 public:
  RingIdeal() = default;
  static RingIdeal from_generators(const QuadField& F, const std::vector<RingElement>& gens);
  static RingIdeal principal(const QuadField& F, const RingElement& x);

  const Int& n() const { return n_; }
  const Int& s() const { return s_; }
  const Int& h() const { return h_; }
  Int norm() const { return n_ * h_; }
  // Smallest positive integer in the ideal.
  const Int& min_integer() const { return n_; }

  bool contains(const RingElement& x) const;
  bool operator==(const RingIdeal& o) const { return n_ == o.n_ && s_ == o.s_ && h_ == o.h_; }
  std::string to_string() const;

 private:
  Int n_ = 1, s_ = 0, h_ = 1;
};

/// Ideal generated by comma-separated elements, optionally in parentheses:
/// "3", "(3)", "(2, 1+w)".
RingIdeal parse_ideal(const QuadField& F, const std::string& text);

/// O / a with elements labelled 0..N-1; label = b' * n + a' for the reduced
/// representative a' + b' omega, 0 <= a' < n, 0 <= b' < h.
class ResidueRing {
 public:
  ResidueRing(const QuadField& F, const RingIdeal& ideal);

  uint32_t size() const { return size_; }
  uint32_t reduce(const RingElement& x) const;
  RingElement lift(uint32_t label) const;
  uint32_t zero() const { return 0; }
  uint32_t one() const { return one_; }

  uint32_t add(uint32_t x, uint32_t y) const;
  uint32_t sub(uint32_t x, uint32_t y) const;
  uint32_t neg(uint32_t x) const;
  uint32_t mul(uint32_t x, uint32_t y) const;
  bool is_unit(uint32_t x) const;
  uint32_t unit_count() const;
  uint32_t idempotent_count() const;

  const RingIdeal& ideal() const { return ideal_; }

 private:
  uint32_t label(int64_t a, int64_t b) const;
  int64_t n_, s_, h_, t_, nw_;
  uint32_t size_;
  uint32_t one_;
  RingIdeal ideal_;
};

/// 2x2 matrix over O.
struct Mat2 {
  RingElement e[2][2];

  static Mat2 identity() {
    Mat2 m;
    m.e[0][0] = 1;
    m.e[1][1] = 1;
    return m;
  }
  bool operator==(const Mat2& o) const;
  bool operator!=(const Mat2& o) const { return !(*this == o); }
};

Mat2 mat_mul(const QuadField& F, const Mat2& x, const Mat2& y);
RingElement mat_det(const QuadField& F, const Mat2& x);
// Inverse of a determinant-one matrix.
Mat2 mat_inv_sl2(const QuadField& F, const Mat2& x);
// Sum of |entry|^2, an exact integer.
Int mat_frobenius_sq(const QuadField& F, const Mat2& x);
// Spectral norm of a determinant-one matrix, rounded upward.
double sl2_operator_norm(const QuadField& F, const Mat2& x);
bool mat_congruent_identity(const QuadField& F, const Mat2& x, const RingIdeal& a);
std::string mat_format(const QuadField& F, const Mat2& x);

struct ZetaValue {
  double value;
  double error_bound;
  uint64_t terms;
};

/// L(2, chi_d) for the Kronecker character of the field discriminant, summed
/// over `periods` full periods with an explicit tail bound.
ZetaValue dirichlet_l2(const QuadField& F, uint64_t periods);
/// zeta_F(2) = zeta(2) L(2, chi_d) to absolute error 10^-digits, 1 <= digits <= 15.
ZetaValue zeta_at_2(const QuadField& F, int digits);
/// Covolume of PSL_2(O_D) acting on hyperbolic 3-space.
double bianchi_covolume(const QuadField& F, int digits = 12);

}  // namespace bianchi
