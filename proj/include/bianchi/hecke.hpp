#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/int_matrix.hpp"

namespace bianchi {

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<Int> cyclotomic_polynomial(unsigned n);

/// Element of Q(zeta_n), stored as a polynomial in zeta_n of degree < phi(n).
class Cyclotomic {
 public:
  explicit Cyclotomic(unsigned n = 1);
  static Cyclotomic rational(unsigned n, const Rat& r);
  static Cyclotomic zeta_power(unsigned n, long k);

  unsigned order() const { return n_; }
  const std::vector<Rat>& coefficients() const { return c_; }

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator-(const Cyclotomic& o) const;
  Cyclotomic operator*(const Cyclotomic& o) const;
  Cyclotomic operator/(const Cyclotomic& o) const;
  // Throws std::domain_error for zero.
  Cyclotomic inverse() const;
  bool operator==(const Cyclotomic& o) const { return n_ == o.n_ && c_ == o.c_; }

  bool is_zero() const;
  bool is_rational() const;
  Rat rational_value() const;  // throws unless is_rational()
  std::complex<double> to_complex() const;
  std::string to_string() const;

 private:
  unsigned n_;
  std::vector<Rat> c_;
  void check(const Cyclotomic& o) const;
  void reduce();
};

/// Data at a finite place v: residue field size q, and chi(pi_v) written as
/// zeta_order^index * q^(-norm_exponent). The norm exponent is an integer so
/// that all values stay in Q(zeta_order).
struct LocalPlaceData {
  uint64_t q = 2;
  unsigned chi_order = 1;
  long chi_index = 0;
  long norm_exponent = 0;
  int conductor_exponent = 0;  // n_v; positive means ramified

  bool ramified() const { return conductor_exponent > 0; }
  /// Throws std::invalid_argument unless q is a prime power and the order is positive.
  void validate() const;
};

Cyclotomic chi_at_uniformizer(const LocalPlaceData& v);

/// L_v(chi, s) = (1 - chi(pi_v) q^-s)^-1, and 1 at a ramified place. Requires s >= 2.
Cyclotomic local_L(const LocalPlaceData& v, long s);

/// Scalar of the local intertwining operator at integer parameter m >= 2:
/// (1 - chi(pi_v) q^-m) / (1 - chi(pi_v) q^-(m-1)). Unramified places only.
Cyclotomic intertwining_ratio(const LocalPlaceData& v, int m);

/// Partial sum sum_{k < terms} (chi(pi_v) q^-s)^k in double precision.
std::complex<double> local_L_partial_sum(const LocalPlaceData& v, long s, uint64_t terms);

/// re + i*im with rational parts.
struct GaussianRational {
  Rat re = 0, im = 0;
  GaussianRational operator*(const GaussianRational& o) const;
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
};

/// c(m) = (1/pi) * 1/(m + 2 + i m), stored as the Gaussian rational factor
/// of 1/pi.
struct CFunctionValue {
  int m = 0;
  GaussianRational over_pi;
  std::complex<double> value() const;
};

CFunctionValue c_function(int m);

struct HeckeRow {
  uint64_t q = 0;
  unsigned chi_order = 1;
  long chi_index = 0;
  int m = 0;
  std::string ratio;
  std::complex<double> ratio_value;
};

/// Ratios over all listed q, all characters of the listed orders (indices 0..order-1) and m.
std::vector<HeckeRow> hecke_table(const std::vector<uint64_t>& qs, const std::vector<unsigned>& orders, int m_min,
                                  int m_max);

}  // namespace bianchi
