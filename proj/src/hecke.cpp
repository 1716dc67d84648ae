#include "bianchi/hecke.hpp"

#include <gmp.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bianchi {

namespace {

using Poly = std::vector<Rat>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

std::vector<Int> poly_divexact(const std::vector<Int>& a, const std::vector<Int>& b) {
  // b monic
  std::vector<Int> r = a;
  std::vector<Int> q(a.size() - b.size() + 1);
  for (size_t i = q.size(); i-- > 0;) {
    q[i] = r[i + b.size() - 1];
    for (size_t j = 0; j < b.size(); ++j) r[i + j] -= q[i] * b[j];
  }
  return q;
}

// remainder of a modulo monic m
Poly poly_mod(Poly a, const Poly& m) {
  trim(a);
  const size_t d = m.size() - 1;
  while (a.size() > d) {
    Rat lead = a.back();
    size_t shift = a.size() - 1 - d;
    for (size_t j = 0; j <= d; ++j) a[shift + j] -= lead * m[j];
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// a = q b + r
void poly_divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  r = a;
  trim(r);
  q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Rat(0));
  while (r.size() >= b.size() && !r.empty()) {
    Rat f = r.back() / b.back();
    size_t shift = r.size() - b.size();
    q[shift] = f;
    for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= f * b[j];
    trim(r);
  }
  trim(q);
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

const Poly& modulus_poly(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, Poly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    Poly p;
    for (const auto& x : cyclotomic_polynomial(n)) p.push_back(Rat(x));
    it = cache.emplace(n, std::move(p)).first;
  }
  return it->second;
}

bool is_prime_power(uint64_t q) {
  if (q < 2) return false;
  uint64_t p = 2;
  while (p * p <= q && q % p) ++p;
  if (q % p) return true;  // q prime
  while (q % p == 0) q /= p;
  return q == 1;
}

}  // namespace

std::vector<Int> cyclotomic_polynomial(unsigned n) {
  if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
  // x^n - 1 divided by Phi_d for every proper divisor d
  std::vector<Int> p(n + 1, Int(0));
  p[0] = -1;
  p[n] = 1;
  for (unsigned d = 1; d < n; ++d)
    if (n % d == 0) p = poly_divexact(p, cyclotomic_polynomial(d));
  return p;
}

Cyclotomic::Cyclotomic(unsigned n) : n_(n) {
  if (n == 0) throw std::invalid_argument("Cyclotomic: order must be positive");
}

Cyclotomic Cyclotomic::rational(unsigned n, const Rat& r) {
  Cyclotomic c(n);
  Rat x = r;
  x.canonicalize();
  if (x != 0) c.c_ = {x};
  return c;
}

Cyclotomic Cyclotomic::zeta_power(unsigned n, long k) {
  Cyclotomic c(n);
  long e = ((k % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
  c.c_.assign(static_cast<size_t>(e) + 1, Rat(0));
  c.c_[static_cast<size_t>(e)] = 1;
  c.reduce();
  return c;
}

void Cyclotomic::check(const Cyclotomic& o) const {
  if (n_ != o.n_) throw std::invalid_argument("Cyclotomic: mismatched orders");
}

void Cyclotomic::reduce() { c_ = poly_mod(c_, modulus_poly(n_)); }

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  check(o);
  Cyclotomic r(n_);
  r.c_.assign(std::max(c_.size(), o.c_.size()), Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
  trim(r.c_);
  return r;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const {
  check(o);
  Cyclotomic r(n_);
  r.c_ = poly_sub(c_, o.c_);
  return r;
}

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
  check(o);
  Cyclotomic r(n_);
  r.c_ = poly_mul(c_, o.c_);
  r.reduce();
  return r;
}

Cyclotomic Cyclotomic::inverse() const {
  if (is_zero()) throw std::domain_error("Cyclotomic: inverse of zero");
  // extended Euclid: s * a + t * m = g, g a nonzero constant since m is irreducible
  Poly r0 = modulus_poly(n_), r1 = c_;
  Poly s0, s1 = {Rat(1)};
  while (!(r1.size() == 1)) {
    Poly q, r;
    poly_divmod(r0, r1, q, r);
    Poly s = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    if (r1.empty()) throw std::logic_error("Cyclotomic: modulus not irreducible");
  }
  Cyclotomic out(n_);
  Rat inv = 1 / r1[0];
  for (auto& x : s1) x *= inv;
  out.c_ = std::move(s1);
  out.reduce();
  return out;
}

Cyclotomic Cyclotomic::operator/(const Cyclotomic& o) const { return *this * o.inverse(); }

bool Cyclotomic::is_zero() const { return c_.empty(); }

bool Cyclotomic::is_rational() const { return c_.size() <= 1; }

Rat Cyclotomic::rational_value() const {
  if (!is_rational()) throw std::domain_error("Cyclotomic: value is not rational");
  return c_.empty() ? Rat(0) : c_[0];
}

std::complex<double> Cyclotomic::to_complex() const {
  std::complex<double> z = 0;
  for (size_t k = 0; k < c_.size(); ++k)
    z += c_[k].get_d() * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / n_);
  return z;
}

std::string Cyclotomic::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    Rat v = c_[k];
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    Rat a = abs(v);
    if (k == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "z" << n_;
      if (k > 1) os << "^" << k;
    }
    first = false;
  }
  return os.str();
}

void LocalPlaceData::validate() const {
  if (!is_prime_power(q)) throw std::invalid_argument("LocalPlaceData: q must be a prime power");
  if (chi_order == 0) throw std::invalid_argument("LocalPlaceData: character order must be positive");
  if (conductor_exponent < 0) throw std::invalid_argument("LocalPlaceData: negative conductor exponent");
}

namespace {

Rat q_power(uint64_t q, long e) {
  Int qq(std::to_string(q));
  Int p;
  mpz_pow_ui(p.get_mpz_t(), qq.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
  return e >= 0 ? Rat(p) : Rat(1) / Rat(p);
}

Cyclotomic one_minus_chi_q(const LocalPlaceData& v, long s) {
  Cyclotomic chi = chi_at_uniformizer(v);
  return Cyclotomic::rational(v.chi_order, 1) - chi * Cyclotomic::rational(v.chi_order, q_power(v.q, -s));
}

}  // namespace

Cyclotomic chi_at_uniformizer(const LocalPlaceData& v) {
  v.validate();
  return Cyclotomic::zeta_power(v.chi_order, v.chi_index) *
         Cyclotomic::rational(v.chi_order, q_power(v.q, -v.norm_exponent));
}

Cyclotomic local_L(const LocalPlaceData& v, long s) {
  v.validate();
  if (s < 2) throw std::invalid_argument("local_L: s must be at least 2");
  if (v.ramified()) return Cyclotomic::rational(v.chi_order, 1);
  return one_minus_chi_q(v, s).inverse();
}

Cyclotomic intertwining_ratio(const LocalPlaceData& v, int m) {
  v.validate();
  if (m < 2) throw std::invalid_argument("intertwining_ratio: m must be at least 2");
  if (v.ramified()) throw std::invalid_argument("intertwining_ratio: place is ramified");
  return one_minus_chi_q(v, m) / one_minus_chi_q(v, m - 1);
}

std::complex<double> local_L_partial_sum(const LocalPlaceData& v, long s, uint64_t terms) {
  std::complex<double> x = chi_at_uniformizer(v).to_complex() * std::pow(static_cast<double>(v.q), -static_cast<double>(s));
  std::complex<double> sum = 0, term = 1;
  for (uint64_t k = 0; k < terms; ++k) {
    sum += term;
    term *= x;
    if (std::abs(term) == 0) break;
  }
  return sum;
}

GaussianRational GaussianRational::operator*(const GaussianRational& o) const {
  return {re * o.re - im * o.im, re * o.im + im * o.re};
}

std::complex<double> CFunctionValue::value() const {
  return std::complex<double>(over_pi.re.get_d(), over_pi.im.get_d()) / std::numbers::pi;
}

CFunctionValue c_function(int m) {
  if (m < 0) throw std::invalid_argument("c_function: m must be nonnegative");
  CFunctionValue c;
  c.m = m;
  Rat a = m + 2, b = m;
  Rat den = a * a + b * b;
  c.over_pi.re = a / den;
  c.over_pi.im = -b / den;
  return c;
}

std::vector<HeckeRow> hecke_table(const std::vector<uint64_t>& qs, const std::vector<unsigned>& orders, int m_min,
                                  int m_max) {
  if (m_min < 2 || m_max < m_min) throw std::invalid_argument("hecke_table: need 2 <= m_min <= m_max");
  std::vector<HeckeRow> rows;
  for (uint64_t q : qs)
    for (unsigned n : orders)
      for (long k = 0; k < static_cast<long>(n); ++k)
        for (int m = m_min; m <= m_max; ++m) {
          LocalPlaceData v;
          v.q = q;
          v.chi_order = n;
          v.chi_index = k;
          Cyclotomic r = intertwining_ratio(v, m);
          rows.push_back({q, n, k, m, r.to_string(), r.to_complex()});
        }
  return rows;
}

}  // namespace bianchi
