#include "bianchi/quadfield.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bianchi {

bool is_squarefree(long n) {
  if (n <= 0) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

QuadField::QuadField(long D) : D_(D) {
  if (D <= 0) throw std::invalid_argument("QuadField: D must be positive");
  if (!is_squarefree(D)) throw std::invalid_argument("QuadField: D must be squarefree");
  // -D = 1 mod 4  <=>  D = 3 mod 4
  if (D % 4 == 3) {
    disc_ = -D;
    t_ = 1;
    n_ = (1 + D) / 4;
  } else {
    disc_ = -4 * D;
    t_ = 0;
    n_ = D;
  }
}

std::string QuadField::omega_description() const {
  std::ostringstream os;
  if (t_ == 1)
    os << "(1+sqrt(-" << D_ << "))/2";
  else
    os << "sqrt(-" << D_ << ")";
  return os.str();
}

int QuadField::unit_count() const {
  if (D_ == 1) return 4;
  if (D_ == 3) return 6;
  return 2;
}

std::vector<RingElement> QuadField::units() const {
  std::vector<RingElement> u{RingElement(1), RingElement(-1)};
  if (D_ == 1) {
    u.emplace_back(0, 1);
    u.emplace_back(0, -1);
  } else if (D_ == 3) {
    u.emplace_back(0, 1);
    u.emplace_back(0, -1);
    u.emplace_back(-1, 1);
    u.emplace_back(1, -1);
  }
  return u;
}

int QuadField::class_number() const {
  // Reduced primitive forms (a, b, c) of discriminant disc.
  long d = disc_;
  int h = 0;
  for (long a = 1; 3 * a * a <= -d; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      if (((b - d) % 2 + 2) % 2 != 0) continue;
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      long g = std::gcd(std::gcd(a, std::labs(b)), c);
      if (g != 1) continue;
      ++h;
    }
  return h;
}

RingElement QuadField::add(const RingElement& x, const RingElement& y) const { return {x.a + y.a, x.b + y.b}; }
RingElement QuadField::sub(const RingElement& x, const RingElement& y) const { return {x.a - y.a, x.b - y.b}; }
RingElement QuadField::neg(const RingElement& x) const { return {-x.a, -x.b}; }

RingElement QuadField::mul(const RingElement& x, const RingElement& y) const {
  Int bb = x.b * y.b;
  RingElement r;
  r.a = x.a * y.a - n_ * bb;
  r.b = x.a * y.b + x.b * y.a + t_ * bb;
  return r;
}

RingElement QuadField::conj(const RingElement& x) const { return {x.a + t_ * x.b, -x.b}; }

RingElement QuadField::pow(RingElement x, unsigned e) const {
  RingElement r(1);
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

Int QuadField::norm(const RingElement& x) const { return x.a * x.a + t_ * x.a * x.b + n_ * x.b * x.b; }
Int QuadField::trace(const RingElement& x) const { return 2 * x.a + t_ * x.b; }
bool QuadField::is_unit(const RingElement& x) const { return norm(x) == 1; }

RingElement QuadField::divexact(const RingElement& x, const RingElement& y) const {
  Int ny = norm(y);
  if (ny == 0) throw std::domain_error("divexact: division by zero");
  RingElement p = mul(x, conj(y));
  if (p.a % ny != 0 || p.b % ny != 0) throw std::domain_error("divexact: quotient not integral");
  return {p.a / ny, p.b / ny};
}

std::complex<double> QuadField::embed(const RingElement& x) const {
  double re = 0.5 * static_cast<double>(t_);
  double im = 0.5 * std::sqrt(static_cast<double>(4 * n_ - t_ * t_));
  return {x.a.get_d() + x.b.get_d() * re, x.b.get_d() * im};
}

std::string QuadField::format(const RingElement& x) const {
  std::ostringstream os;
  if (x.b == 0) {
    os << x.a;
  } else {
    if (x.a != 0) os << x.a << (x.b > 0 ? "+" : "-");
    else if (x.b < 0) os << "-";
    Int ab = abs(x.b);
    if (ab != 1) os << ab << "*";
    os << "w";
  }
  return os.str();
}

IntMatrix QuadField::mult_matrix(const RingElement& x) const {
  // x*1 = a + b w ; x*w = -b n + (a + b t) w
  IntMatrix m(2, 2);
  m(0, 0) = x.a;
  m(1, 0) = x.b;
  m(0, 1) = -x.b * n_;
  m(1, 1) = x.a + x.b * t_;
  return m;
}

RingIdeal RingIdeal::from_generators(const QuadField& F, const std::vector<RingElement>& gens) {
  // Rows ordered (b, a) so the column HNF exposes the integer n last.
  IntMatrix m(2, 2 * gens.size());
  RingElement w(0, 1);
  for (size_t i = 0; i < gens.size(); ++i) {
    RingElement gw = F.mul(gens[i], w);
    m(0, 2 * i) = gens[i].b;
    m(1, 2 * i) = gens[i].a;
    m(0, 2 * i + 1) = gw.b;
    m(1, 2 * i + 1) = gw.a;
  }
  ColumnHnf h = column_hnf(m);
  if (h.rank != 2) throw std::invalid_argument("RingIdeal: zero ideal");
  RingIdeal I;
  I.h_ = h.h(0, 0);
  I.s_ = h.h(1, 0);
  I.n_ = h.h(1, 1);
  return I;
}

RingIdeal RingIdeal::principal(const QuadField& F, const RingElement& x) {
  if (x.is_zero()) throw std::invalid_argument("RingIdeal: zero ideal");
  return from_generators(F, {x});
}

bool RingIdeal::contains(const RingElement& x) const {
  if (x.b % h_ != 0) return false;
  Int k = x.b / h_;
  return (x.a - k * s_) % n_ == 0;
}

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

Int parse_int(const std::string& s, const std::string& whole) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("parse_ring_element: malformed '" + whole + "'");
  return Int(s);
}

}  // namespace

RingElement parse_ring_element(const std::string& text) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw std::invalid_argument("parse_ring_element: empty input");
  RingElement x;
  size_t i = 0;
  bool seen_a = false, seen_b = false;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw std::invalid_argument("parse_ring_element: malformed '" + text + "'");
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    i = j;
    if (!term.empty() && term.back() == 'w') {
      if (seen_b) throw std::invalid_argument("parse_ring_element: repeated omega term in '" + text + "'");
      seen_b = true;
      term.pop_back();
      if (!term.empty() && term.back() == '*') term.pop_back();
      x.b = sign * (term.empty() ? Int(1) : parse_int(term, text));
    } else {
      if (seen_a) throw std::invalid_argument("parse_ring_element: repeated constant term in '" + text + "'");
      seen_a = true;
      x.a = sign * parse_int(term, text);
    }
  }
  return x;
}

RingIdeal parse_ideal(const QuadField& F, const std::string& text) {
  std::string s = strip_spaces(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<RingElement> gens;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) gens.push_back(parse_ring_element(part));
  if (gens.empty()) throw std::invalid_argument("parse_ideal: no generators in '" + text + "'");
  return RingIdeal::from_generators(F, gens);
}

std::string RingIdeal::to_string() const {
  std::ostringstream os;
  os << "<" << n_ << ", " << s_ << "+" << h_ << "w>";
  return os.str();
}

ResidueRing::ResidueRing(const QuadField& F, const RingIdeal& ideal) : ideal_(ideal) {
  Int N = ideal.norm();
  if (N > (1 << 24)) throw std::invalid_argument("ResidueRing: ideal norm too large");
  n_ = ideal.n().get_si();
  s_ = ideal.s().get_si();
  h_ = ideal.h().get_si();
  t_ = F.omega_trace();
  nw_ = F.omega_norm();
  size_ = static_cast<uint32_t>(N.get_ui());
  one_ = label(1, 0);
}

uint32_t ResidueRing::label(int64_t a, int64_t b) const {
  int64_t bp = ((b % h_) + h_) % h_;
  int64_t k = (b - bp) / h_;
  int64_t ap = (((a - k * s_) % n_) + n_) % n_;
  return static_cast<uint32_t>(bp * n_ + ap);
}

uint32_t ResidueRing::reduce(const RingElement& x) const {
  Int b = x.b % h_;
  if (b < 0) b += h_;
  Int k = (x.b - b) / h_;
  Int a = (x.a - k * s_) % n_;
  if (a < 0) a += n_;
  return static_cast<uint32_t>(b.get_si() * n_ + a.get_si());
}

RingElement ResidueRing::lift(uint32_t label) const { return {Int(static_cast<long>(label % n_)), Int(static_cast<long>(label / n_))}; }

uint32_t ResidueRing::add(uint32_t x, uint32_t y) const {
  return label(static_cast<int64_t>(x % n_) + y % n_, static_cast<int64_t>(x / n_) + y / n_);
}

uint32_t ResidueRing::sub(uint32_t x, uint32_t y) const {
  return label(static_cast<int64_t>(x % n_) - static_cast<int64_t>(y % n_),
               static_cast<int64_t>(x / n_) - static_cast<int64_t>(y / n_));
}

uint32_t ResidueRing::neg(uint32_t x) const { return sub(0, x); }

uint32_t ResidueRing::mul(uint32_t x, uint32_t y) const {
  int64_t a1 = x % n_, b1 = x / n_, a2 = y % n_, b2 = y / n_;
  int64_t bb = b1 * b2;
  return label(a1 * a2 - nw_ * bb, a1 * b2 + a2 * b1 + t_ * bb);
}

bool ResidueRing::is_unit(uint32_t x) const {
  for (uint32_t y = 0; y < size_; ++y)
    if (mul(x, y) == one_) return true;
  return false;
}

uint32_t ResidueRing::unit_count() const {
  uint32_t c = 0;
  for (uint32_t x = 0; x < size_; ++x)
    if (is_unit(x)) ++c;
  return c;
}

uint32_t ResidueRing::idempotent_count() const {
  uint32_t c = 0;
  for (uint32_t x = 0; x < size_; ++x)
    if (mul(x, x) == x) ++c;
  return c;
}

bool Mat2::operator==(const Mat2& o) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (e[i][j] != o.e[i][j]) return false;
  return true;
}

Mat2 mat_mul(const QuadField& F, const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = F.add(F.mul(x.e[i][0], y.e[0][j]), F.mul(x.e[i][1], y.e[1][j]));
  return r;
}

RingElement mat_det(const QuadField& F, const Mat2& x) {
  return F.sub(F.mul(x.e[0][0], x.e[1][1]), F.mul(x.e[0][1], x.e[1][0]));
}

Mat2 mat_inv_sl2(const QuadField& F, const Mat2& x) {
  if (mat_det(F, x) != RingElement(1)) throw std::domain_error("mat_inv_sl2: determinant is not 1");
  Mat2 r;
  r.e[0][0] = x.e[1][1];
  r.e[1][1] = x.e[0][0];
  r.e[0][1] = F.neg(x.e[0][1]);
  r.e[1][0] = F.neg(x.e[1][0]);
  return r;
}

Int mat_frobenius_sq(const QuadField& F, const Mat2& x) {
  Int s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += F.norm(x.e[i][j]);
  return s;
}

double sl2_operator_norm(const QuadField& F, const Mat2& x) {
  // sigma_max^2 = (f + sqrt(f^2 - 4)) / 2 with f = |x|_F^2 and |det| = 1.
  long double f = mpz_get_d(mat_frobenius_sq(F, x).get_mpz_t());
  long double disc = f * f - 4;
  if (disc < 0) disc = 0;
  long double s2 = (f + std::sqrt(disc)) / 2;
  double s = static_cast<double>(std::sqrt(s2));
  return s * (1 + 8 * std::numeric_limits<double>::epsilon());
}

bool mat_congruent_identity(const QuadField& F, const Mat2& x, const RingIdeal& a) {
  Mat2 d = x;
  d.e[0][0] = F.sub(d.e[0][0], RingElement(1));
  d.e[1][1] = F.sub(d.e[1][1], RingElement(1));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!a.contains(d.e[i][j])) return false;
  return true;
}

std::string mat_format(const QuadField& F, const Mat2& x) {
  return "[[" + F.format(x.e[0][0]) + ", " + F.format(x.e[0][1]) + "], [" + F.format(x.e[1][0]) + ", " +
         F.format(x.e[1][1]) + "]]";
}

ZetaValue dirichlet_l2(const QuadField& F, uint64_t periods) {
  if (periods == 0) throw std::invalid_argument("dirichlet_l2: truncation length must be positive");
  const long d = std::labs(F.discriminant());
  Int disc(F.discriminant());
  std::vector<int> chi(d + 1);
  long double m1 = 0;
  for (long a = 1; a <= d; ++a) {
    chi[a] = mpz_kronecker_si(disc.get_mpz_t(), a);
    m1 += static_cast<long double>(a) * chi[a];
  }
  long double sum = 0, comp = 0;
  for (uint64_t k = 0; k < periods; ++k) {
    long double base = static_cast<long double>(k) * d;
    for (long a = 1; a <= d; ++a) {
      if (!chi[a]) continue;
      long double x = base + a;
      long double term = chi[a] / (x * x);
      long double y = term - comp;
      long double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  // Tail: sum over k >= K of -2 M1 / (k d)^3 plus a remainder bounded by
  // 3 / (d k^4) per period; the Hurwitz sum of k^-3 uses Euler-Maclaurin.
  long double K = static_cast<long double>(periods);
  long double h3 = 1 / (2 * K * K) + 1 / (2 * K * K * K) + 1 / (4 * K * K * K * K);
  long double dd = static_cast<long double>(d);
  sum += -2 * m1 / (dd * dd * dd) * h3;
  long double em_err = 2 * std::fabs(m1) / (dd * dd * dd) * (1 / (12 * std::pow(K, 6)));
  long double rem = 3 / dd * (1 / (K * K * K * K) + 1 / (3 * K * K * K));
  long double rounding = 4 * std::numeric_limits<long double>::epsilon() * 2 + 1e-18L;
  return {static_cast<double>(sum), static_cast<double>(rem + em_err + rounding), periods * static_cast<uint64_t>(d)};
}

ZetaValue zeta_at_2(const QuadField& F, int digits) {
  if (digits < 1 || digits > 15) throw std::invalid_argument("zeta_at_2: precision must be between 1 and 15 digits");
  const long double zeta2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6;
  long double eps = std::pow(10.0L, -digits);
  long double d = std::labs(F.discriminant());
  // remainder bound ~ (3/d)(4/3)/K^3 after scaling by zeta(2)
  uint64_t K = static_cast<uint64_t>(std::ceil(std::cbrt(4 * zeta2 * 2 / (d * eps)))) + 2;
  ZetaValue l = dirichlet_l2(F, K);
  return {static_cast<double>(zeta2 * l.value), static_cast<double>(zeta2 * l.error_bound), l.terms};
}

double bianchi_covolume(const QuadField& F, int digits) {
  ZetaValue z = zeta_at_2(F, digits);
  double d = std::fabs(static_cast<double>(F.discriminant()));
  return std::pow(d, 1.5) * z.value / (4 * std::numbers::pi * std::numbers::pi);
}

}  // namespace bianchi
