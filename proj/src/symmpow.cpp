#include "bianchi/symmpow.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace bianchi {

OMatrix OMatrix::transpose() const {
  OMatrix t(n);
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) t(c, r) = (*this)(r, c);
  return t;
}

OMatrix omatrix_mul(const QuadField& F, const OMatrix& x, const OMatrix& y) {
  if (x.n != y.n) throw std::invalid_argument("omatrix_mul: size mismatch");
  OMatrix p(x.n);
  for (size_t r = 0; r < x.n; ++r)
    for (size_t k = 0; k < x.n; ++k) {
      if (x(r, k).is_zero()) continue;
      for (size_t c = 0; c < x.n; ++c)
        if (!y(k, c).is_zero()) p(r, c) = F.add(p(r, c), F.mul(x(r, k), y(k, c)));
    }
  return p;
}

OMatrix omatrix_identity(size_t n) {
  OMatrix m(n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

namespace {

// Coefficients (in powers of Y) of (p X + q Y)^k for k = 0..m.
template <class T, class Mul, class Add>
std::vector<std::vector<T>> linear_powers(const T& p, const T& q, int m, Mul mul, Add add) {
  std::vector<std::vector<T>> pw(m + 1);
  pw[0] = {T(1)};
  for (int k = 1; k <= m; ++k) {
    std::vector<T> next(k + 1, T(0));
    for (int i = 0; i < k; ++i) {
      next[i] = add(next[i], mul(pw[k - 1][i], p));
      next[i + 1] = add(next[i + 1], mul(pw[k - 1][i], q));
    }
    pw[k] = std::move(next);
  }
  return pw;
}

}  // namespace

OMatrix sym_power(const QuadField& F, const Mat2& g, int m) {
  if (m < 0) throw std::invalid_argument("sym_power: negative weight");
  auto mul = [&](const RingElement& x, const RingElement& y) { return F.mul(x, y); };
  auto add = [&](const RingElement& x, const RingElement& y) { return F.add(x, y); };
  // g e1 = alpha X + gamma Y, g e2 = beta X + delta Y
  auto A = linear_powers<RingElement>(g.e[0][0], g.e[1][0], m, mul, add);
  auto B = linear_powers<RingElement>(g.e[0][1], g.e[1][1], m, mul, add);
  OMatrix r(m + 1);
  for (int j = 0; j <= m; ++j) {
    const auto& a = A[m - j];
    const auto& b = B[j];
    for (size_t x = 0; x < a.size(); ++x) {
      if (a[x].is_zero()) continue;
      for (size_t y = 0; y < b.size(); ++y)
        if (!b[y].is_zero()) r(x + y, j) = F.add(r(x + y, j), F.mul(a[x], b[y]));
    }
  }
  return r;
}

IntMatrix sym_power_int(const IntMatrix& g, int m) {
  if (g.rows() != 2 || g.cols() != 2) throw std::invalid_argument("sym_power_int: expected 2x2");
  if (m < 0) throw std::invalid_argument("sym_power_int: negative weight");
  auto mul = [](const Int& x, const Int& y) { return Int(x * y); };
  auto add = [](const Int& x, const Int& y) { return Int(x + y); };
  auto A = linear_powers<Int>(g(0, 0), g(1, 0), m, mul, add);
  auto B = linear_powers<Int>(g(0, 1), g(1, 1), m, mul, add);
  IntMatrix r(m + 1, m + 1);
  for (int j = 0; j <= m; ++j)
    for (size_t x = 0; x < A[m - j].size(); ++x)
      for (size_t y = 0; y < B[j].size(); ++y) r(x + y, j) += A[m - j][x] * B[j][y];
  return r;
}

IntMatrix z_expand(const QuadField& F, const OMatrix& x) {
  IntMatrix z(2 * x.n, 2 * x.n);
  const Int t = F.omega_trace(), n = F.omega_norm();
  for (size_t r = 0; r < x.n; ++r)
    for (size_t c = 0; c < x.n; ++c) {
      const RingElement& e = x(r, c);
      if (e.is_zero()) continue;
      z(2 * r, 2 * c) = e.a;
      z(2 * r + 1, 2 * c) = e.b;
      z(2 * r, 2 * c + 1) = -e.b * n;
      z(2 * r + 1, 2 * c + 1) = e.a + e.b * t;
    }
  return z;
}

std::string to_string(LatticeKind k) {
  switch (k) {
    case LatticeKind::Standard: return "standard";
    case LatticeKind::Dual: return "dual";
    case LatticeKind::Barred: return "barred";
  }
  return "?";
}

LatticeRep::LatticeRep(const QuadField& F, int m, LatticeKind kind) : F_(F), m_(m), kind_(kind) {
  if (m < 0) throw std::invalid_argument("LatticeRep: negative weight");
}

OMatrix LatticeRep::action(const Mat2& g) const {
  if (kind_ == LatticeKind::Standard) return sym_power(F_, g, m_);
  OMatrix dual = sym_power(F_, mat_inv_sl2(F_, g), m_).transpose();
  if (kind_ == LatticeKind::Dual) return dual;
  OMatrix std_part = sym_power(F_, g, m_);
  size_t k = m_ + 1;
  OMatrix r(2 * k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      r(i, j) = std_part(i, j);
      r(k + i, k + j) = dual(i, j);
    }
  return r;
}

IntMatrix LatticeRep::z_action(const Mat2& g) const {
  if (kind_ == LatticeKind::Standard) return z_expand(F_, sym_power(F_, g, m_));
  IntMatrix dual = z_expand(F_, sym_power(F_, mat_inv_sl2(F_, g), m_)).transpose();
  if (kind_ == LatticeKind::Dual) return dual;
  IntMatrix std_part = z_expand(F_, sym_power(F_, g, m_));
  size_t k = std_part.rows();
  IntMatrix r(2 * k, 2 * k);
  r.set_block(0, 0, std_part);
  r.set_block(k, k, dual);
  return r;
}

double operator_norm(const QuadField& F, const OMatrix& x) {
  Eigen::MatrixXcd m(x.n, x.n);
  for (size_t r = 0; r < x.n; ++r)
    for (size_t c = 0; c < x.n; ++c) m(r, c) = F.embed(x(r, c));
  if (x.n == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

NormComparison compare_norms(const QuadField& F, const Mat2& g, int m, double rel_tol) {
  if (mat_det(F, g) != RingElement(1)) throw std::invalid_argument("compare_norms: determinant is not 1");
  NormComparison c;
  c.direct = operator_norm(F, sym_power(F, g, m));
  double n1 = sl2_operator_norm(F, g);
  c.rho1_power = std::pow(n1, m);
  c.binomial_bound = std::sqrt(binomial(m, m / 2).get_d()) * c.rho1_power;
  c.power_bound_holds = c.direct <= c.rho1_power * (1 + rel_tol);
  c.binomial_bound_holds = c.direct <= c.binomial_bound * (1 + rel_tol);
  return c;
}

Int factorial(int m) {
  if (m < 0) throw std::invalid_argument("factorial: negative argument");
  Int f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(m));
  return f;
}

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

RatMatrix LatticeInZBasis::rational_basis() const {
  RatMatrix r(basis);
  for (size_t i = 0; i < r.rows(); ++i)
    for (size_t j = 0; j < r.cols(); ++j) {
      r(i, j) /= denominator;
      r(i, j).canonicalize();
    }
  return r;
}

LatticeInZBasis make_lattice(int m, const RatMatrix& basis) {
  size_t n = static_cast<size_t>(m + 1);
  if (basis.rows() != n || basis.cols() != n) throw std::invalid_argument("make_lattice: basis must be square of size m+1");
  Int den = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), basis(i, j).get_den_mpz_t());
  IntMatrix b(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Rat v = basis(i, j) * den;
      v.canonicalize();
      b(i, j) = v.get_num();
    }
  ColumnHnf h = column_hnf(b);
  if (h.rank != n) throw std::invalid_argument("make_lattice: basis is singular");
  Int g = den;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) g = gcd(g, h.h(i, j));
  LatticeInZBasis L;
  L.m = m;
  L.basis = h.h;
  L.denominator = den / g;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) L.basis(i, j) /= g;
  return L;
}

LatticeInZBasis standard_lattice(int m) {
  if (m < 0) throw std::invalid_argument("standard_lattice: negative weight");
  return make_lattice(m, RatMatrix::identity(m + 1));
}

RatMatrix determinant_pairing(int m) {
  if (m < 0) throw std::invalid_argument("determinant_pairing: negative weight");
  RatMatrix g(m + 1, m + 1);
  for (int j = 0; j <= m; ++j) {
    Rat v(j % 2 ? -1 : 1, 1);
    v /= Rat(binomial(m, j));
    v.canonicalize();
    g(j, m - j) = v;
  }
  return g;
}

LatticeInZBasis dual_lattice(const LatticeInZBasis& L) {
  // {v : R^T G v integral} = (R^T G)^{-1} Z^n
  RatMatrix r = L.rational_basis();
  RatMatrix a = r.transpose() * determinant_pairing(L.m);
  return make_lattice(L.m, a.inverse());
}

LatticeInZBasis scale_lattice(const LatticeInZBasis& L, const Rat& s) {
  if (s == 0) throw std::invalid_argument("scale_lattice: zero scale");
  RatMatrix r = L.rational_basis();
  for (size_t i = 0; i < r.rows(); ++i)
    for (size_t j = 0; j < r.cols(); ++j) r(i, j) *= s;
  return make_lattice(L.m, r);
}

bool lattice_contains(const LatticeInZBasis& outer, const LatticeInZBasis& inner) {
  if (outer.m != inner.m) throw std::invalid_argument("lattice_contains: weights differ");
  RatMatrix t = outer.rational_basis().inverse() * inner.rational_basis();
  return t.is_integral();
}

bool lattice_invariant(const LatticeInZBasis& L, const std::vector<IntMatrix>& gens) {
  RatMatrix r = L.rational_basis();
  RatMatrix rinv = r.inverse();
  for (const auto& g : gens) {
    RatMatrix rho(sym_power_int(g, L.m));
    if (!(rinv * rho * r).is_integral()) return false;
  }
  return true;
}

namespace {

// gcd of numerators over lcm of denominators
Rat content(const RatMatrix& m) {
  Int num = 0, den = 1;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      num = gcd(num, m(i, j).get_num());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
  Rat c(num, den);
  c.canonicalize();
  return c;
}

}  // namespace

Sandwich lattice_sandwich(const LatticeInZBasis& L1, const LatticeInZBasis& L2) {
  if (L1.m != L2.m) throw std::invalid_argument("lattice_sandwich: weights differ");
  RatMatrix M = L1.rational_basis().inverse() * L2.rational_basis();
  Sandwich s;
  s.lower = 1 / content(M.inverse());
  s.upper = content(M);
  Rat r = s.upper / s.lower;
  Int f = factorial(L1.m);
  for (int k = 0; k <= 64; ++k) {
    if (r.get_den() == 1) {
      s.k = k;
      break;
    }
    if (f == 1) break;
    r *= f;
    r.canonicalize();
  }
  return s;
}

}  // namespace bianchi
