#include "bianchi/modular.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bianchi {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 inverse(u64 a, u64 p) { return powmod(a, p - 2, p); }

std::vector<u64> reduce(const IntMatrix& a, u64 p) {
  std::vector<u64> out(a.rows() * a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      u64 r = mpz_fdiv_ui(a(i, j).get_mpz_t(), p);
      out[i * a.cols() + j] = r;
    }
  return out;
}

u64 det_mod_p(const IntMatrix& a, u64 p) {
  const size_t n = a.rows();
  std::vector<u64> m = reduce(a, p);
  u64 det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = n;
    for (size_t r = c; r < n; ++r)
      if (m[r * n + c]) {
        piv = r;
        break;
      }
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      det = p - det;
    }
    u64 pv = m[c * n + c];
    det = mulmod(det, pv, p);
    u64 inv = inverse(pv, p);
    for (size_t r = c + 1; r < n; ++r) {
      u64 f = m[r * n + c];
      if (!f) continue;
      f = mulmod(f, inv, p);
      u64* dst = &m[r * n];
      const u64* src = &m[c * n];
      for (size_t j = c; j < n; ++j) {
        if (!src[j]) continue;
        u64 s = mulmod(f, src[j], p);
        dst[j] = dst[j] >= s ? dst[j] - s : dst[j] + p - s;
      }
    }
  }
  return det;
}

// Extended gcd on nonnegative a, b not both zero: s*a + t*b = g.
void xgcd(Int& g, Int& s, Int& t, const Int& a, const Int& b) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

}  // namespace

RankProfile rank_profile_mod_p(const IntMatrix& a, uint64_t p) {
  const size_t nr = a.rows(), nc = a.cols();
  std::vector<u64> m = reduce(a, p);
  std::vector<size_t> row_id(nr);
  for (size_t i = 0; i < nr; ++i) row_id[i] = i;
  RankProfile prof;
  size_t r = 0;
  for (size_t c = 0; c < nc && r < nr; ++c) {
    size_t piv = nr;
    for (size_t i = r; i < nr; ++i)
      if (m[i * nc + c]) {
        piv = i;
        break;
      }
    if (piv == nr) continue;
    if (piv != r) {
      for (size_t j = 0; j < nc; ++j) std::swap(m[r * nc + j], m[piv * nc + j]);
      std::swap(row_id[r], row_id[piv]);
    }
    u64 inv = inverse(m[r * nc + c], p);
    for (size_t i = r + 1; i < nr; ++i) {
      u64 f = m[i * nc + c];
      if (!f) continue;
      f = mulmod(f, inv, p);
      for (size_t j = c; j < nc; ++j) {
        u64 s = m[r * nc + j];
        if (!s) continue;
        s = mulmod(f, s, p);
        u64& d = m[i * nc + j];
        d = d >= s ? d - s : d + p - s;
      }
    }
    prof.rows.push_back(row_id[r]);
    prof.cols.push_back(c);
    ++r;
  }
  std::sort(prof.rows.begin(), prof.rows.end());
  return prof;
}

double hadamard_log2(const IntMatrix& a) {
  double total = 0;
  for (size_t i = 0; i < a.rows(); ++i) {
    Int s = 0;
    for (size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    if (s == 0) return -INFINITY;
    long e = 0;
    double mant = mpz_get_d_2exp(&e, s.get_mpz_t());
    total += 0.5 * (std::log2(mant) + static_cast<double>(e));
  }
  return total;
}

Int determinant_multimodular(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("determinant_multimodular: matrix not square");
  if (a.rows() == 0) return 1;
  double bound = hadamard_log2(a);
  if (bound == -INFINITY) return 0;
  const double need = bound + 2;
  Int value = 0, modulus = 1;
  Int prime = Int(1) << 62;
  double have = 0;
  while (have < need) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    u64 p = mpz_get_ui(prime.get_mpz_t());
    u64 r = det_mod_p(a, p);
    // value += modulus * ((r - value) * modulus^-1 mod p)
    u64 vp = mpz_fdiv_ui(value.get_mpz_t(), p);
    u64 mp = mpz_fdiv_ui(modulus.get_mpz_t(), p);
    u64 diff = r >= vp ? r - vp : r + p - vp;
    u64 k = mulmod(diff, inverse(mp, p), p);
    value += modulus * Int(static_cast<unsigned long>(k));
    modulus *= prime;
    have += std::log2(static_cast<double>(p));
  }
  // symmetric residue
  Int half = modulus / 2;
  if (value > half) value -= modulus;
  return value;
}

std::vector<Int> smith_diagonal_mod(const IntMatrix& input, const Int& M) {
  if (M < 2) throw std::invalid_argument("smith_diagonal_mod: modulus must be at least 2");
  const size_t nr = input.rows(), nc = input.cols();
  std::vector<std::vector<Int>> a(nr, std::vector<Int>(nc));
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) mpz_fdiv_r(a[i][j].get_mpz_t(), input(i, j).get_mpz_t(), M.get_mpz_t());

  auto reduce_m = [&](Int& x) { mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t()); };
  Int g, s, t, u, v, x, y, q;

  const size_t n = std::min(nr, nc);
  std::vector<Int> diag;
  diag.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    // pivot: smallest nonzero representative in the trailing block
    size_t pr = nr, pc = nc;
    for (size_t i = k; i < nr; ++i)
      for (size_t j = k; j < nc; ++j)
        if (a[i][j] != 0 && (pr == nr || a[i][j] < a[pr][pc])) {
          pr = i;
          pc = j;
        }
    if (pr == nr) {
      for (size_t rest = k; rest < n; ++rest) diag.push_back(M);
      break;
    }
    std::swap(a[k], a[pr]);
    if (pc != k)
      for (size_t i = k; i < nr; ++i) std::swap(a[i][k], a[i][pc]);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      // rows
      for (size_t i = k + 1; i < nr; ++i) {
        if (a[i][k] == 0) continue;
        const Int& p = a[k][k];
        if (mpz_divisible_p(a[i][k].get_mpz_t(), p.get_mpz_t())) {
          mpz_divexact(q.get_mpz_t(), a[i][k].get_mpz_t(), p.get_mpz_t());
          for (size_t j = k; j < nc; ++j) {
            if (a[k][j] == 0) continue;
            mpz_submul(a[i][j].get_mpz_t(), q.get_mpz_t(), a[k][j].get_mpz_t());
            reduce_m(a[i][j]);
          }
          continue;
        }
        xgcd(g, s, t, p, a[i][k]);
        mpz_divexact(u.get_mpz_t(), a[i][k].get_mpz_t(), g.get_mpz_t());
        mpz_divexact(v.get_mpz_t(), p.get_mpz_t(), g.get_mpz_t());
        for (size_t j = k; j < nc; ++j) {
          x = s * a[k][j] + t * a[i][j];
          y = v * a[i][j] - u * a[k][j];
          reduce_m(x);
          reduce_m(y);
          a[k][j] = std::move(x);
          a[i][j] = std::move(y);
        }
      }
      // columns
      for (size_t j = k + 1; j < nc; ++j) {
        if (a[k][j] == 0) continue;
        const Int p = a[k][k];
        if (mpz_divisible_p(a[k][j].get_mpz_t(), p.get_mpz_t())) {
          mpz_divexact(q.get_mpz_t(), a[k][j].get_mpz_t(), p.get_mpz_t());
          for (size_t i = k; i < nr; ++i) {
            if (a[i][k] == 0) continue;
            mpz_submul(a[i][j].get_mpz_t(), q.get_mpz_t(), a[i][k].get_mpz_t());
            reduce_m(a[i][j]);
          }
          continue;
        }
        xgcd(g, s, t, p, a[k][j]);
        mpz_divexact(u.get_mpz_t(), a[k][j].get_mpz_t(), g.get_mpz_t());
        mpz_divexact(v.get_mpz_t(), p.get_mpz_t(), g.get_mpz_t());
        for (size_t i = k; i < nr; ++i) {
          x = s * a[i][k] + t * a[i][j];
          y = v * a[i][j] - u * a[i][k];
          reduce_m(x);
          reduce_m(y);
          a[i][k] = std::move(x);
          a[i][j] = std::move(y);
        }
        for (size_t i = k + 1; i < nr && !dirty; ++i)
          if (a[i][k] != 0) dirty = true;
      }
    }
    // xgcd steps never send the pivot to zero
    Int d;
    mpz_gcd(d.get_mpz_t(), a[k][k].get_mpz_t(), M.get_mpz_t());
    diag.push_back(d);
    a[k].clear();
    a[k].shrink_to_fit();
  }
  // The elimination leaves a diagonal whose entries need not divide each
  // other; e.g. diag(2, 3) over Z/12 is Smith form diag(1, 6).
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i + 1; j < diag.size(); ++j) {
      if (diag[j] % diag[i] == 0) continue;
      Int d = gcd(diag[i], diag[j]);
      diag[j] = diag[i] / d * diag[j];
      diag[i] = std::move(d);
    }
  return diag;
}

}  // namespace bianchi
