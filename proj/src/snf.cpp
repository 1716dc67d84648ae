#include "bianchi/snf.hpp"

#include "bianchi/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bianchi {

namespace {
int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
}  // namespace

std::vector<Int> SnfResult::torsion_factors() const {
  std::vector<Int> t;
  for (const auto& d : invariant_factors)
    if (d > 1) t.push_back(d);
  return t;
}

double log_int(const Int& x) {
  if (x <= 0) throw std::domain_error("log_int: non-positive argument");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

std::vector<Int> normalize_diagonal(std::vector<Int> diag) {
  for (auto& d : diag) {
    if (d == 0) throw std::invalid_argument("normalize_diagonal: zero entry");
    d = abs(d);
  }
  std::vector<Int> ones;
  std::vector<Int> rest;
  for (auto& d : diag) (d == 1 ? ones : rest).push_back(std::move(d));
  // Repeated gcd/lcm passes: after pass k, rest[k] divides every later entry.
  for (size_t i = 0; i < rest.size(); ++i)
    for (size_t j = i + 1; j < rest.size(); ++j) {
      if (rest[j] % rest[i] == 0) continue;
      Int g = gcd(rest[i], rest[j]);
      Int l = rest[i] / g * rest[j];
      rest[i] = g;
      rest[j] = l;
    }
  std::vector<Int> out;
  out.reserve(ones.size() + rest.size());
  for (auto& d : rest)
    if (d == 1) out.push_back(1);
  for (auto& d : ones) out.push_back(std::move(d));
  for (auto& d : rest)
    if (d != 1) out.push_back(std::move(d));
  return out;
}

namespace {

// Quotient of v by p rounded to nearest.
Int nearest_quotient(const Int& v, const Int& p) {
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  if (r != 0) {
    Int twice = 2 * abs(r);
    if (twice > abs(p)) {
      if ((sgn(r) > 0) == (sgn(p) > 0))
        q += 1;
      else
        q -= 1;
    }
  }
  return q;
}

class IntEliminator {
 public:
  struct E {
    uint32_t col;
    Int v;
  };

  IntEliminator(std::vector<std::vector<E>> rows, size_t ncols, PivotStrategy strategy, bool units_only = false)
      : rows_(std::move(rows)), ncols_(ncols), strategy_(strategy), units_only_(units_only) {
    col_rows_.resize(ncols_);
    col_count_.assign(ncols_, 0);
    row_active_.assign(rows_.size(), 1);
    col_active_.assign(ncols_, 1);
    stamp_.assign(rows_.size(), 0);
    for (uint32_t r = 0; r < rows_.size(); ++r)
      for (const auto& e : rows_[r]) {
        col_rows_[e.col].push_back(r);
        ++col_count_[e.col];
      }
    for (uint32_t c = 0; c < ncols_; ++c)
      if (col_count_[c]) queue_.insert({col_count_[c], c});
  }

  void run() {
    while (true) {
      auto piv = choose_pivot();
      if (!piv) break;
      eliminate(piv->first, piv->second);
    }
  }

  // Active part after run(), with columns renumbered consecutively.
  SparseIntMatrix remaining() const {
    std::vector<int64_t> cmap(ncols_, -1);
    size_t nc = 0;
    for (uint32_t c = 0; c < ncols_; ++c)
      if (col_active_[c]) cmap[c] = static_cast<int64_t>(nc++);
    size_t nr = 0;
    for (uint32_t r = 0; r < rows_.size(); ++r)
      if (row_active_[r] && !rows_[r].empty()) ++nr;
    SparseIntMatrix out(nr, nc);
    size_t k = 0;
    for (uint32_t r = 0; r < rows_.size(); ++r) {
      if (!row_active_[r] || rows_[r].empty()) continue;
      for (const auto& e : rows_[r]) out.set(k, static_cast<size_t>(cmap[e.col]), e.v);
      ++k;
    }
    return out;
  }

  std::vector<Int> diagonal;
  size_t rank = 0;
  size_t max_bits = 0;
  size_t euclid_steps = 0;

 private:
  std::vector<std::vector<E>> rows_;
  size_t ncols_;
  PivotStrategy strategy_;
  bool units_only_;
  std::vector<std::vector<uint32_t>> col_rows_;
  std::vector<uint32_t> col_count_;
  std::vector<char> row_active_, col_active_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;
  std::set<std::pair<uint32_t, uint32_t>> queue_;

  void set_count(uint32_t c, uint32_t n) {
    if (col_count_[c]) queue_.erase({col_count_[c], c});
    col_count_[c] = n;
    if (n && col_active_[c]) queue_.insert({n, c});
  }

  const Int* find(uint32_t r, uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const E& e, uint32_t col) { return e.col < col; });
    if (it != row.end() && it->col == c) return &it->v;
    return nullptr;
  }

  // Compacts col_rows_[c] to the active rows that currently hold column c.
  const std::vector<uint32_t>& live_rows(uint32_t c) {
    ++epoch_;
    auto& v = col_rows_[c];
    size_t w = 0;
    for (uint32_t r : v) {
      if (!row_active_[r] || stamp_[r] == epoch_) continue;
      if (!find(r, c)) continue;
      stamp_[r] = epoch_;
      v[w++] = r;
    }
    v.resize(w);
    return v;
  }

  // row k -= q * row i
  void row_sub(uint32_t k, uint32_t i, const Int& q) {
    ++euclid_steps;
    auto& a = rows_[k];
    const auto& b = rows_[i];
    std::vector<E> out;
    out.reserve(a.size() + b.size());
    size_t x = 0, y = 0;
    while (x < a.size() || y < b.size()) {
      if (y == b.size() || (x < a.size() && a[x].col < b[y].col)) {
        out.push_back(std::move(a[x++]));
      } else if (x == a.size() || b[y].col < a[x].col) {
        E e{b[y].col, 0};
        mpz_submul(e.v.get_mpz_t(), q.get_mpz_t(), b[y].v.get_mpz_t());
        col_rows_[e.col].push_back(k);
        set_count(e.col, col_count_[e.col] + 1);
        track_bits(e.v);
        out.push_back(std::move(e));
        ++y;
      } else {
        E e{a[x].col, std::move(a[x].v)};
        mpz_submul(e.v.get_mpz_t(), q.get_mpz_t(), b[y].v.get_mpz_t());
        if (e.v == 0) {
          set_count(e.col, col_count_[e.col] - 1);
        } else {
          track_bits(e.v);
          out.push_back(std::move(e));
        }
        ++x;
        ++y;
      }
    }
    rows_[k] = std::move(out);
  }

  void track_bits(const Int& v) {
    size_t b = mpz_sizeinbase(v.get_mpz_t(), 2);
    if (b > max_bits) max_bits = b;
  }

  void retire_row(uint32_t i) {
    for (const auto& e : rows_[i]) set_count(e.col, col_count_[e.col] - 1);
    rows_[i].clear();
    rows_[i].shrink_to_fit();
    row_active_[i] = 0;
  }

  void retire_col(uint32_t c) {
    if (col_count_[c]) queue_.erase({col_count_[c], c});
    col_active_[c] = 0;
    col_rows_[c].clear();
    col_rows_[c].shrink_to_fit();
  }

  std::optional<std::pair<uint32_t, uint32_t>> choose_pivot() {
    if (queue_.empty()) return std::nullopt;
    if (strategy_ == PivotStrategy::MinDegree) {
      uint32_t c = queue_.begin()->second;
      const auto& rs = live_rows(c);
      if (rs.empty()) throw std::logic_error("smith_form: column count out of sync");
      uint32_t best = rs.front();
      for (uint32_t r : rs) {
        const Int& v = *find(r, c);
        const Int& bv = *find(best, c);
        int cmp = cmpabs(v, bv);
        if (cmp < 0 || (cmp == 0 && rows_[r].size() < rows_[best].size())) best = r;
      }
      return std::make_pair(best, c);
    }
    // Minimal magnitude, ties broken by Markowitz cost. Columns are visited by
    // increasing length; once a unit is found only columns of equal length are
    // still examined.
    bool have = false;
    uint32_t bi = 0, bc = 0, bcount = 0;
    size_t bcost = 0;
    const Int* bval = nullptr;
    for (const auto& [count, c] : queue_) {
      if (have && cmpabs(*bval, 1) == 0 && count > bcount) break;
      const auto& rs = live_rows(c);
      for (uint32_t r : rs) {
        const Int* v = find(r, c);
        size_t cost = (rows_[r].size() - 1) * (count - 1);
        int cmp = have ? cmpabs(*v, *bval) : -1;
        if (cmp < 0 || (cmp == 0 && cost < bcost)) {
          have = true;
          bi = r;
          bc = c;
          bcount = count;
          bcost = cost;
          bval = v;
        }
      }
    }
    if (!have) return std::nullopt;
    if (units_only_ && cmpabs(*bval, 1) != 0) return std::nullopt;
    return std::make_pair(bi, bc);
  }

  void eliminate(uint32_t i, uint32_t j) {
    while (true) {
      Int p = *find(i, j);
      bool remainder = false;
      std::vector<uint32_t> rs = live_rows(j);
      for (uint32_t k : rs) {
        if (k == i) continue;
        Int q = nearest_quotient(*find(k, j), p);
        if (q != 0) row_sub(k, i, q);
        if (find(k, j)) remainder = true;
      }
      if (remainder) {
        const auto& rs2 = live_rows(j);
        uint32_t best = i;
        for (uint32_t k : rs2)
          if (cmpabs(*find(k, j), *find(best, j)) < 0) best = k;
        i = best;
        continue;
      }
      if (cmpabs(p, 1) != 0) {
        // Column ops against the now isolated column j only touch row i.
        auto& row = rows_[i];
        std::vector<E> kept;
        kept.reserve(row.size());
        for (auto& e : row) {
          if (e.col != j) {
            Int q = nearest_quotient(e.v, p);
            if (q != 0) mpz_submul(e.v.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
            if (e.v == 0) {
              set_count(e.col, col_count_[e.col] - 1);
              continue;
            }
          }
          kept.push_back(std::move(e));
        }
        row = std::move(kept);
        if (row.size() > 1) {
          uint32_t nj = j;
          for (const auto& e : row)
            if (e.col != j && (nj == j || cmpabs(e.v, *find(i, nj)) < 0)) nj = e.col;
          j = nj;
          continue;
        }
      }
      diagonal.push_back(abs(p));
      ++rank;
      retire_row(i);
      retire_col(j);
      return;
    }
  }
};

// Union-find over rows and columns: row r is node r, column c is node nrows + c.
std::vector<std::vector<uint32_t>> row_components(const SparseIntMatrix& m) {
  size_t n = m.rows() + m.cols();
  std::vector<uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (uint32_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) {
      uint32_t a = root(r), b = root(static_cast<uint32_t>(m.rows() + e.col));
      if (a != b) parent[a] = b;
    }
  std::vector<int64_t> index(n, -1);
  std::vector<std::vector<uint32_t>> comps;
  for (uint32_t r = 0; r < m.rows(); ++r) {
    if (m.row(r).empty()) continue;
    uint32_t x = root(r);
    if (index[x] < 0) {
      index[x] = static_cast<int64_t>(comps.size());
      comps.emplace_back();
    }
    comps[index[x]].push_back(r);
  }
  return comps;
}

class ModpRank {
 public:
  ModpRank(const SparseIntMatrix& m, uint64_t p) : p_(p), rows_(m.rows()), col_rows_(m.cols()) {
    for (uint32_t r = 0; r < m.rows(); ++r) {
      for (const auto& e : m.row(r)) {
        Int v = e.value % Int(static_cast<unsigned long>(p));
        if (v < 0) v += static_cast<unsigned long>(p);
        uint64_t x = v.get_ui();
        if (x) {
          rows_[r].push_back({e.col, x});
          col_rows_[e.col].push_back(r);
        }
      }
    }
    alive_.assign(m.rows(), 1);
    stamp_.assign(m.rows(), 0);
  }

  size_t run() {
    size_t rank = 0;
    std::vector<uint32_t> cols(col_rows_.size());
    std::iota(cols.begin(), cols.end(), 0);
    // Static column order by initial length keeps the fill small enough here.
    std::sort(cols.begin(), cols.end(),
              [&](uint32_t a, uint32_t b) { return col_rows_[a].size() < col_rows_[b].size(); });
    for (uint32_t c : cols) {
      auto rs = live(c);
      if (rs.empty()) continue;
      uint32_t piv = rs.front();
      for (uint32_t r : rs)
        if (rows_[r].size() < rows_[piv].size()) piv = r;
      uint64_t inv = inverse(value(piv, c));
      for (uint32_t r : rs) {
        if (r == piv) continue;
        uint64_t f = mulmod(value(r, c), inv);
        sub_row(r, piv, f);
      }
      alive_[piv] = 0;
      ++rank;
    }
    return rank;
  }

 private:
  struct E {
    uint32_t col;
    uint64_t v;
  };
  uint64_t p_;
  std::vector<std::vector<E>> rows_;
  std::vector<std::vector<uint32_t>> col_rows_;
  std::vector<char> alive_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;

  uint64_t mulmod(uint64_t a, uint64_t b) const { return static_cast<unsigned __int128>(a) * b % p_; }
  uint64_t inverse(uint64_t a) const {
    uint64_t r = 1, e = p_ - 2;
    while (e) {
      if (e & 1) r = mulmod(r, a);
      a = mulmod(a, a);
      e >>= 1;
    }
    return r;
  }
  uint64_t value(uint32_t r, uint32_t c) const {
    const auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const E& e, uint32_t col) { return e.col < col; });
    return (it != row.end() && it->col == c) ? it->v : 0;
  }
  std::vector<uint32_t> live(uint32_t c) {
    ++epoch_;
    std::vector<uint32_t> out;
    for (uint32_t r : col_rows_[c]) {
      if (!alive_[r] || stamp_[r] == epoch_ || value(r, c) == 0) continue;
      stamp_[r] = epoch_;
      out.push_back(r);
    }
    col_rows_[c] = out;
    return out;
  }
  void sub_row(uint32_t k, uint32_t i, uint64_t f) {
    const auto& a = rows_[k];
    const auto& b = rows_[i];
    std::vector<E> out;
    out.reserve(a.size() + b.size());
    size_t x = 0, y = 0;
    while (x < a.size() || y < b.size()) {
      if (y == b.size() || (x < a.size() && a[x].col < b[y].col)) {
        out.push_back(a[x++]);
      } else if (x == a.size() || b[y].col < a[x].col) {
        uint64_t v = (p_ - mulmod(f, b[y].v)) % p_;
        if (v) {
          out.push_back({b[y].col, v});
          col_rows_[b[y].col].push_back(k);
        }
        ++y;
      } else {
        uint64_t v = (a[x].v + p_ - mulmod(f, b[y].v)) % p_;
        if (v) out.push_back({a[x].col, v});
        ++x;
        ++y;
      }
    }
    rows_[k] = std::move(out);
  }
};

}  // namespace

SparseIntMatrix unit_pivot_reduce(const SparseIntMatrix& m, size_t* eliminated, size_t* max_bits) {
  std::vector<std::vector<IntEliminator::E>> rows(m.rows());
  for (uint32_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) rows[r].push_back({e.col, e.value});
  IntEliminator el(std::move(rows), m.cols(), PivotStrategy::MinMagnitude, true);
  el.run();
  if (eliminated) *eliminated = el.rank;
  if (max_bits) *max_bits = el.max_bits;
  return el.remaining();
}

std::vector<uint64_t> rank_check_primes() {
  static const std::vector<uint64_t> primes = [] {
    std::vector<uint64_t> ps;
    for (unsigned long start : {(1UL << 30) + 12345UL, (1UL << 31) + 54321UL}) {
      Int p;
      Int s(start);
      mpz_nextprime(p.get_mpz_t(), s.get_mpz_t());
      ps.push_back(p.get_ui());
    }
    return ps;
  }();
  return primes;
}

size_t rank_mod_p(const SparseIntMatrix& m, uint64_t p) {
  if (p < 2) throw std::invalid_argument("rank_mod_p: modulus must be a prime");
  ModpRank e(m, p);
  return e.run();
}

namespace {

std::vector<std::vector<IntEliminator::E>> component_rows(const SparseIntMatrix& m, const std::vector<uint32_t>& comp) {
  std::vector<std::vector<IntEliminator::E>> rows;
  rows.reserve(comp.size());
  for (uint32_t r : comp) {
    std::vector<IntEliminator::E> row;
    row.reserve(m.row(r).size());
    for (const auto& e : m.row(r)) row.push_back({e.col, e.value});
    rows.push_back(std::move(row));
  }
  return rows;
}

Int content(const SparseIntMatrix& m) {
  Int g = 0;
  for (size_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.value.get_mpz_t());
      if (g == 1) return g;
    }
  return g;
}

// Dense Smith form of a matrix without unit entries. Returns the nonzero
// invariant factors (unsorted) and the rank.
std::vector<Int> dense_modular_factors(const SparseIntMatrix& sm, SnfStats& stats) {
  // drop empty columns
  std::vector<int64_t> cmap(sm.cols(), -1);
  size_t nc = 0;
  for (size_t r = 0; r < sm.rows(); ++r)
    for (const auto& e : sm.row(r))
      if (cmap[e.col] < 0) cmap[e.col] = 0;
  for (size_t c = 0; c < sm.cols(); ++c)
    if (cmap[c] == 0) cmap[c] = static_cast<int64_t>(nc++);
  IntMatrix a(sm.rows(), nc);
  for (size_t r = 0; r < sm.rows(); ++r)
    for (const auto& e : sm.row(r)) a(r, static_cast<size_t>(cmap[e.col])) = e.value;
  stats.dense_rows = std::max(stats.dense_rows, a.rows());
  stats.dense_cols = std::max(stats.dense_cols, a.cols());

  RankProfile best;
  for (uint64_t p : rank_check_primes()) {
    RankProfile prof = rank_profile_mod_p(a, p);
    if (prof.rank() > best.rank()) best = std::move(prof);
  }
  const size_t k = best.rank();
  if (k == 0) return {};

  // Two multiples of the product of the invariant factors: a maximal minor,
  // and det(U a V) for random small U, V (a combination of maximal minors).
  IntMatrix minor(k, k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) minor(i, j) = a(best.rows[i], best.cols[j]);
  Int N = abs(determinant_multimodular(minor));
  if (N == 0) throw std::runtime_error("smith_form: selected minor is singular");
  if (N > 1) {
    uint64_t state = 0x9e3779b97f4a7c15ULL ^ (a.rows() * 1315423911ULL + a.cols());
    auto next = [&]() {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      return static_cast<long>(state % 7) - 3;
    };
    IntMatrix U(k, a.rows()), V(a.cols(), k);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < a.rows(); ++j) U(i, j) = next();
    for (size_t i = 0; i < a.cols(); ++i)
      for (size_t j = 0; j < k; ++j) V(i, j) = next();
    Int N2 = abs(determinant_multimodular(U * a * V));
    if (N2 != 0) N = gcd(N, N2);
  }
  std::vector<Int> out;
  if (N == 1) {
    out.assign(k, Int(1));
    return out;
  }
  const Int M = 2 * N;
  stats.modulus_bits = std::max(stats.modulus_bits, static_cast<size_t>(mpz_sizeinbase(M.get_mpz_t(), 2)));
  std::vector<Int> diag = smith_diagonal_mod(a, M);
  // Every invariant factor divides N < M, so exactly the free directions read M.
  size_t full = 0;
  for (auto& d : diag) {
    if (d == M)
      ++full;
    else
      out.push_back(std::move(d));
  }
  if (out.size() != k) {
    std::ostringstream os;
    os << "smith_form: modular rank " << k << " disagrees with Smith form mod M (" << out.size() << " factors)";
    throw std::runtime_error(os.str());
  }
  return out;
}

}  // namespace

SnfResult smith_form(const SparseIntMatrix& m, const SnfOptions& opts) {
  SnfResult res;
  std::vector<std::vector<uint32_t>> comps;
  if (opts.split_components) {
    comps = row_components(m);
  } else {
    comps.emplace_back();
    for (uint32_t r = 0; r < m.rows(); ++r) comps.back().push_back(r);
  }
  res.stats.components = comps.size();
  std::vector<Int> diag;
  for (const auto& comp : comps) {
    if (opts.method == SnfMethod::Euclidean) {
      IntEliminator el(component_rows(m, comp), m.cols(), opts.strategy);
      el.run();
      res.rank += el.rank;
      res.stats.max_entry_bits = std::max(res.stats.max_entry_bits, el.max_bits);
      res.stats.euclid_steps += el.euclid_steps;
      for (auto& d : el.diagonal) diag.push_back(std::move(d));
      continue;
    }
    // SNF(g A) = g SNF(A): alternate unit elimination and content removal.
    Int scale = 1;
    IntEliminator first(component_rows(m, comp), m.cols(), opts.strategy, true);
    first.run();
    res.rank += first.rank;
    res.stats.max_entry_bits = std::max(res.stats.max_entry_bits, first.max_bits);
    res.stats.euclid_steps += first.euclid_steps;
    diag.insert(diag.end(), first.rank, Int(1));
    SparseIntMatrix rest = first.remaining();
    while (rest.nnz() > 0) {
      Int g = content(rest);
      if (g == 1) break;
      scale *= g;
      SparseIntMatrix divided(rest.rows(), rest.cols());
      for (size_t r = 0; r < rest.rows(); ++r)
        for (const auto& e : rest.row(r)) divided.set(r, e.col, e.value / g);
      std::vector<uint32_t> all(divided.rows());
      std::iota(all.begin(), all.end(), 0);
      IntEliminator el(component_rows(divided, all), divided.cols(), opts.strategy, true);
      el.run();
      res.rank += el.rank;
      res.stats.max_entry_bits = std::max(res.stats.max_entry_bits, el.max_bits);
      res.stats.euclid_steps += el.euclid_steps;
      diag.insert(diag.end(), el.rank, scale);
      rest = el.remaining();
    }
    if (rest.nnz() > 0) {
      std::vector<Int> f = dense_modular_factors(rest, res.stats);
      res.rank += f.size();
      for (auto& d : f) diag.push_back(d * scale);
    }
  }
  res.invariant_factors = normalize_diagonal(std::move(diag));
  if (opts.check_rank) {
    size_t mr = 0;
    for (uint64_t p : rank_check_primes()) mr = std::max(mr, rank_mod_p(m, p));
    res.stats.modular_rank = mr;
    if (mr != res.rank) {
      std::ostringstream os;
      os << "smith_form: exact rank " << res.rank << " disagrees with modular rank " << mr;
      throw std::runtime_error(os.str());
    }
  }
  return res;
}

SnfTransform smith_form_with_transforms(const IntMatrix& m) {
  SnfTransform t;
  IntMatrix a(m);
  size_t nr = a.rows(), nc = a.cols();
  IntMatrix u = IntMatrix::identity(nr);
  IntMatrix v = IntMatrix::identity(nc);
  size_t k = 0;
  for (; k < std::min(nr, nc); ++k) {
    // smallest nonzero entry in the trailing block
    size_t pr = nr, pc = nc;
    for (size_t r = k; r < nr; ++r)
      for (size_t c = k; c < nc; ++c)
        if (a(r, c) != 0 && (pr == nr || cmpabs(a(r, c), a(pr, pc)) < 0)) {
          pr = r;
          pc = c;
        }
    if (pr == nr) break;
    a.swap_rows(k, pr);
    u.swap_rows(k, pr);
    a.swap_cols(k, pc);
    v.swap_cols(k, pc);
    while (true) {
      bool dirty = false;
      for (size_t r = k + 1; r < nr; ++r) {
        if (a(r, k) == 0) continue;
        Int q = nearest_quotient(a(r, k), a(k, k));
        a.add_row_multiple(r, k, -q);
        u.add_row_multiple(r, k, -q);
        if (a(r, k) != 0) dirty = true;
      }
      for (size_t c = k + 1; c < nc; ++c) {
        if (a(k, c) == 0) continue;
        Int q = nearest_quotient(a(k, c), a(k, k));
        a.add_col_multiple(c, k, -q);
        v.add_col_multiple(c, k, -q);
        if (a(k, c) != 0) dirty = true;
      }
      if (dirty) {
        // move the smallest entry of row k / column k to the pivot
        size_t br = k, bc = k;
        for (size_t r = k + 1; r < nr; ++r)
          if (a(r, k) != 0 && cmpabs(a(r, k), a(br, bc)) < 0) {
            br = r;
            bc = k;
          }
        for (size_t c = k + 1; c < nc; ++c)
          if (a(k, c) != 0 && cmpabs(a(k, c), a(br, bc)) < 0) {
            br = k;
            bc = c;
          }
        a.swap_rows(k, br);
        u.swap_rows(k, br);
        a.swap_cols(k, bc);
        v.swap_cols(k, bc);
        continue;
      }
      // divisibility of the trailing block by the pivot
      size_t bad = nr;
      for (size_t r = k + 1; r < nr && bad == nr; ++r)
        for (size_t c = k + 1; c < nc; ++c)
          if (a(r, c) % a(k, k) != 0) {
            bad = r;
            break;
          }
      if (bad == nr) break;
      a.add_row_multiple(k, bad, 1);
      u.add_row_multiple(k, bad, 1);
    }
    if (a(k, k) < 0) {
      a.negate_row(k);
      u.negate_row(k);
    }
    t.invariant_factors.push_back(a(k, k));
  }
  t.rank = t.invariant_factors.size();
  t.u = std::move(u);
  t.v = std::move(v);
  t.d = std::move(a);
  return t;
}

Int AbelianGroup::torsion_order() const {
  Int o = 1;
  for (const auto& t : torsion) o *= t;
  return o;
}

double AbelianGroup::log_torsion_order() const {
  double s = 0;
  for (const auto& t : torsion) s += log_int(t);
  return s;
}

std::string AbelianGroup::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (betti) {
    os << "Z^" << betti;
    first = false;
  }
  for (const auto& t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

AbelianGroup homology(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("homology: incompatible shapes");
  if (a.rows() && b.cols() && !(a * b).is_zero()) throw std::invalid_argument("homology: a * b != 0");
  ColumnHnf h = column_hnf(a, true);
  size_t n = a.cols();
  size_t k = n - h.rank;
  IntMatrix coords = h.u_inv * b;
  IntMatrix c = coords.block(h.rank, 0, k, b.cols());
  for (size_t r = 0; r < h.rank; ++r)
    for (size_t col = 0; col < b.cols(); ++col)
      if (coords(r, col) != 0) throw std::logic_error("homology: image not inside kernel");
  SnfResult s = smith_form(SparseIntMatrix::from_dense(c));
  AbelianGroup g;
  g.betti = k - s.rank;
  g.torsion = s.torsion_factors();
  return g;
}

AbelianGroup row_cokernel(const SparseIntMatrix& m, const SnfOptions& opts) {
  SnfResult s = smith_form(m, opts);
  AbelianGroup g;
  g.betti = m.cols() - s.rank;
  g.torsion = s.torsion_factors();
  return g;
}

}  // namespace bianchi
