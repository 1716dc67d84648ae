#include "bianchi/foxhom.hpp"

#include <gmp.h>

#include <chrono>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace bianchi {

GroupRingElement GroupRingElement::from_word(const Word& w, const Int& c) {
  GroupRingElement e;
  e.add_term(free_reduce(w), c);
  return e;
}

void GroupRingElement::add_term(const Word& w, const Int& c) {
  if (c == 0) return;
  auto it = terms_.find(w);
  if (it == terms_.end()) {
    terms_.emplace(w, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (const auto& [w, c] : o.terms_) r.add_term(w, c);
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
  return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  GroupRingElement r;
  for (const auto& [u, a] : terms_)
    for (const auto& [v, b] : o.terms_) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      r.add_term(free_reduce(w), a * b);
    }
  return r;
}

GroupRingElement GroupRingElement::operator*(const Int& s) const {
  GroupRingElement r;
  for (const auto& [w, c] : terms_) r.add_term(w, c * s);
  return r;
}

Int GroupRingElement::augmentation() const {
  Int s = 0;
  for (const auto& t : terms_) s += t.second;
  return s;
}

std::string GroupRingElement::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    Int a = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (a != 1 || w.empty()) os << a.get_str();
    for (size_t i = 0; i < w.size(); ++i) {
      if (a != 1 || i) os << "*";
      os << names.at(static_cast<size_t>(std::abs(w[i])) - 1) << (w[i] < 0 ? "^-1" : "");
    }
    first = false;
  }
  return os.str();
}

GroupRingElement fox_derivative(const Word& w, size_t g, size_t generator_count) {
  GroupRingElement r;
  Word prefix;
  const int x = static_cast<int>(g) + 1;
  if (g >= generator_count) throw std::out_of_range("fox_derivative: generator index out of range");
  for (int y : w) {
    if (y == 0 || static_cast<size_t>(std::abs(y)) > generator_count)
      throw std::out_of_range("fox_derivative: unknown letter " + std::to_string(y));
    if (y == x) r = r + GroupRingElement::from_word(prefix);
    prefix.push_back(y);
    if (y == -x) r = r - GroupRingElement::from_word(prefix);
  }
  return r;
}

bool FoxJacobian::chain_condition() const {
  if (d2.rows() == 0) return true;
  return (d2 * d1).is_zero();
}

namespace {

void reduce_entries(IntMatrix& m, uint64_t modulus) {
  if (!modulus) return;
  const Int p(std::to_string(modulus));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      mpz_fdiv_r(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), p.get_mpz_t());
    }
}

}  // namespace

FoxJacobian build_fox_jacobian(const GroupPresentation& p, size_t dim, const RowBlockFn& sigma, uint64_t modulus) {
  const size_t G = p.generator_count();
  FoxJacobian J;
  J.dim = dim;
  J.generators = G;
  J.relators = p.relator_count();
  std::vector<IntMatrix> fwd(G), inv(G);
  for (size_t g = 0; g < G; ++g) {
    fwd[g] = sigma(p.matrices[g]);
    inv[g] = sigma(mat_inv_sl2(p.field, p.matrices[g]));
    reduce_entries(fwd[g], modulus);
    reduce_entries(inv[g], modulus);
    if (fwd[g].rows() != dim || fwd[g].cols() != dim) throw std::invalid_argument("build_fox_jacobian: block size");
  }
  const IntMatrix id = IntMatrix::identity(dim);

  J.d1 = SparseIntMatrix(G * dim, dim);
  for (size_t g = 0; g < G; ++g) J.d1.add_block(g * dim, 0, fwd[g] - id);

  J.d2 = SparseIntMatrix(J.relators * dim, G * dim);
  for (size_t r = 0; r < J.relators; ++r) {
    Word w = cyclic_reduce(p.relators[r]);
    IntMatrix prefix = id;
    for (int y : w) {
      size_t g = static_cast<size_t>(std::abs(y)) - 1;
      if (g >= G) throw std::out_of_range("build_fox_jacobian: relator letter out of range");
      if (y > 0) {
        J.d2.add_block(r * dim, g * dim, prefix, 1);
        prefix = prefix * fwd[g];
        reduce_entries(prefix, modulus);
      } else {
        prefix = prefix * inv[g];
        reduce_entries(prefix, modulus);
        J.d2.add_block(r * dim, g * dim, prefix, -1);
      }
    }
    if (prefix != id) throw std::runtime_error("build_fox_jacobian: relator does not act trivially");
  }
  return J;
}

FoxJacobian build_complex(const GroupPresentation& p, const LatticeRep& rep) {
  const QuadField& F = p.field;
  return build_fox_jacobian(p, rep.z_rank(),
                            [&](const Mat2& g) { return rep.z_action(mat_inv_sl2(F, g)).transpose(); });
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

uint64_t powmod(uint64_t b, uint64_t e, uint64_t p) {
  unsigned __int128 r = 1, x = b % p;
  while (e) {
    if (e & 1) r = r * x % p;
    x = x * x % p;
    e >>= 1;
  }
  return static_cast<uint64_t>(r);
}

uint64_t to_residue(const Int& v, uint64_t p) {
  Int r = v % Int(std::to_string(p));
  if (r < 0) r += Int(std::to_string(p));
  return std::stoull(r.get_str());
}

}  // namespace

TorsionReport compute_torsion(const GroupPresentation& p, const LatticeRep& rep, const TorsionOptions& opts) {
  TorsionReport rpt;
  rpt.D = p.field.D();
  rpt.m = rep.m();
  rpt.variant = rep.kind();
  rpt.dim = rep.z_rank();
  rpt.generators = p.generator_count();
  rpt.relators = p.relator_count();

  auto t0 = std::chrono::steady_clock::now();
  FoxJacobian J = build_complex(p, rep);
  if (opts.verify_chain) {
    rpt.chain_ok = J.chain_condition();
    if (!rpt.chain_ok) throw std::runtime_error("compute_torsion: d2 * d1 != 0");
  }
  rpt.seconds_build = seconds_since(t0);
  if (opts.snapshot_path) J.d2.save(*opts.snapshot_path);

  rpt.d2_rows = J.d2.rows();
  rpt.d2_cols = J.d2.cols();
  rpt.d2_nnz = J.d2.nnz();
  {
    std::vector<Int> col_sq(J.d2.cols());
    Int best_row = 0;
    for (size_t r = 0; r < J.d2.rows(); ++r) {
      Int sq = 0;
      for (const auto& e : J.d2.row(r)) {
        Int v2 = e.value * e.value;
        sq += v2;
        col_sq[e.col] += v2;
      }
      if (sq > best_row) best_row = sq;
    }
    Int best_col = 0;
    for (const auto& c : col_sq)
      if (c > best_col) best_col = c;
    if (best_row > 0) rpt.log_max_row_norm = 0.5 * log_int(best_row);
    if (best_col > 0) rpt.log_max_col_norm = 0.5 * log_int(best_col);
  }

  t0 = std::chrono::steady_clock::now();
  rpt.h0 = row_cokernel(J.d1, opts.snf);
  rpt.rank_d1 = rpt.dim - rpt.h0.betti;
  rpt.h0_order = rpt.h0.betti == 0 ? rpt.h0.torsion_order() : Int(0);

  SnfResult s = smith_form(J.d2, opts.snf);
  rpt.rank_d2 = s.rank;
  rpt.max_entry_bits = s.stats.max_entry_bits;
  rpt.h1.betti = J.d2.cols() - rpt.rank_d1 - rpt.rank_d2;
  rpt.h1.torsion = s.torsion_factors();
  rpt.h1_torsion_log = rpt.h1.log_torsion_order();
  if (rep.kind() == LatticeKind::Barred) rpt.h2_tors_log = rpt.h1_torsion_log;
  rpt.seconds_snf = seconds_since(t0);
  return rpt;
}

AbelianGroup coinvariants(const GroupPresentation& p, const LatticeRep& rep) {
  FoxJacobian J = build_complex(p, rep);
  return row_cokernel(J.d1);
}

SplitPrimeBetti split_prime_betti(const GroupPresentation& pres, int m) {
  const QuadField& F = pres.field;
  const long disc = F.discriminant();
  SplitPrimeBetti out;
  // p = 3 mod 4 with disc a nonzero square mod p, so sqrt(disc) = disc^((p+1)/4)
  Int cand = Int(1) << 30;
  while (true) {
    mpz_nextprime(cand.get_mpz_t(), cand.get_mpz_t());
    uint64_t p = std::stoull(cand.get_str());
    if (p % 4 != 3) continue;
    uint64_t d = to_residue(Int(disc), p);
    if (d == 0 || powmod(d, (p - 1) / 2, p) != 1) continue;
    uint64_t root = powmod(d, (p + 1) / 4, p);
    uint64_t inv2 = (p + 1) / 2;
    uint64_t t = static_cast<uint64_t>(F.omega_trace());
    uint64_t w = static_cast<uint64_t>((static_cast<unsigned __int128>((t + root) % p) * inv2) % p);
    out.p = p;
    out.omega_image = w;
    break;
  }
  const uint64_t p = out.p, w = out.omega_image;
  auto reduce = [&](const RingElement& x) {
    unsigned __int128 v = to_residue(x.a, p) + static_cast<unsigned __int128>(to_residue(x.b, p)) * w;
    return static_cast<long>(v % p);
  };
  const size_t dim = static_cast<size_t>(m) + 1;
  RowBlockFn sigma = [&](const Mat2& g) {
    OMatrix a = sym_power(F, mat_inv_sl2(F, g), m);
    IntMatrix b(dim, dim);
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) b(j, i) = reduce(a(i, j));
    return b;
  };
  FoxJacobian J = build_fox_jacobian(pres, dim, sigma, p);
  size_t r1 = rank_mod_p(J.d1, p);
  size_t r2 = J.d2.rows() ? rank_mod_p(J.d2, p) : 0;
  out.betti0 = dim - r1;
  out.betti1 = J.d2.cols() - r1 - r2;
  return out;
}

TorsionReport torsion_h2(const CongruenceSubgroup& S, int m, const TorsionOptions& opts) {
  LatticeRep rep(S.presentation.field, m, LatticeKind::Barred);
  TorsionReport r = compute_torsion(S.presentation, rep, opts);
  r.ideal = S.level.to_string();
  r.kappa = S.cusps.orbit_count;
  r.betti_equals_kappa = r.h1.betti == *r.kappa;
  r.betti_matches_cusps = r.h1.betti == 4 * *r.kappa;
  return r;
}

DualTorsionComparison compare_dual_torsion(const CongruenceSubgroup& S, int m, const TorsionOptions& opts) {
  DualTorsionComparison c;
  for (LatticeKind k : {LatticeKind::Standard, LatticeKind::Dual}) {
    LatticeRep rep(S.presentation.field, m, k);
    TorsionReport r = compute_torsion(S.presentation, rep, opts);
    r.ideal = S.level.to_string();
    r.kappa = S.cusps.orbit_count;
    r.betti_equals_kappa = r.h1.betti == *r.kappa;
    r.betti_matches_cusps = r.h1.betti == 2 * *r.kappa;
    (k == LatticeKind::Standard ? c.standard : c.dual) = std::move(r);
  }
  return c;
}

}  // namespace bianchi
