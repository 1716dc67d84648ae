#include "bianchi/congruence.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace bianchi {

namespace {

void dedupe_relators(std::vector<Word>& rels) {
  std::set<Word> seen;
  std::vector<Word> out;
  out.reserve(rels.size());
  for (auto& r : rels) {
    Word c = cyclic_reduce(r);
    if (c.empty()) continue;
    if (seen.insert(cyclic_canonical(c)).second) out.push_back(std::move(c));
  }
  rels = std::move(out);
}

size_t total_length(const std::vector<Word>& rels) {
  size_t n = 0;
  for (const auto& r : rels) n += r.size();
  return n;
}

}  // namespace

std::vector<size_t> tietze_simplify(size_t generator_count, std::vector<Word>& rels, const TietzeOptions& opts,
                                    TietzeStats* stats) {
  TietzeStats st;
  st.generators_before = generator_count;
  dedupe_relators(rels);
  st.relators_before = rels.size();
  st.length_before = total_length(rels);
  const double cap = opts.max_inflation * static_cast<double>(st.length_before);
  size_t total = st.length_before;
  std::vector<char> alive(generator_count, 1);
  std::vector<size_t> occ(generator_count);
  std::vector<int> cnt(generator_count, 0);

  while (opts.max_eliminations == 0 || st.eliminations < opts.max_eliminations) {
    std::fill(occ.begin(), occ.end(), 0);
    for (const auto& r : rels)
      for (int x : r) ++occ[std::abs(x) - 1];
    long best_delta = 0;
    size_t best_rel = rels.size();
    int best_gen = -1;
    for (size_t i = 0; i < rels.size(); ++i) {
      const Word& r = rels[i];
      long len = static_cast<long>(r.size());
      if (best_rel != rels.size() && len > static_cast<long>(rels[best_rel].size()) && best_delta < 0 &&
          -len > best_delta)
        continue;
      for (int x : r) ++cnt[std::abs(x) - 1];
      for (int x : r) {
        int g = std::abs(x) - 1;
        if (cnt[g] != 1) continue;
        long delta = static_cast<long>(occ[g] - 1) * (len - 2) - len;
        if (best_gen < 0 || delta < best_delta || (delta == best_delta && len < static_cast<long>(rels[best_rel].size()))) {
          best_delta = delta;
          best_rel = i;
          best_gen = g;
        }
      }
      for (int x : r) cnt[std::abs(x) - 1] = 0;
    }
    if (best_gen < 0) break;
    if (best_delta > 0 && static_cast<double>(total) + best_delta > cap) break;

    Word r = rels[best_rel];
    size_t k = 0;
    while (std::abs(r[k]) - 1 != best_gen) ++k;
    Word rot(r.begin() + k, r.end());
    rot.insert(rot.end(), r.begin(), r.begin() + k);
    Word rest(rot.begin() + 1, rot.end());
    // g * rest = 1  or  g^-1 * rest = 1
    Word pos = rot[0] > 0 ? word_inverse(rest) : rest;
    Word neg = word_inverse(pos);
    rels.erase(rels.begin() + best_rel);
    std::vector<Word> next;
    next.reserve(rels.size());
    for (auto& rel : rels) {
      bool hit = false;
      for (int x : rel)
        if (std::abs(x) - 1 == best_gen) hit = true;
      if (!hit) {
        next.push_back(std::move(rel));
        continue;
      }
      Word w;
      w.reserve(rel.size() + occ[best_gen] * pos.size());
      for (int x : rel) {
        if (std::abs(x) - 1 != best_gen)
          w.push_back(x);
        else if (x > 0)
          w.insert(w.end(), pos.begin(), pos.end());
        else
          w.insert(w.end(), neg.begin(), neg.end());
      }
      w = cyclic_reduce(w);
      if (!w.empty()) next.push_back(std::move(w));
    }
    rels = std::move(next);
    alive[best_gen] = 0;
    ++st.eliminations;
    if (st.eliminations % 64 == 0) dedupe_relators(rels);
    total = total_length(rels);
  }
  dedupe_relators(rels);

  std::vector<size_t> survivors;
  std::vector<int> remap(generator_count, 0);
  for (size_t g = 0; g < generator_count; ++g)
    if (alive[g]) {
      remap[g] = static_cast<int>(survivors.size()) + 1;
      survivors.push_back(g);
    }
  for (auto& rel : rels)
    for (auto& x : rel) x = x > 0 ? remap[x - 1] : -remap[-x - 1];
  std::sort(rels.begin(), rels.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  st.generators_after = survivors.size();
  st.relators_after = rels.size();
  st.length_after = total_length(rels);
  if (stats) *stats = st;
  return survivors;
}

namespace {

using Elem = std::array<uint32_t, 4>;

struct FiniteImage {
  const ResidueRing& R;
  std::vector<Elem> gens;

  Elem mul(const Elem& x, const Elem& y) const {
    return {R.add(R.mul(x[0], y[0]), R.mul(x[1], y[2])), R.add(R.mul(x[0], y[1]), R.mul(x[1], y[3])),
            R.add(R.mul(x[2], y[0]), R.mul(x[3], y[2])), R.add(R.mul(x[2], y[1]), R.mul(x[3], y[3]))};
  }
  static uint64_t key(const Elem& e) {
    return (uint64_t(e[0]) << 48) | (uint64_t(e[1]) << 32) | (uint64_t(e[2]) << 16) | uint64_t(e[3]);
  }
};

Elem reduce_mat(const ResidueRing& R, const Mat2& m) {
  return {R.reduce(m.e[0][0]), R.reduce(m.e[0][1]), R.reduce(m.e[1][0]), R.reduce(m.e[1][1])};
}

}  // namespace

CuspData cusp_data(const GroupPresentation& base, const RingIdeal& level, size_t index) {
  const QuadField& F = base.field;
  ResidueRing R(F, level);
  if (R.size() > 65535) throw std::invalid_argument("cusp_data: ideal norm too large");
  std::vector<Elem> gens;
  for (const auto& m : base.matrices) gens.push_back(reduce_mat(R, m));
  auto key = [](uint32_t x, uint32_t y) { return (uint64_t(x) << 32) | y; };
  std::unordered_set<uint64_t> seen;
  std::vector<std::pair<uint32_t, uint32_t>> orbit;
  orbit.push_back({R.one(), R.zero()});
  seen.insert(key(R.one(), R.zero()));
  for (size_t i = 0; i < orbit.size(); ++i) {
    auto [x, y] = orbit[i];
    for (const auto& g : gens) {
      uint32_t nx = R.add(R.mul(g[0], x), R.mul(g[1], y));
      uint32_t ny = R.add(R.mul(g[2], x), R.mul(g[3], y));
      if (seen.insert(key(nx, ny)).second) orbit.push_back({nx, ny});
    }
  }
  std::vector<uint32_t> units;
  for (const auto& u : F.units()) units.push_back(R.reduce(u));
  CuspData cd;
  std::unordered_set<uint64_t> classed;
  for (const auto& [x, y] : orbit) {
    if (classed.count(key(x, y))) continue;
    ++cd.orbit_count;
    cd.representatives.push_back({R.lift(x), R.lift(y)});
    for (uint32_t u : units) classed.insert(key(R.mul(u, x), R.mul(u, y)));
  }
  Int num = Int(F.class_number()) * Int(static_cast<unsigned long>(index));
  Int den = Int(F.unit_count()) * level.norm();
  if (num % den != 0) throw std::runtime_error("cusp_data: cusp formula gives a non-integer");
  cd.formula_count = Int(num / den).get_ui();
  return cd;
}

CongruenceSubgroup principal_congruence_subgroup(const GroupPresentation& base, const RingIdeal& level,
                                                 const CongruenceOptions& opts) {
  const QuadField& F = base.field;
  if (F.class_number() != 1) throw std::invalid_argument("principal_congruence_subgroup: class number must be 1");
  Int N = level.norm();
  if (N < 2) throw std::invalid_argument("principal_congruence_subgroup: the unit ideal is not a proper level");
  bool neat = N >= static_cast<unsigned long>(opts.min_norm);
  if (!neat && !opts.allow_non_neat) {
    std::ostringstream os;
    os << "level of norm " << N << " is below the neatness threshold " << opts.min_norm
       << " (pass the non-neat override to proceed)";
    throw std::invalid_argument(os.str());
  }
  ResidueRing R(F, level);
  if (R.size() > 65535) throw std::invalid_argument("principal_congruence_subgroup: ideal norm too large");
  FiniteImage img{R, {}};
  for (const auto& m : base.matrices) img.gens.push_back(reduce_mat(R, m));
  const size_t G = img.gens.size();

  // Cosets of Gamma(a) <-> elements of the finite image, right action.
  std::vector<Elem> elems{{R.one(), R.zero(), R.zero(), R.one()}};
  std::unordered_map<uint64_t, uint32_t> where{{FiniteImage::key(elems[0]), 0}};
  std::vector<Mat2> rep{Mat2::identity()};
  std::vector<uint32_t> act;
  std::vector<char> tree_edge;
  for (size_t c = 0; c < elems.size(); ++c) {
    for (size_t g = 0; g < G; ++g) {
      Elem e = img.mul(elems[c], img.gens[g]);
      auto [it, inserted] = where.try_emplace(FiniteImage::key(e), static_cast<uint32_t>(elems.size()));
      if (inserted) {
        if (elems.size() >= opts.max_index) throw std::runtime_error("principal_congruence_subgroup: index exceeds limit");
        elems.push_back(e);
        rep.push_back(mat_mul(F, rep[c], base.matrices[g]));
      }
      act.push_back(it->second);
      tree_edge.push_back(inserted);
    }
  }
  const size_t index = elems.size();
  std::vector<uint32_t> inv_act(index * G);
  for (size_t c = 0; c < index; ++c)
    for (size_t g = 0; g < G; ++g) inv_act[act[c * G + g] * G + g] = static_cast<uint32_t>(c);

  GroupPresentation sub;
  sub.field = F;
  sub.source = "Gamma(" + level.to_string() + ") in " + base.source;
  std::vector<int> schreier(index * G, -1);
  for (size_t c = 0; c < index; ++c)
    for (size_t g = 0; g < G; ++g) {
      if (tree_edge[c * G + g]) continue;
      schreier[c * G + g] = static_cast<int>(sub.matrices.size());
      size_t d = act[c * G + g];
      sub.matrices.push_back(mat_mul(F, mat_mul(F, rep[c], base.matrices[g]), mat_inv_sl2(F, rep[d])));
    }
  const size_t schreier_count = sub.matrices.size();

  std::vector<Word> rels;
  rels.reserve(index * base.relators.size());
  for (size_t c = 0; c < index; ++c)
    for (const auto& r : base.relators) {
      Word w;
      size_t cur = c;
      for (int x : r) {
        if (x > 0) {
          size_t g = x - 1;
          int s = schreier[cur * G + g];
          if (s >= 0) w.push_back(s + 1);
          cur = act[cur * G + g];
        } else {
          size_t g = -x - 1;
          size_t prev = inv_act[cur * G + g];
          int s = schreier[prev * G + g];
          if (s >= 0) w.push_back(-(s + 1));
          cur = prev;
        }
      }
      if (cur != c) throw std::logic_error("principal_congruence_subgroup: relator does not close up on cosets");
      rels.push_back(std::move(w));
    }

  CongruenceSubgroup out;
  out.level = level;
  out.index = index;
  out.schreier_generator_count = schreier_count;
  out.neat_by_threshold = neat;
  std::vector<size_t> keep = tietze_simplify(schreier_count, rels, opts.tietze, &out.tietze);
  std::vector<Mat2> mats;
  for (size_t k = 0; k < keep.size(); ++k) {
    mats.push_back(sub.matrices[keep[k]]);
    sub.names.push_back("s" + std::to_string(keep[k]));
  }
  sub.matrices = std::move(mats);
  sub.relators = std::move(rels);
  for (size_t k = 0; k < sub.matrices.size(); ++k)
    if (!mat_congruent_identity(F, sub.matrices[k], level))
      throw std::logic_error("principal_congruence_subgroup: generator not congruent to 1");
  sub.validate();
  out.presentation = std::move(sub);
  out.cusps = cusp_data(base, level, index);
  return out;
}

AbelianGroup abelianization(const GroupPresentation& p) {
  SparseIntMatrix m(p.relator_count(), p.generator_count());
  for (size_t r = 0; r < p.relators.size(); ++r)
    for (int x : p.relators[r]) m.add_to(r, std::abs(x) - 1, x > 0 ? 1 : -1);
  return row_cokernel(m);
}

size_t unipotent_index(const QuadField& F, const RingIdeal& level) {
  ResidueRing R(F, level);
  std::vector<bool> seen(R.size(), false);
  size_t count = 0;
  const long n = level.n().get_si(), h = level.h().get_si();
  // x = a + b w over a box that covers every class of O / a
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n * h; ++b) {
      uint32_t c = R.reduce(RingElement(Int(a), Int(b)));
      if (!seen[c]) {
        seen[c] = true;
        ++count;
      }
    }
  return count;
}

}  // namespace bianchi
