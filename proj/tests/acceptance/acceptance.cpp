// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// detail lines. Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bianchi/bounds.hpp"
#include "bianchi/hecke.hpp"
#include "bianchi/modular.hpp"
#include "bianchi/report.hpp"
#include "bianchi/snf.hpp"
#include "bianchi/symmpow.hpp"
#include "oracles.hpp"

using namespace bianchi;

namespace {

// Pinned tolerances.
// Criterion 2: |log|H1(Lambda)_tors| - log|H1(Lambda^)_tors|| <= C m log m.
// C was calibrated once on D=3 (3), m=2 (difference 15.25 at m log m = 1.386)
// and is not refit.
constexpr double kFrozenC = 12.0;
// Criterion 5 band factors.
constexpr double kBandLow = 0.3;
constexpr double kBandHigh = 2.0;
// Runtime targets in seconds.
constexpr double kPerRunBudget = 600.0;
constexpr double kGrowthBudget = 4 * 3600.0;
// Criterion 9 and 10 numeric tolerances.
constexpr double kPartialSumTol = 1e-12;
constexpr double kVolumeTarget = 0.305321;
constexpr double kVolumeTol = 1e-5;

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void fail(const std::string& why) {
    pass = false;
    details.push_back("FAIL " + why);
  }
  void note(const std::string& s) { details.push_back(s); }
  void check(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunReport run_config(long D, int m_min, int m_max, unsigned jobs) {
  RunConfig c;
  c.D = D;
  c.ideal = "3";
  c.m_min = m_min;
  c.m_max = m_max;
  c.jobs = jobs;
  c.variants = {LatticeKind::Barred, LatticeKind::Standard, LatticeKind::Dual};
  c.band.low = kBandLow;
  c.band.high = kBandHigh;
  auto t0 = std::chrono::steady_clock::now();
  RunReport r = run(c);
  std::fprintf(stderr, "D=%ld m=%d..%d done in %.1f s\n", D, m_min, m_max, seconds_since(t0));
  return r;
}

std::vector<const TorsionReport*> reports_of(const MRun& run) {
  std::vector<const TorsionReport*> out;
  for (const auto* r : {&run.barred, &run.standard, &run.dual})
    if (*r) out.push_back(&**r);
  return out;
}

// ---------------------------------------------------------------------------

Criterion betti_identity(const std::map<long, RunReport>& reports) {
  Criterion c{1, "Betti identity rank H_1(Gamma(a); barred(m)) = kappa for (11,(3)), (7,(3)), m = 1..3"};
  size_t literal = 0, scaled = 0, complex_dim = 0, total = 0;
  for (long D : {11L, 7L}) {
    const RunReport& r = reports.at(D);
    const size_t kappa = r.subgroup.cusps_formula;
    c.check(kappa == r.subgroup.cusps_orbits,
            fmt("D=%ld: cusp formula %zu != orbit count %zu", D, kappa, r.subgroup.cusps_orbits));
    c.note(fmt("D=%ld: kappa = %zu by formula, %zu by P^1 orbit count", D, kappa, r.subgroup.cusps_orbits));
    for (const auto& run : r.runs) {
      if (run.m < 1 || run.m > 3) continue;
      ++total;
      if (run.error || !run.barred) {
        c.fail(fmt("D=%ld m=%d: %s", D, run.m, run.error ? run.error->c_str() : "no barred run"));
        continue;
      }
      const TorsionReport& b = *run.barred;
      double secs = b.seconds_build + b.seconds_snf;
      literal += b.h1.betti == kappa;
      scaled += b.h1.betti == 4 * kappa;
      size_t fp = run.split_prime ? run.split_prime->betti1 : 0;
      complex_dim += fp == kappa;
      c.note(fmt("D=%ld m=%d: Z-rank %zu, 4*kappa %zu, F_p dim of H_1(V(m)) %zu (p=%llu), %.1f s", D, run.m,
                 b.h1.betti, 4 * kappa, fp, static_cast<unsigned long long>(run.split_prime ? run.split_prime->p : 0),
                 secs));
      c.check(secs < kPerRunBudget, fmt("D=%ld m=%d took %.1f s", D, run.m, secs));
    }
  }
  c.note(fmt("literal rank = kappa on %zu/%zu runs; rank = 4 kappa on %zu/%zu; dim H_1(V(m)) = kappa on %zu/%zu",
             literal, total, scaled, total, complex_dim, total));
  c.note("analysis: barred(m) = Lambda(m) + dual has Z-rank 4(m+1), and its complexification is V(m) + conj V(m) "
         "plus their duals, so each of the kappa Eisenstein classes of H_1(V(m)) appears 4 times in the Z-rank. "
         "The identity holds as dim H_1(Gamma; V(m)) = kappa, checked at a split prime.");
  if (literal != total) c.fail("literal Z-rank of H_1 with barred coefficients is 4 kappa, not kappa");
  if (scaled != total || complex_dim != total) c.fail("4 kappa / F_p dimension identity does not hold on every run");
  return c;
}

Criterion self_duality(const std::map<long, RunReport>& reports) {
  Criterion c{2, "self-duality: |tors Lambda| |tors dual| = |tors barred| and |difference| <= C m log m, m = 0..2"};
  c.note(fmt("frozen C = %.1f", kFrozenC));
  for (const auto& [D, r] : reports) {
    double implied = 0;
    for (const auto& run : r.runs) {
      if (run.m > 2) continue;
      if (run.error || !run.barred || !run.standard || !run.dual) {
        c.fail(fmt("D=%ld m=%d: missing run", D, run.m));
        continue;
      }
      Int prod = run.standard->h1.torsion_order() * run.dual->h1.torsion_order();
      c.check(prod == run.barred->h1.torsion_order(), fmt("D=%ld m=%d: product of orders differs", D, run.m));
      double diff = std::fabs(run.standard->h1_torsion_log - run.dual->h1_torsion_log);
      double bound = run.m >= 1 ? kFrozenC * run.m * std::log(static_cast<double>(run.m)) : 0;
      c.check(diff <= bound + 1e-9, fmt("D=%ld m=%d: difference %.4f > %.4f", D, run.m, diff, bound));
      c.note(fmt("D=%ld m=%d: log tors %.4f + %.4f = %.4f (barred %.4f, exact product %s), |diff| %.4f <= %.4f", D,
                 run.m, run.standard->h1_torsion_log, run.dual->h1_torsion_log,
                 run.standard->h1_torsion_log + run.dual->h1_torsion_log, run.barred->h1_torsion_log,
                 prod == run.barred->h1.torsion_order() ? "equal" : "DIFFERENT", diff, bound));
      if (run.m >= 2) implied = std::max(implied, diff / (run.m * std::log(static_cast<double>(run.m))));
    }
    c.note(fmt("D=%ld: smallest C fitting m = 2: %.2f", D, implied));
  }
  c.note("analysis: the product identity is exact on every run. The difference is O(m log m) with a constant that "
         "depends on Gamma(a); a C calibrated on one field does not carry over to another, so a finite run can "
         "only refute a frozen constant, not the asymptotic statement.");
  return c;
}

Criterion gabber_soule(const std::map<long, RunReport>& reports) {
  Criterion c{3, "Gabber-Soule: log|H^2_tors| <= (m+1) min(N2,N1) log(N1 c0^m) on every run"};
  size_t n = 0;
  double min_margin = 1e300;
  for (const auto& [D, r] : reports)
    for (const auto& run : r.runs) {
      if (run.error) {
        c.fail(fmt("D=%ld m=%d: %s", D, run.m, run.error->c_str()));
        continue;
      }
      if (!run.gabber_soule) continue;
      const auto& g = *run.gabber_soule;
      ++n;
      // zero tolerance: plain comparison of the doubles
      c.check(g.measured_log <= g.formula_log_bound,
              fmt("D=%ld m=%d: %.6f > %.6f", D, run.m, g.measured_log, g.formula_log_bound));
      min_margin = std::min(min_margin, g.formula_log_bound - g.measured_log);
      c.note(fmt("D=%ld m=%d: measured %.4f, bound %.4f (N1=%zu N2=%zu c0=%.4f), matrix bound %.4f", D, run.m,
                 g.measured_log, g.formula_log_bound, g.generators, g.relators, g.c0, g.matrix_log_bound));
      c.check(g.measured_log <= g.matrix_log_bound, fmt("D=%ld m=%d: matrix bound violated", D, run.m));
    }
  c.check(n > 0, "no runs");
  c.note(fmt("%zu runs, smallest margin %.4f", n, min_margin));
  return c;
}

Criterion h0_bound(const std::map<long, RunReport>& reports) {
  Criterion c{4, "|H_0(Gamma(a); Lambda(m))| <= a^{m+1} m! on every run, a = 3"};
  size_t literal = 0, squared = 0, n = 0;
  for (const auto& [D, r] : reports)
    for (const auto& run : r.runs) {
      if (run.m < 1 || !run.standard) continue;
      ++n;
      const Int& order = run.standard->h0_order;
      Int bound;
      mpz_ui_pow_ui(bound.get_mpz_t(), 3, static_cast<unsigned long>(run.m + 1));
      bound *= factorial(run.m);
      bool finite = run.standard->h0.betti == 0;
      bool ok = finite && order <= bound;
      bool ok2 = finite && order <= bound * bound;
      literal += ok;
      squared += ok2;
      c.note(fmt("D=%ld m=%d: |H_0| = %s, a^{m+1} m! = %s, squared %s", D, run.m, order.get_str().c_str(),
                 bound.get_str().c_str(), Int(bound * bound).get_str().c_str()));
    }
  c.note(fmt("literal bound holds on %zu/%zu runs; squared bound on %zu/%zu (m = 0 has infinite H_0, not counted)",
             literal, n, squared, n));
  c.note("analysis: Lambda(m) = O^{m+1} has Z-rank 2(m+1) and O/a has order N(a) = 9 for a = (3), so each O-coordinate "
         "of the coinvariants contributes a factor 9, not 3; e.g. (Z/3)^4 = 81 at m = 1 against 3^2 = 9. The bound holds for "
         "the square (a^{m+1} m!)^2, with equality at m = 1, 2.");
  if (literal != n) c.fail("literal bound exceeded");
  if (squared != n) c.fail("squared bound exceeded");
  return c;
}

Criterion growth(const RunReport& r, double wall) {
  Criterion c{5, "growth: slope of log|H^2_tors| vs m^2 in [0.3, 2.0] vol/pi and eventually increasing, D=3 (3), m=1..8"};
  std::vector<GrowthPoint> pts, std_pts, dual_pts;
  for (const auto& run : r.runs) {
    if (run.m < 1) continue;
    if (run.error || !run.barred) {
      c.fail(fmt("m=%d: %s", run.m, run.error ? run.error->c_str() : "missing"));
      continue;
    }
    pts.push_back({run.m, *run.barred->h2_tors_log});
    if (run.standard) std_pts.push_back({run.m, run.standard->h1_torsion_log});
    if (run.dual) dual_pts.push_back({run.m, run.dual->h1_torsion_log});
    c.note(fmt("m=%d: log|H^2_tors| = %.4f", run.m, *run.barred->h2_tors_log));
  }
  if (pts.size() != 8) {
    c.fail("expected 8 points");
    return c;
  }
  GrowthBand band{kBandLow, kBandHigh, 0, 0};
  GrowthFit f = growth_fit(pts, r.subgroup.volume, 9, band);
  c.note(fmt("vol = %.6f, vol/pi = %.6f, slope = %.4f, ratio = %.4f, band [%.4f, %.4f], eventually increasing: %s",
             r.subgroup.volume, f.predicted_slope, f.slope, f.ratio, f.band_low, f.band_high,
             f.eventually_increasing ? "yes" : "no"));
  c.check(f.in_band, "slope outside the band");
  c.check(f.eventually_increasing, "series not eventually increasing");
  for (const auto& [name, p] : {std::pair{"Lambda", &std_pts}, std::pair{"dual", &dual_pts}}) {
    if (p->size() != 8) continue;
    GrowthFit g = growth_fit(*p, r.subgroup.volume, 9, band);
    c.note(fmt("info: %s alone: slope %.4f, ratio %.4f", name, g.slope, g.ratio));
  }
  c.note(fmt("wall time %.1f s (budget %.0f s)", wall, kGrowthBudget));
  c.check(wall <= kGrowthBudget, "runtime budget exceeded");
  return c;
}

Criterion snf_oracle() {
  Criterion c{6, "Smith form: 200 random matrices up to 30x30, entries in [-10,10], against a naive oracle"};
  std::mt19937_64 rng(20240601);
  size_t mism_mod = 0, mism_euc = 0, bad_transform = 0;
  for (int t = 0; t < 200; ++t) {
    size_t r = 1 + rng() % 30, k = 1 + rng() % 30;
    double density = t % 4 == 0 ? 1.0 : 0.15 + 0.85 * static_cast<double>(rng() % 100) / 100;
    IntMatrix m = oracle::random_matrix(rng, r, k, -10, 10, density);
    std::vector<Int> expect = oracle::naive_snf(m);
    SnfOptions mod, euc;
    euc.method = SnfMethod::Euclidean;
    SparseIntMatrix s = SparseIntMatrix::from_dense(m);
    mism_mod += smith_form(s, mod).invariant_factors != expect;
    mism_euc += smith_form(s, euc).invariant_factors != expect;
    SnfTransform tr = smith_form_with_transforms(m);
    bool ok = tr.u * m * tr.v == tr.d && abs(determinant(tr.u)) == 1 && abs(determinant(tr.v)) == 1 &&
              tr.invariant_factors == expect;
    for (size_t i = 0; i < r && ok; ++i)
      for (size_t j = 0; j < k; ++j)
        if (i != j && tr.d(i, j) != 0) ok = false;
    bad_transform += !ok;
  }
  c.note(fmt("modular route mismatches %zu/200, Euclidean route %zu/200, transform failures %zu/200", mism_mod,
             mism_euc, bad_transform));
  c.check(mism_mod == 0 && mism_euc == 0 && bad_transform == 0, "oracle disagreement");
  return c;
}

Criterion fox(const std::map<long, RunReport>& reports) {
  Criterion c{7, "Fox calculus axioms on 500 random words, chain condition on every complex, fixture homology"};
  std::mt19937_64 rng(7);
  size_t bad = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    Word u = oracle::random_word(rng, n, rng() % 10), v = oracle::random_word(rng, n, rng() % 10);
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const size_t g = rng() % n;
    const int x = static_cast<int>(g) + 1;
    bool ok = fox_derivative({x}, g, n) == GroupRingElement::one();
    ok = ok && fox_derivative({-x}, g, n) == GroupRingElement::from_word({-x}, -1);
    ok = ok && fox_derivative(uv, g, n) == fox_derivative(u, g, n) + GroupRingElement::from_word(u) * fox_derivative(v, g, n);
    GroupRingElement d = fox_derivative(uv, g, n);
    ok = ok && oracle::Ring(d.terms().begin(), d.terms().end()) == oracle::fox(uv, x);
    bad += !ok;
  }
  c.note(fmt("axiom or oracle failures: %zu/500", bad));
  c.check(bad == 0, "Fox axioms");

  size_t complexes = 0, chain_bad = 0;
  for (const auto& [D, r] : reports)
    for (const auto& run : r.runs)
      for (const auto* t : reports_of(run)) {
        ++complexes;
        chain_bad += !t->chain_ok;
      }
  for (long D : builtin_presentation_fields()) {
    GroupPresentation p = load_presentation(D);
    for (int m = 0; m <= 4; ++m)
      for (LatticeKind k : {LatticeKind::Standard, LatticeKind::Dual, LatticeKind::Barred}) {
        ++complexes;
        chain_bad += !build_complex(p, LatticeRep(p.field, m, k)).chain_condition();
      }
  }
  c.note(fmt("chain condition d2 d1 = 0 fails on %zu of %zu complexes", chain_bad, complexes));
  c.check(chain_bad == 0, "chain condition");

  GroupPresentation c2 = parse_presentation("bianchi-presentation 1\nfield 1\ngenerator x -1 0 0 0 0 0 -1 0\nrelator x^2\n");
  AbelianGroup h = row_cokernel(build_fox_jacobian(c2, 1, [](const Mat2&) { return IntMatrix{{1}}; }).d2);
  c.note("<x | x^2>, trivial coefficients: H_1 = " + h.to_string());
  c.check(h.betti == 0 && h.torsion == std::vector<Int>{2}, "<x | x^2> should give Z/2");
  GroupPresentation torus = parse_presentation(
      "bianchi-presentation 1\nfield 1\ngenerator x 1 0 1 0 0 0 1 0\ngenerator y 1 0 0 1 0 0 1 0\nrelator [x,y]\n");
  FoxJacobian jt = build_fox_jacobian(torus, 1, [](const Mat2&) { return IntMatrix{{1}}; });
  AbelianGroup ht = homology(jt.d1.to_dense().transpose(), jt.d2.to_dense().transpose());
  AbelianGroup h2 = homology(jt.d2.to_dense().transpose(), IntMatrix(1, 0));
  c.note("torus: H_1 = " + ht.to_string() + ", H_2 = " + h2.to_string());
  c.check(ht.betti == 2 && ht.torsion.empty() && h2.betti == 1 && h2.torsion.empty(), "torus homology");
  return c;
}

Mat2 random_element(const GroupPresentation& p, std::mt19937_64& rng, int len) {
  Mat2 g = Mat2::identity();
  for (int i = 0; i < len; ++i) {
    const Mat2& x = p.matrices[rng() % p.matrices.size()];
    g = mat_mul(p.field, g, rng() % 2 ? x : mat_inv_sl2(p.field, x));
  }
  return g;
}

Criterion representations() {
  Criterion c{8, "representations: homomorphism, n_a table, norm inequality, dual-lattice sandwich"};
  std::mt19937_64 rng(88);
  std::vector<GroupPresentation> groups;
  for (long D : builtin_presentation_fields()) groups.push_back(load_presentation(D));
  size_t hom_bad = 0, samples = 0, literal_bad = 0, binomial_bad = 0;
  double worst = 0;
  for (int m = 0; m <= 12; ++m)
    for (int t = 0; t < 200; ++t) {
      const GroupPresentation& p = groups[t % groups.size()];
      Mat2 g = random_element(p, rng, 3), h = random_element(p, rng, 3);
      hom_bad += sym_power(p.field, mat_mul(p.field, g, h), m) !=
                 omatrix_mul(p.field, sym_power(p.field, g, m), sym_power(p.field, h, m));
      if (m == 0) continue;
      for (const Mat2* x : {&g, &h}) {
        NormComparison n = compare_norms(p.field, *x, m);
        ++samples;
        // zero tolerance on the literal inequality
        literal_bad += !(n.direct <= n.rho1_power);
        binomial_bad += !n.binomial_bound_holds;
        worst = std::max(worst, n.direct / n.rho1_power);
      }
    }
  c.note(fmt("homomorphism failures %zu of %d pairs (m = 0..12)", hom_bad, 13 * 200));
  c.check(hom_bad == 0, "homomorphism");

  size_t table_bad = 0;
  QuadField F(11);
  for (int m = 0; m <= 12; ++m)
    for (long a : {-3L, -1L, 1L, 2L, 5L}) {
      Mat2 n = Mat2::identity();
      n.e[0][1] = RingElement(a);
      OMatrix r = sym_power(F, n, m);
      for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) {
          Int expect = 0;
          if (i <= j) {
            mpz_pow_ui(expect.get_mpz_t(), Int(a).get_mpz_t(), static_cast<unsigned long>(j - i));
            expect *= binomial(j, j - i);
          }
          table_bad += r(i, j) != RingElement(expect, 0);
        }
    }
  c.note(fmt("n_a table mismatches %zu (m = 0..12, a in {-3,-1,1,2,5})", table_bad));
  c.check(table_bad == 0, "n_a table");

  NormComparison ce = compare_norms(QuadField(1), [] {
    Mat2 n = Mat2::identity();
    n.e[0][1] = 1;
    return n;
  }(), 2);
  c.note(fmt("norm inequality ||rho_m|| <= ||rho_1||^m violated on %zu/%zu samples, worst ratio %.4f", literal_bad,
             samples, worst));
  c.note(fmt("counterexample: n = [[1,1],[0,1]], m = 2: ||rho_2(n)|| = %.6f > ||rho_1(n)||^2 = %.6f", ce.direct,
             ce.rho1_power));
  c.note(fmt("sqrt(C(m, m/2)) ||rho_1||^m violated on %zu/%zu samples", binomial_bad, samples));
  c.note("analysis: in the orthonormal monomial basis Sym^m is a quotient of the m-th tensor power whose "
         "inclusion has norm up to sqrt(C(m, m/2)), so only the binomially weakened bound follows; the literal "
         "inequality fails already for a unipotent element at m = 2.");
  if (literal_bad > 0) c.fail("literal norm inequality");
  c.check(binomial_bad == 0, "binomially weakened norm bound");

  size_t sandwich_bad = 0;
  for (int m = 0; m <= 10; ++m) {
    LatticeInZBasis L = standard_lattice(m), Ld = dual_lattice(L);
    Rat f(factorial(m));
    bool ok = lattice_contains(L, scale_lattice(Ld, f)) && lattice_contains(scale_lattice(Ld, 1 / f), L);
    Sandwich s = lattice_sandwich(L, Ld);
    ok = ok && s.k.has_value() && *s.k <= 1;
    sandwich_bad += !ok;
    c.note(fmt("m=%d: m! L' in L in (m!)^-1 L': %s; lower %s, upper %s, k %d", m, ok ? "yes" : "no",
               s.lower.get_str().c_str(), s.upper.get_str().c_str(), s.k ? *s.k : -1));
  }
  c.check(sandwich_bad == 0, "dual-lattice sandwich");
  return c;
}

Criterion hecke() {
  Criterion c{9, "Hecke: intertwining ratio 31/30, c(m) pi (im+m+2) = 1 for m <= 100, local L vs partial sums"};
  LocalPlaceData v;
  v.q = 5;
  Cyclotomic r = intertwining_ratio(v, 3);
  c.note("intertwining_ratio(trivial, q=5, m=3) = " + r.to_string());
  c.check(r.is_rational() && r.rational_value() == Rat(31, 30), "31/30");
  size_t bad = 0;
  for (int m = 0; m <= 100; ++m) {
    GaussianRational p = c_function(m).over_pi * GaussianRational{m + 2, m};
    bad += !(p == GaussianRational{1, 0});
  }
  c.note(fmt("c-function identity fails for %zu of 101 values", bad));
  c.check(bad == 0, "c-function");
  double worst = 0;
  for (uint64_t q : {2u, 3u, 4u, 5u, 7u, 9u, 13u, 25u})
    for (unsigned order : {1u, 2u, 3u, 4u, 6u})
      for (long k = 0; k < static_cast<long>(order); ++k)
        for (long s = 2; s <= 6; ++s) {
          LocalPlaceData w;
          w.q = q;
          w.chi_order = order;
          w.chi_index = k;
          worst = std::max(worst, std::abs(local_L_partial_sum(w, s, 400) - local_L(w, s).to_complex()));
        }
  c.note(fmt("largest |local_L - partial sum| = %.3e (tolerance %.0e)", worst, kPartialSumTol));
  c.check(worst <= kPartialSumTol, "partial sums");
  return c;
}

Criterion volumes(const std::map<long, RunReport>& reports) {
  Criterion c{10, "cusp-volume identity kappa #O^* N(a) = h [Gamma_D : Gamma(a)], vol(PSL_2(Z[i])) = 0.305321"};
  for (const auto& [D, r] : reports) {
    QuadField F(D);
    bool ok = cusp_volume_consistent(F, parse_ideal(F, r.config.ideal), r.subgroup.index, r.subgroup.cusps_orbits);
    c.note(fmt("D=%ld (3): %zu * %d * 9 = %d * %zu: %s", D, r.subgroup.cusps_orbits, F.unit_count(),
               F.class_number(), r.subgroup.index, ok ? "yes" : "no"));
    c.check(ok, fmt("identity fails for D=%ld", D));
  }
  for (long D : {1L, 2L}) {
    GroupPresentation base = load_presentation(D);
    RingIdeal a = parse_ideal(base.field, "3");
    CongruenceSubgroup S = principal_congruence_subgroup(base, a);
    bool ok = cusp_volume_consistent(base.field, a, S.index, S.cusps.orbit_count) &&
              S.cusps.orbit_count == S.cusps.formula_count;
    c.note(fmt("D=%ld (3): index %zu, kappa %zu (orbits) %zu (formula): %s", D, S.index, S.cusps.orbit_count,
               S.cusps.formula_count, ok ? "yes" : "no"));
    c.check(ok, fmt("identity fails for D=%ld", D));
  }
  double vol = bianchi_covolume(QuadField(1), 12);
  c.note(fmt("vol(PSL_2(Z[i]) \\ H^3) = %.10f, target %.6f +- %.0e", vol, kVolumeTarget, kVolumeTol));
  c.check(std::fabs(vol - kVolumeTarget) <= kVolumeTol, "volume");
  return c;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::map<long, RunReport> level3;
  level3.emplace(11, run_config(11, 0, 3, 1));
  level3.emplace(7, run_config(7, 0, 3, 1));
  auto tg = std::chrono::steady_clock::now();
  RunReport d3 = run_config(3, 0, 8, 4);
  double growth_wall = seconds_since(tg);
  level3.emplace(3, d3);

  std::vector<Criterion> results;
  results.push_back(betti_identity(level3));
  results.push_back(self_duality(level3));
  results.push_back(gabber_soule(level3));
  results.push_back(h0_bound(level3));
  results.push_back(growth(d3, growth_wall));
  results.push_back(snf_oracle());
  results.push_back(fox(level3));
  results.push_back(representations());
  results.push_back(hecke());
  results.push_back(volumes(level3));

  bool all = true;
  for (const auto& c : results) {
    std::printf("C%-2d %s  %s\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str());
    for (const auto& d : c.details) std::printf("      %s\n", d.c_str());
    all = all && c.pass;
  }
  size_t passed = 0;
  for (const auto& c : results) passed += c.pass;
  std::printf("acceptance: %zu/%zu criteria pass, %.1f s\n", passed, results.size(), seconds_since(t0));
  return all ? 0 : 1;
}
