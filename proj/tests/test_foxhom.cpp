#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bianchi/foxhom.hpp"
#include "oracles.hpp"

using namespace bianchi;

namespace {

oracle::Ring as_ring(const GroupRingElement& x) { return oracle::Ring(x.terms().begin(), x.terms().end()); }

std::vector<Int> repeat(const std::vector<Int>& t, size_t k) {
  std::vector<Int> out;
  for (const auto& x : t)
    for (size_t i = 0; i < k; ++i) out.push_back(x);
  return out;
}

const CongruenceSubgroup& d3_level3() {
  static CongruenceSubgroup S = [] {
    GroupPresentation base = load_presentation(3);
    return principal_congruence_subgroup(base, parse_ideal(base.field, "3"));
  }();
  return S;
}

}  // namespace

TEST_CASE("Fox derivatives against the closed form") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 300; ++t) {
    int gens = 1 + static_cast<int>(rng() % 4);
    Word w = oracle::random_word(rng, gens, rng() % 12);
    for (int g = 0; g < gens; ++g) CHECK(as_ring(fox_derivative(w, g, gens)) == oracle::fox(w, g + 1));
  }
  CHECK_THROWS_AS(fox_derivative({1, 3}, 0, 2), std::out_of_range);
}

TEST_CASE("fundamental formula w - 1 = sum (dw/dx)(x - 1)") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    int gens = 1 + static_cast<int>(rng() % 3);
    Word w = oracle::random_word(rng, gens, 1 + rng() % 10);
    oracle::Ring lhs;
    oracle::add(lhs, w, 1);
    oracle::add(lhs, {}, -1);
    oracle::Ring rhs;
    for (int g = 1; g <= gens; ++g) {
      oracle::Ring xm1;
      oracle::add(xm1, {g}, 1);
      oracle::add(xm1, {}, -1);
      for (const auto& [u, c] : oracle::mul(as_ring(fox_derivative(w, g - 1, gens)), xm1)) oracle::add(rhs, u, c);
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("group ring basics") {
  GroupRingElement x = GroupRingElement::from_word({1}), y = GroupRingElement::from_word({2});
  CHECK((x * GroupRingElement::from_word({-1})) == GroupRingElement::one());
  CHECK((x - x).is_zero());
  CHECK((x + y * Int(3)).augmentation() == 4);
  // d(x y x^-1 y^-1)/dy = x - x y x^-1 y^-1
  GroupRingElement d = fox_derivative({1, 2, -1, -2}, 1, 2);
  CHECK(d == x - GroupRingElement::from_word({1, 2, -1, -2}));
  CHECK(fox_derivative({1, 2, -1, -2}, 0, 2).augmentation() == 0);
}

TEST_CASE("fixture complexes") {
  // <x | x^2> with trivial coefficients
  GroupPresentation c2 = parse_presentation(
      "bianchi-presentation 1\nfield 1\ngenerator x -1 0 0 0 0 0 -1 0\nrelator x^2\n");
  FoxJacobian j = build_fox_jacobian(c2, 1, [](const Mat2&) { return IntMatrix{{1}}; });
  CHECK(j.chain_condition());
  AbelianGroup h1 = row_cokernel(j.d2);
  CHECK(h1.betti == 0);
  CHECK(h1.torsion == std::vector<Int>{2});
  // with x = -I acting on Lambda(1) = O^2, H_0 = (Z/2)^4 and H_1 = 0
  TorsionReport r = compute_torsion(c2, LatticeRep(c2.field, 1, LatticeKind::Standard));
  CHECK(r.chain_ok);
  CHECK(r.h0.torsion == std::vector<Int>{2, 2, 2, 2});
  CHECK(r.h0_order == 16);
  CHECK(r.h1.betti == 0);
  CHECK(r.h1.torsion.empty());

  // torus <x, y | [x, y]> with commuting translations
  GroupPresentation torus = parse_presentation(
      "bianchi-presentation 1\nfield 1\n"
      "generator x 1 0 1 0 0 0 1 0\ngenerator y 1 0 0 1 0 0 1 0\nrelator [x,y]\n");
  FoxJacobian t = build_fox_jacobian(torus, 1, [](const Mat2&) { return IntMatrix{{1}}; });
  AbelianGroup ht = homology(t.d1.to_dense().transpose(), t.d2.to_dense().transpose());
  CHECK(ht.betti == 2);
  CHECK(ht.torsion.empty());
  TorsionReport r0 = compute_torsion(torus, LatticeRep(torus.field, 0, LatticeKind::Standard));
  CHECK(r0.h1.betti == 4);
  CHECK(r0.h0.betti == 2);

  GroupPresentation broken = torus;
  broken.relators = {{1}};
  CHECK_THROWS(build_complex(broken, LatticeRep(broken.field, 1, LatticeKind::Standard)));
}

TEST_CASE("chain condition on the built-in groups") {
  for (long D : builtin_presentation_fields()) {
    GroupPresentation p = load_presentation(D);
    for (int m = 0; m <= 3; ++m)
      for (LatticeKind k : {LatticeKind::Standard, LatticeKind::Dual, LatticeKind::Barred}) {
        FoxJacobian j = build_complex(p, LatticeRep(p.field, m, k));
        CHECK(j.chain_condition());
        // reduction modulo a prime keeps the condition
        LatticeRep rep(p.field, m, k);
        FoxJacobian jm = build_fox_jacobian(p, rep.z_rank(), [&](const Mat2& g) {
          return rep.z_action(mat_inv_sl2(p.field, g)).transpose();
        }, 1000003);
        IntMatrix prod = jm.d2.to_dense() * jm.d1.to_dense();
        bool zero_mod_p = true;
        for (size_t a = 0; a < prod.rows(); ++a)
          for (size_t b = 0; b < prod.cols(); ++b)
            if (prod(a, b) % 1000003 != 0) zero_mod_p = false;
        CHECK(zero_mod_p);
      }
  }
}

TEST_CASE("complex dimensions for D=11 level 3") {
  GroupPresentation base = load_presentation(11);
  CongruenceSubgroup S = principal_congruence_subgroup(base, parse_ideal(base.field, "3"));
  FoxJacobian j = build_complex(S.presentation, LatticeRep(base.field, 1, LatticeKind::Barred));
  CHECK(j.dim == 8);
  CHECK(j.d2.rows() == S.presentation.relator_count() * 8);
  CHECK(j.d2.cols() == S.presentation.generator_count() * 8);
  CHECK(j.d1.rows() == S.presentation.generator_count() * 8);
  CHECK(j.d1.cols() == 8);
  CHECK(j.chain_condition());
}

TEST_CASE("barred torsion splits as standard times dual") {
  const CongruenceSubgroup& S = d3_level3();
  for (int m = 1; m <= 2; ++m) {
    TorsionReport bar = torsion_h2(S, m);
    DualTorsionComparison cmp = compare_dual_torsion(S, m);
    CHECK(bar.h1_torsion_log == doctest::Approx(cmp.standard.h1_torsion_log + cmp.dual.h1_torsion_log));
    CHECK(bar.h1.betti == cmp.standard.h1.betti + cmp.dual.h1.betti);
    REQUIRE(bar.h2_tors_log.has_value());
    CHECK(*bar.h2_tors_log == bar.h1_torsion_log);
    CHECK(bar.kappa == 12);
    CHECK(bar.betti_matches_cusps == true);
    CHECK(bar.betti_equals_kappa == false);
    CHECK(bar.h1.betti == 48);
    if (m == 1) CHECK(cmp.log_ratio() == doctest::Approx(0));
  }
  CHECK(split_prime_betti(S.presentation, 1).betti1 == 12);
  CHECK(split_prime_betti(S.presentation, 2).betti1 == 12);
}

TEST_CASE("weight zero is copies of the abelianization") {
  const CongruenceSubgroup& S = d3_level3();
  AbelianGroup ab = abelianization(S.presentation);
  TorsionReport bar = compute_torsion(S.presentation, LatticeRep(S.presentation.field, 0, LatticeKind::Barred));
  TorsionReport std0 = compute_torsion(S.presentation, LatticeRep(S.presentation.field, 0, LatticeKind::Standard));
  CHECK(bar.h1.betti == 4 * ab.betti);
  CHECK(bar.h1.torsion == repeat(ab.torsion, 4));
  CHECK(std0.h1.betti == 2 * ab.betti);
  CHECK(std0.h1.torsion == repeat(ab.torsion, 2));
  CHECK(bar.h0.betti == 4);
  CHECK(coinvariants(S.presentation, LatticeRep(S.presentation.field, 1, LatticeKind::Standard)) ==
        compute_torsion(S.presentation, LatticeRep(S.presentation.field, 1, LatticeKind::Standard)).h0);
}

TEST_CASE("both Smith routes agree on a real complex") {
  const CongruenceSubgroup& S = d3_level3();
  TorsionOptions euc;
  euc.snf.method = SnfMethod::Euclidean;
  LatticeRep rep(S.presentation.field, 2, LatticeKind::Standard);
  CHECK(compute_torsion(S.presentation, rep).h1 == compute_torsion(S.presentation, rep, euc).h1);
}
