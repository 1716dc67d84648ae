#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bianchi/congruence.hpp"
#include "bianchi/quadfield.hpp"

using namespace bianchi;

TEST_CASE("field invariants") {
  struct Row {
    long D, disc;
    int units, h;
  };
  for (Row r : {Row{1, -4, 4, 1}, Row{2, -8, 2, 1}, Row{3, -3, 6, 1}, Row{7, -7, 2, 1}, Row{11, -11, 2, 1},
                Row{5, -20, 2, 2}, Row{23, -23, 2, 3}, Row{14, -56, 2, 4}, Row{19, -19, 2, 1}}) {
    QuadField F(r.D);
    CAPTURE(r.D);
    CHECK(F.discriminant() == r.disc);
    CHECK(F.unit_count() == r.units);
    CHECK(F.units().size() == static_cast<size_t>(r.units));
    CHECK(F.class_number() == r.h);
    for (const auto& u : F.units()) CHECK(F.is_unit(u));
  }
  CHECK_THROWS(QuadField(4));
  CHECK_THROWS(QuadField(0));
  CHECK(is_squarefree(30));
  CHECK_FALSE(is_squarefree(12));
}

TEST_CASE("ring arithmetic matches the complex embedding") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> v(-20, 20);
  for (long D : {1L, 2L, 3L, 7L, 11L, 19L}) {
    QuadField F(D);
    for (int t = 0; t < 50; ++t) {
      RingElement x(v(rng), v(rng)), y(v(rng), v(rng));
      auto cx = F.embed(x), cy = F.embed(y);
      CHECK(std::abs(F.embed(F.mul(x, y)) - cx * cy) < 1e-9);
      CHECK(std::abs(F.embed(F.add(x, y)) - (cx + cy)) < 1e-9);
      CHECK(std::abs(F.embed(F.conj(x)) - std::conj(cx)) < 1e-9);
      CHECK(F.norm(x).get_d() == doctest::Approx(std::norm(cx)));
      CHECK(F.trace(x).get_d() == doctest::Approx(2 * cx.real()));
      if (!y.is_zero()) CHECK(F.divexact(F.mul(x, y), y) == x);
      IntMatrix mx = F.mult_matrix(x);
      IntMatrix col(2, 1);
      col(0, 0) = y.a;
      col(1, 0) = y.b;
      IntMatrix prod = mx * col;
      RingElement xy = F.mul(x, y);
      CHECK(prod(0, 0) == xy.a);
      CHECK(prod(1, 0) == xy.b);
    }
    CHECK(F.pow(RingElement(0, 1), 2) == F.sub(F.mul(RingElement(F.omega_trace()), RingElement(0, 1)),
                                                 RingElement(F.omega_norm())));
  }
  QuadField F(1);
  CHECK_THROWS_AS(F.divexact(RingElement(1), RingElement(2)), std::domain_error);
}

TEST_CASE("element and ideal parsing") {
  CHECK(parse_ring_element("3-2*w") == RingElement(3, -2));
  CHECK(parse_ring_element("-w") == RingElement(0, -1));
  CHECK(parse_ring_element("7") == RingElement(7, 0));
  CHECK(parse_ring_element(" 1 + w ") == RingElement(1, 1));
  CHECK_THROWS_AS(parse_ring_element("3+"), std::invalid_argument);
  CHECK_THROWS_AS(parse_ring_element("x"), std::invalid_argument);
  QuadField F(11);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    RingElement x(static_cast<long>(rng() % 41) - 20, static_cast<long>(rng() % 41) - 20);
    CHECK(parse_ring_element(F.format(x)) == x);
  }
  QuadField G(1);
  RingIdeal p = parse_ideal(G, "(2, 1+w)");
  CHECK(p.norm() == 2);
  CHECK(p == RingIdeal::principal(G, RingElement(1, 1)));
  CHECK(parse_ideal(F, "3") == parse_ideal(F, "(3)"));
  CHECK(parse_ideal(F, "3").norm() == 9);
  CHECK_THROWS(parse_ideal(F, "()"));
}

TEST_CASE("ideals") {
  QuadField F(1);
  RingIdeal a = RingIdeal::principal(F, RingElement(2, 1));
  CHECK(a.norm() == 5);
  CHECK(a.contains(RingElement(5)));
  CHECK(a.contains(F.mul(RingElement(2, 1), RingElement(3, -7))));
  CHECK_FALSE(a.contains(RingElement(1)));
  CHECK(RingIdeal::from_generators(F, {RingElement(5), RingElement(2, 1)}) == a);
  QuadField K(11);
  for (long n = 2; n < 12; ++n) CHECK(RingIdeal::principal(K, RingElement(n)).norm() == n * n);
}

TEST_CASE("residue rings") {
  struct Row {
    long D;
    const char* level;
    uint32_t size, units, idempotents;
  };
  // 3 splits in Q(sqrt -11), is inert in Q(sqrt -7) and ramifies in Q(sqrt -3)
  for (Row r : {Row{11, "3", 9, 4, 4}, Row{7, "3", 9, 8, 2}, Row{3, "3", 9, 6, 2}, Row{1, "2+w", 5, 4, 2},
                Row{1, "2", 4, 2, 2}}) {
    QuadField F(r.D);
    ResidueRing R(F, parse_ideal(F, r.level));
    CAPTURE(r.D);
    CHECK(R.size() == r.size);
    CHECK(R.unit_count() == r.units);
    CHECK(R.idempotent_count() == r.idempotents);
    uint32_t brute = 0;
    for (uint32_t x = 0; x < R.size(); ++x) {
      CHECK(R.reduce(R.lift(x)) == x);
      bool inv = false;
      for (uint32_t y = 0; y < R.size(); ++y)
        if (R.mul(x, y) == R.one()) inv = true;
      brute += inv;
      CHECK(R.is_unit(x) == inv);
      for (uint32_t y = 0; y < R.size(); ++y) {
        CHECK(R.reduce(F.mul(R.lift(x), R.lift(y))) == R.mul(x, y));
        CHECK(R.reduce(F.add(R.lift(x), R.lift(y))) == R.add(x, y));
        CHECK(R.add(R.sub(x, y), y) == x);
      }
    }
    CHECK(brute == r.units);
  }
}

TEST_CASE("unipotent index") {
  QuadField F(1), K(11);
  CHECK(unipotent_index(F, parse_ideal(F, "2+w")) == 5);
  CHECK(unipotent_index(K, parse_ideal(K, "3")) == 9);
  CHECK(unipotent_index(K, parse_ideal(K, "1")) == 1);
}

TEST_CASE("matrices over O") {
  QuadField F(7);
  Mat2 x = Mat2::identity();
  x.e[0][1] = RingElement(2, 1);
  Mat2 y = Mat2::identity();
  y.e[1][0] = RingElement(-1, 3);
  Mat2 g = mat_mul(F, x, y);
  CHECK(mat_det(F, g) == RingElement(1));
  CHECK(mat_mul(F, g, mat_inv_sl2(F, g)) == Mat2::identity());
  QuadField Q(1);
  Mat2 n = Mat2::identity();
  n.e[0][1] = 1;
  double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(sl2_operator_norm(Q, n) >= phi);
  CHECK(sl2_operator_norm(Q, n) <= phi + 1e-9);
  CHECK(mat_frobenius_sq(Q, n) == 3);
  CHECK(mat_congruent_identity(Q, Mat2::identity(), parse_ideal(Q, "3")));
  Mat2 m3 = Mat2::identity();
  m3.e[0][1] = 3;
  CHECK(mat_congruent_identity(Q, m3, parse_ideal(Q, "3")));
  CHECK_FALSE(mat_congruent_identity(Q, n, parse_ideal(Q, "3")));
}

TEST_CASE("special values") {
  // Catalan's constant and L(2, chi_-3) to 13 digits
  CHECK(dirichlet_l2(QuadField(1), 200000).value == doctest::Approx(0.9159655941772190).epsilon(1e-12));
  CHECK(dirichlet_l2(QuadField(3), 200000).value == doctest::Approx(0.7813024128964862).epsilon(1e-12));
  ZetaValue z = zeta_at_2(QuadField(1), 10);
  CHECK(z.error_bound <= 1e-10);
  CHECK(z.value == doctest::Approx(M_PI * M_PI / 6 * 0.9159655941772190).epsilon(1e-10));
  // Whitehead link / 12 and figure-eight knot / 12
  CHECK(bianchi_covolume(QuadField(1)) == doctest::Approx(3.663862376708876 / 12).epsilon(1e-10));
  CHECK(std::abs(bianchi_covolume(QuadField(1)) - 0.305321) < 1e-5);
  CHECK(bianchi_covolume(QuadField(3)) == doctest::Approx(2.029883212819307 / 12).epsilon(1e-10));
}
