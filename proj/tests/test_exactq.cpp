#include "qtop/exactq.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qtop;

TEST_SUITE("exactq") {
  TEST_CASE("make_rat is canonical") {
    Rat r = make_rat(6, -4);
    CHECK(r.get_num() == -3);
    CHECK(r.get_den() == 2);
    CHECK(to_string(r) == "-3/2");
    CHECK(parse_rat("-35/24") == make_rat(-35, 24));
    CHECK(floor_of(make_rat(-1, 2)) == -1);
    CHECK(frac_of(make_rat(-1, 2)) == make_rat(1, 2));
  }

  TEST_CASE("cyc_e basics") {
    CHECK(cyc_e(make_rat(1, 2)) == CycNum(Rat(-1)));
    CHECK(cyc_e(Rat(0)) == CycNum(Rat(1)));
    CHECK(cyc_e(make_rat(1, 3)) + cyc_e(make_rat(2, 3)) == CycNum(Rat(-1)));
    CHECK(cyc_e(make_rat(7, 5)) == cyc_e(make_rat(2, 5)));
    CHECK(cyc_e(make_rat(-1, 5)) == cyc_e(make_rat(4, 5)));
  }

  TEST_CASE("cyc_arith") {
    CHECK(cyc_arith(cyc_e(make_rat(1, 8)), cyc_e(make_rat(1, 8)), CycOp::mul) == cyc_e(make_rat(1, 4)));
    CHECK(cyc_arith(cyc_e(make_rat(1, 5)), CycNum(), CycOp::add) == cyc_e(make_rat(1, 5)));
    CycNum s;
    for (int j = 0; j < 12; ++j) s += cyc_e(make_rat(j, 12));
    CHECK(s.is_zero());
    CycNum a = cyc_e(make_rat(1, 7)) + CycNum(make_rat(3, 2));
    CHECK(cyc_arith(a, a, CycOp::sub).is_zero());
    CHECK(cyc_arith(a, CycNum(), CycOp::neg) == -a);
  }

  TEST_CASE("exponent law over random rationals") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
    for (int i = 0; i < 200; ++i) {
      Rat r = make_rat(num(rng), den(rng)), s = make_rat(num(rng), den(rng));
      CHECK(cyc_e(r) * cyc_e(s) == cyc_e(r + s));
    }
  }

  TEST_CASE("inverse and division") {
    CycNum z = cyc_e(make_rat(1, 12)) - cyc_e(make_rat(-1, 12));
    CHECK(z * z.inverse() == CycNum(Rat(1)));
    CycNum w = CycNum(Rat(2)) + cyc_e(make_rat(1, 9)) * CycNum(make_rat(-1, 3));
    CHECK((w / z) * z == w);
  }

  TEST_CASE("canonical coefficients round-trip") {
    CycNum z = cyc_e(make_rat(5, 24)) * CycNum(make_rat(3, 7)) + cyc_e(make_rat(1, 8));
    CycNum back = CycNum::from_coeffs(z.level(), z.coeffs());
    CHECK(back == z);
    CHECK(back.coeffs() == z.coeffs());
  }

  TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_poly(3) == std::vector<Int>{1, 1, 1});
    CHECK(cyclotomic_poly(4) == std::vector<Int>{1, 0, 1});
    CHECK(cyclotomic_poly(12) == std::vector<Int>{1, 0, -1, 0, 1});
    CHECK(cyclotomic_poly(105).size() == 49);  // first cyclotomic polynomial with a coefficient -2
    bool has_minus_two = false;
    for (const auto& c : cyclotomic_poly(105)) has_minus_two |= (c == -2);
    CHECK(has_minus_two);
  }

  TEST_CASE("embedding") {
    PrecisionGuard g(160);
    ComplexHP i = cyc_embed(cyc_e(make_rat(1, 4)), 128);
    CHECK(abs(i.re) < Real(1e-36));
    CHECK(abs(i.im - 1) < Real(1e-36));
    ComplexHP z = cyc_embed(cyc_e(make_rat(1, 6)), 128);
    CHECK(abs(z.re - Real(0.5)) < Real(1e-36));
    CHECK(abs(z.im - sqrt(Real(3)) / 2) < Real(1e-36));
    ComplexHP m = cyc_embed(CycNum(Rat(-1)), 128);
    CHECK(m.real_d() == -1.0);
    CHECK(m.imag_d() == 0.0);
  }

  TEST_CASE("embedding respects products") {
    PrecisionGuard g(160);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> lev(1, 120), c(-5, 5);
    for (int i = 0; i < 200; ++i) {
      long L1 = lev(rng), L2 = lev(rng);
      CycNum a, b;
      for (int j = 0; j < 4; ++j) {
        a += CycNum::root(L1, c(rng) + 5) * CycNum(Rat(c(rng)));
        b += CycNum::root(L2, c(rng) + 5) * CycNum(Rat(c(rng)));
      }
      ComplexHP lhs = cyc_embed(a * b, 128), rhs = cyc_embed(a, 128) * cyc_embed(b, 128);
      double bound = cyc_embed_bound(a * b, 128) +
                     (a.l1_norm().get_d() + 1) * (b.l1_norm().get_d() + 1) * std::ldexp(1.0, -120);
      CHECK((lhs - rhs).abs().convert_to<double>() <= bound);
    }
  }

  TEST_CASE("cyc_sqrt") {
    for (long m : {2L, 3L, 5L, 6L, 8L, 12L}) {
      CycNum r = cyc_sqrt(m);
      CHECK(r * r == CycNum(Rat(m)));
      CHECK(r.embed(128).real_d() == doctest::Approx(std::sqrt(double(m))));
    }
  }

  TEST_CASE("bernoulli") {
    CHECK(bernoulli_poly(1, make_rat(1, 2)) == 0);
    CHECK(bernoulli_poly(0, make_rat(7, 3)) == 1);
    CHECK(bernoulli_poly(2, Rat(0)) == make_rat(1, 6));
    CHECK(bernoulli_number(4) == make_rat(-1, 30));
    for (unsigned i = 1; i <= 8; ++i)
      for (Rat x : {Rat(0), make_rat(1, 2), Rat(3), make_rat(-2, 5)}) {
        Rat xp = 1;
        for (unsigned e = 0; e + 1 < i; ++e) xp *= x;
        CHECK(bernoulli_poly(i, x + 1) - bernoulli_poly(i, x) == Rat(i) * xp);
      }
  }

  TEST_CASE("RootSum matches direct sums") {
    RootSum rs(12);
    rs.add(1, 3);
    rs.add(7, 3);  // zeta^7 = -zeta
    rs.add(0, 2);
    CHECK(rs.value() == CycNum(Rat(2)));
  }
}
