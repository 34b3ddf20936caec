#include "qtop/gauss.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qtop;

namespace {

HGraph poincare() { return HGraph{{1, 3, 2, 3, -1, -1}}; }

std::string definiteness(const QuadFormData& sd) {
  return sd.invS.pos == 2 ? "positive" : sd.invS.neg == 2 ? "negative" : "indefinite";
}

}  // namespace

TEST_SUITE("plumbing") {
  TEST_CASE("parse_graph") {
    auto g = parse_graph(nlohmann::json::parse(
        R"({"weights": [1,3,2,3,-1,-1], "edges": [[1,2],[1,3],[1,4],[2,5],[2,6]]})"));
    CHECK(g == poincare().graph());
    auto h = as_hgraph(g);
    REQUIRE(h);
    CHECK(h->w == poincare().w);
    auto y = parse_graph(nlohmann::json::parse(R"({"weights": [1,5,2,3], "edges": [[1,2],[1,3],[1,4]]})"));
    CHECK(y.degrees() == std::vector<int>{3, 1, 1, 1});
    CHECK_FALSE(as_hgraph(y));
    CHECK_THROWS_AS(parse_graph(nlohmann::json::parse(R"({"weights": [1,2,3], "edges": [[1,2],[2,3],[3,1]]})")),
                    InputError);
    CHECK_THROWS_AS(parse_graph(nlohmann::json::parse(R"({"weights": [1,2,3], "edges": [[1,2],[2,1]]})")),
                    InputError);
    CHECK(parse_graph(graph_to_json(y)) == y);
  }

  TEST_CASE("linking matrix and invariants") {
    IntMatrix W = linking_matrix(poincare().graph());
    CHECK(W[0][0] == 1);
    CHECK(W[5][5] == -1);
    CHECK(W[0][1] == 1);
    CHECK(W[1][5] == 1);
    CHECK(W[2][3] == 0);
    auto inv = matrix_invariants(W);
    CHECK(inv.det == -1);
    CHECK(inv.pos == 3);
    CHECK(inv.neg == 3);
    CHECK(linking_matrix(make_graph({5}, {})) == IntMatrix{{5}});
    auto id = matrix_invariants(IntMatrix{{1, 0}, {0, 1}});
    CHECK(id.det == 1);
    CHECK(id.sigma() == 2);
    auto t = matrix_invariants(linking_matrix(HGraph{{1, 0, -2, -5, -3, -4}}.graph()));
    CHECK(t.pos == 1);
    CHECK(t.neg == 5);
    auto t2 = matrix_invariants(linking_matrix(HGraph{{-1, -4, -2, -5, -2, -5}}.graph()));
    CHECK(t2.pos == 1);
    CHECK(t2.neg == 5);
    CHECK_THROWS_AS(matrix_invariants(IntMatrix{{1, 1}, {1, 1}}), InputError);
  }

  TEST_CASE("signature survives a zero pivot") {
    // [[0,1],[1,0]] needs the symmetric fallback
    auto inv = matrix_invariants(IntMatrix{{0, 1}, {1, 0}});
    CHECK(inv.det == -1);
    CHECK(inv.pos == 1);
    CHECK(inv.neg == 1);
  }

  TEST_CASE("s_data for the Poincare H-graph") {
    QuadFormData sd = s_data(poincare());
    CHECK(sd.S[0][0] == 30);
    CHECK(sd.S[0][1] == -6);
    CHECK(sd.S[1][0] == -6);
    CHECK(sd.S[1][1] == 1);
    CHECK(sd.M == 6);
    CHECK(sd.N == 1);
    CHECK(sd.a == -5);
    CHECK(sd.c == -1);
    CHECK(sd.detW == -1);
    CHECK(sd.detS == -6);
    CHECK(sd.sigmaW == 0);
    CHECK(sd.sigmaS == 0);
    CHECK(sd.sigmaWprime == 0);
    CHECK(sd.prefactorExponent == make_rat(-35, 24));
    CHECK(sd.Q(make_rat(1, 12), make_rat(1, 2)) == make_rat(5, 24) - make_rat(1, 2) + make_rat(1, 4));
  }

  TEST_CASE("s_data errors") {
    CHECK_THROWS_AS(s_data(HGraph{{-2, -1, -2, 7, -4, -5}}), InputError);  // det 27
    QuadFormData sd = s_data(HGraph{{1, 1, -2, 3, -3, 2}});
    CHECK(sd.s_indefinite());
    auto inv = matrix_invariants(sd.W);
    CHECK(inv.pos == 3);
    CHECK(inv.neg == 3);
  }

  TEST_CASE("char_sets for the Poincare H-graph") {
    WeightedCharSet cs = char_sets(poincare());
    std::map<Rat, long> T = {{make_rat(1, 12), 1}, {make_rat(5, 12), -1}, {make_rat(7, 12), -1}, {make_rat(11, 12), 1}};
    std::map<Rat, long> U = {{make_rat(-1, 2), 1}, {make_rat(1, 2), -2}, {make_rat(3, 2), 1}};
    CHECK(cs.T == T);
    CHECK(cs.U == U);
    CHECK(cs.S().size() == 12);
  }

  TEST_CASE("Table 1 rows with correct printed data") {
    struct Row {
      std::array<long, 6> w;
      int pos, neg;
      const char* def;
    };
    // the rows of Table 1 that reproduce as printed
    for (const Row& r : std::vector<Row>{{{-1, -3, -3, -4, -3, -4}, 0, 6, "positive"},
                                         {{-1, -4, -2, -5, -2, -7}, 0, 6, "positive"},
                                         {{-1, -2, -3, 5, -2, -3}, 1, 5, "positive"},
                                         {{-1, -3, -2, -7, -2, 3}, 1, 5, "positive"},
                                         {{1, 0, -2, -5, -3, -4}, 1, 5, "indefinite"},
                                         {{-1, -4, -2, -5, -2, -5}, 1, 5, "indefinite"},
                                         {{-1, -2, -2, 5, -3, -4}, 2, 4, "indefinite"},
                                         {{0, -1, 2, 3, 3, -8}, 3, 3, "positive"},
                                         {{0, -1, 1, -3, 3, 5}, 3, 3, "positive"},
                                         {{1, 1, -2, 3, -3, 2}, 3, 3, "indefinite"},
                                         {{1, 1, -2, -7, 4, 7}, 3, 3, "indefinite"}}) {
      CAPTURE(r.w);
      QuadFormData sd = s_data(HGraph{r.w});
      auto inv = matrix_invariants(sd.W);
      CHECK(inv.pos == r.pos);
      CHECK(inv.neg == r.neg);
      CHECK(definiteness(sd) == r.def);
    }
  }

  TEST_CASE("Table 1 rows whose printed data do not reproduce") {
    // values from an independent floating point eigenvalue computation
    auto inv = matrix_invariants(linking_matrix(HGraph{{0, -1, -4, -5, -1, -4}}.graph()));
    CHECK(inv.det == -71);
    CHECK(inv.pos == 1);
    CHECK(inv.neg == 5);
    CHECK(definiteness(s_data(HGraph{{0, 0, -1, -2, -2, -5}})) == "negative");
    CHECK(matrix_invariants(linking_matrix(HGraph{{-2, -1, -2, 7, -4, -5}}.graph())).det == 27);
    CHECK(definiteness(s_data(HGraph{{-1, -1, 2, -3, -3, 5}})) == "positive");
    CHECK(definiteness(s_data(HGraph{{-1, -1, 2, 3, -4, -5}})) == "positive");
  }

  TEST_CASE("Lemma 3.1 and Remark 3.3 on random H-graphs") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
      HGraph h = random_hgraph(rng, i % 2 == 0);
      CAPTURE(h.w);
      QuadFormData sd;
      REQUIRE_NOTHROW(sd = s_data(h));  // s_data re-checks Lemma 3.1(1)-(5)
      CHECK(sd.detS == sd.M * sd.N * sd.detW);
      CHECK(sd.S[0][1] == sd.detW * sd.M * sd.N);
      WeightedCharSet cs = char_sets(h);
      long sc = 0, sp = 0;
      Rat sa = 0, sb = 0;
      for (auto& [a, chi] : cs.T) sc += chi, sa += a * chi;
      for (auto& [b, psi] : cs.U) sp += psi, sb += b * psi;
      CHECK(sc == 0);
      CHECK(sp == 0);
      CHECK(sa == 0);
      CHECK(sb == 0);
      if (std::labs(h.w[2]) != 1 && std::labs(h.w[3]) != 1)
        for (auto& [a, chi] : cs.T) CHECK((a >= 0 && a < 1));
      if (std::labs(h.w[4]) != 1 && std::labs(h.w[5]) != 1)
        for (auto& [b, psi] : cs.U) CHECK((b >= 0 && b < 1));
    }
  }

  TEST_CASE("G and H") {
    PrecisionGuard g(160);
    HGraph h{{1, 1, 2, 3, -1, -1}};
    ComplexHP q = complex_hp(0.5, 0, 128);
    auto [G, H] = gh_eval(h, q);
    ComplexHP e = g_expansion(h, q);
    CHECK((G - e).abs().convert_to<double>() < 1e-12);
    // w5 = w6 = -1: H = (q^-1 - q)^2 / (q - q^-1) = q - 1/q
    auto [G3, H3] = gh_eval(h, complex_hp(0.3, 0, 128));
    CHECK(H3.real_d() == doctest::Approx(0.3 - 1 / 0.3).epsilon(1e-14));
    // each factor is antisymmetric under q -> 1/q, three factors
    ComplexHP qi = complex_hp(0.3, 0.2, 128);
    auto [Ga, Ha] = gh_eval(HGraph{{1, 1, 2, 5, 3, 4}}, qi);
    auto [Gb, Hb] = gh_eval(HGraph{{1, 1, 2, 5, 3, 4}}, complex_hp(1, 0, 128) / qi);
    CHECK((Ga + Gb).abs().convert_to<double>() < 1e-20);
    CHECK((Ha + Hb).abs().convert_to<double>() < 1e-20);
  }

  TEST_CASE("G expansion on random pairs") {
    PrecisionGuard g(160);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(1, 9);
    ComplexHP q = complex_hp(0.5, 0, 128);
    for (int i = 0; i < 20; ++i) {
      long w3 = d(rng), w4 = d(rng), w5 = d(rng), w6 = d(rng);
      if (std::gcd(w3, w4) != 1 || std::gcd(w5, w6) != 1) {
        --i;
        continue;
      }
      HGraph h{{1, 1, w3, w4, w5, w6}};
      auto [G, H] = gh_eval(h, q);
      CHECK((G - g_expansion(h, q)).abs().convert_to<double>() < 1e-12);
      CHECK((H - h_expansion(h, q)).abs().convert_to<double>() < 1e-12);
    }
  }

  TEST_CASE("Neumann moves") {
    PlumbGraph y = make_graph({1, 5, 2, 3}, {{1, 2}, {1, 3}, {1, 4}});
    PlumbGraph once = neumann_move(y, MoveKind::b, MoveDir::blowup, {1, -1, -1});
    PlumbGraph twice = neumann_move(once, MoveKind::b, MoveDir::blowup, {1, -1, -1});
    auto h = as_hgraph(twice);
    REQUIRE(h);
    CHECK(matrix_invariants(linking_matrix(twice)).det == -1);
    CHECK(s_data(*h).S == s_data(poincare()).S);
    CHECK(neumann_move(once, MoveKind::b, MoveDir::blowdown, {4, -1, 1}) == y);

    PlumbGraph path = make_graph({2, 0, 3, 7}, {{1, 2}, {2, 3}, {3, 4}});
    PlumbGraph merged = neumann_move(path, MoveKind::c, MoveDir::blowdown, {1, -1, 1});
    CHECK(merged.size() == 2);
    CHECK(std::find(merged.weights.begin(), merged.weights.end(), 5) != merged.weights.end());

    PlumbGraph a = neumann_move(path, MoveKind::a, MoveDir::blowup, {2, 3, 1});
    CHECK(a.size() == 5);
    auto d0 = matrix_invariants(linking_matrix(path)).det, d1 = matrix_invariants(linking_matrix(a)).det;
    CHECK(abs(d0) == abs(d1));
    CHECK(neumann_move(a, MoveKind::a, MoveDir::blowdown, {4, -1, 1}) == path);
  }

  TEST_CASE("Seifert reducibility") {
    CHECK(is_seifert_reducible(poincare()));
    CHECK_FALSE(is_seifert_reducible(HGraph{{1, 0, -2, -5, -3, -4}}));
    CHECK(is_seifert_reducible(HGraph{{0, 0, 1, 5, 7, 9}}));
  }
}
