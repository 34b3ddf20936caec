#pragma once

#include "qtop/exactq.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtop {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// an internal identity from the paper failed to hold
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using IntMatrix = std::vector<std::vector<Int>>;
using RatMatrix = std::vector<std::vector<Rat>>;

// Weighted tree. Vertices are 0-based internally, 1-based in JSON.
struct PlumbGraph {
  std::vector<long> weights;
  std::vector<std::pair<int, int>> edges;

  size_t size() const { return weights.size(); }
  std::vector<int> degrees() const;
  bool operator==(const PlumbGraph& o) const;
};

// H-graph of weights w1..w6, edges 1-2, 1-3, 1-4, 2-5, 2-6
struct HGraph {
  std::array<long, 6> w{};
  PlumbGraph graph() const;
};

PlumbGraph parse_graph(const nlohmann::json& spec);
nlohmann::json graph_to_json(const PlumbGraph& g);
PlumbGraph make_graph(std::vector<long> weights, const std::vector<std::pair<int, int>>& edges1);
void validate_tree(const PlumbGraph& g);
// relabels an H-shaped tree to the standard vertex order; nullopt if not H-shaped
std::optional<HGraph> as_hgraph(const PlumbGraph& g);

IntMatrix linking_matrix(const PlumbGraph& g);

struct MatrixInvariants {
  Int det;
  int pos = 0, neg = 0;
  int sigma() const { return pos - neg; }
};
Int determinant(const IntMatrix& m);
MatrixInvariants matrix_invariants(const IntMatrix& m);
RatMatrix inverse(const IntMatrix& m);

struct QuadFormData {
  IntMatrix W;
  std::array<std::array<Int, 2>, 2> S;
  Int M, N, a, c;
  Int detW, detS;
  int sigmaW = 0, sigmaS = 0;
  int sigmaWprime = 0;
  Rat prefactorExponent;  // (3 sigma_W - sum w - sum_{i>=3} 1/w_i)/4
  MatrixInvariants invW, invS;

  bool s_definite() const { return invS.pos == 2 || invS.neg == 2; }
  bool s_indefinite() const { return invS.pos == 1 && invS.neg == 1; }
  // tS v S v for a rational 2-vector
  Rat Q(const Rat& x, const Rat& y) const;
};

QuadFormData s_data(const HGraph& g);

struct WeightedCharSet {
  std::map<Rat, long> T;  // alpha -> chi
  std::map<Rat, long> U;  // beta -> psi
  struct Elem {
    Rat alpha, beta;
    long eps;
  };
  std::vector<Elem> S() const;
};

WeightedCharSet char_sets(const HGraph& g);

std::pair<ComplexHP, ComplexHP> gh_eval(const HGraph& g, const ComplexHP& q);
// -sum_alpha chi(alpha) sum_{m>=0} q^{2M(m+alpha)} truncated once terms drop below tol
ComplexHP g_expansion(const HGraph& g, const ComplexHP& q, double tol = 1e-20);
ComplexHP h_expansion(const HGraph& g, const ComplexHP& q, double tol = 1e-20);

enum class MoveKind { a, b, c };
enum class MoveDir { blowup, blowdown };

// site: blowup a -> the edge (u,v) to subdivide, blowup b -> the vertex receiving a leaf,
// blowup c -> the vertex to split (its weight is split as (w', w - w') with w' = sign);
// blowdown -> the +-1 or 0 vertex to remove. Vertices 0-based. sign is +-1 for moves a/b.
struct MoveSite {
  int u = -1, v = -1;
  int sign = 1;
};
PlumbGraph neumann_move(const PlumbGraph& g, MoveKind kind, MoveDir dir, const MoveSite& site);

bool is_seifert_reducible(const HGraph& g);

}  // namespace qtop
