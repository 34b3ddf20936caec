#pragma once

#include "qtop/plumbing.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>

namespace qtop {

using Vec2 = std::array<long, 2>;
using Mat2 = std::array<std::array<long, 2>, 2>;  // row-major
using RatVec2 = std::array<Rat, 2>;

// tu S v
long bilinear(const Mat2& S, const Vec2& u, const Vec2& v);
inline long quad(const Mat2& S, const Vec2& v) { return bilinear(S, v, v); }
Mat2 to_mat2(const std::array<std::array<Int, 2>, 2>& S);

struct ConeBasis {
  Vec2 lambda{}, lambdaP{};
  Vec2 tlambda{}, tlambdaP{};  // a basis of Z^2
  long Mp = 0, Np = 0;
  long perm = 0;
  std::string source;  // "kernel", "search", "constructive" or "pinned"

  Mat2 basis_matrix() const { return {{{tlambda[0], tlambdaP[0]}, {tlambda[1], tlambdaP[1]}}}; }
  nlohmann::json to_json() const;
  static ConeBasis from_json(const nlohmann::json& j);
};

// throws ConsistencyError unless every ConeBasis invariant holds for S
void validate_cone_basis(const Mat2& S, const ConeBasis& b);

struct SNF2 {
  Mat2 P{}, Ptilde{};
  long M = 0, N = 0;
};
// tP S Ptilde = diag(M, N), 0 < M | N
SNF2 snf2(const Mat2& S);

std::pair<Vec2, Vec2> find_negative_pair(const Mat2& S);

// kernel construction, then a bounded search; nullopt with a message in *why when neither works
std::optional<ConeBasis> diagonalizing_basis(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP,
                                             std::string* why = nullptr, long search_bound = 12);

long permanent(const Mat2& A);

struct FloorSplit {
  Vec2 floorVec{};
  RatVec2 frac{};    // v - floorVec
  RatVec2 coords{};  // basis coordinates of v
  RatVec2 fracCoords{};  // basis coordinates of frac, in [0,1)
};
FloorSplit floor_in_basis(const RatVec2& v, const ConeBasis& b);

// whether Q(x tl + y tl') -> infinity on the support of the false theta weight
bool cone_convergent(const Mat2& S, const ConeBasis& b);

// find_negative_pair -> diagonalizing_basis with shear retries, then a constructive fallback;
// every candidate must also pass cone_convergent
ConeBasis cone_basis(const Mat2& S);

// lambda = (-1,-6), lambda' = (-6,-30), tl = (1,0), tl' = (0,-1)
ConeBasis poincare_cone_basis();

}  // namespace qtop
