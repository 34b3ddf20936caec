#include "qtop/conebasis.hpp"

#include <cstdlib>
#include <algorithm>
#include <numeric>
#include <tuple>
#include <sstream>

namespace qtop {

namespace {

long det2(const Mat2& A) { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }

Mat2 mul(const Mat2& A, const Mat2& B) {
  Mat2 C{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) C[i][j] = A[i][0] * B[0][j] + A[i][1] * B[1][j];
  return C;
}

Mat2 transpose(const Mat2& A) { return {{{A[0][0], A[1][0]}, {A[0][1], A[1][1]}}}; }

Mat2 columns(const Vec2& u, const Vec2& v) { return {{{u[0], v[0]}, {u[1], v[1]}}}; }

Vec2 mat_vec(const Mat2& A, const Vec2& v) { return {A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1]}; }

Vec2 primitive(Vec2 v) {
  long g = std::gcd(std::labs(v[0]), std::labs(v[1]));
  if (g > 1) v = {v[0] / g, v[1] / g};
  return v;
}

std::string vstr(const Vec2& v) {
  std::ostringstream os;
  os << "(" << v[0] << "," << v[1] << ")";
  return os.str();
}

void check_symmetric_nonsingular(const Mat2& S) {
  if (S[0][1] != S[1][0]) throw InputError("S must be symmetric");
  if (det2(S) == 0) throw InputError("S is singular");
}

// unimodular matrix with first column the primitive vector v
Mat2 complete(const Vec2& v) {
  // x v0 + y v1 = 1 gives second column (-y, x)
  long a = v[0], b = v[1];
  long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    long q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) x0 = -x0, y0 = -y0, a = -a;
  if (a != 1) throw ConsistencyError("vector is not primitive");
  return columns(v, {-y0, x0});
}

// a primitive v with sign * Q(v) < 0
Vec2 vector_with_sign(const Mat2& S, int sign) {
  long a = sign * S[0][0], b = sign * S[0][1], c = sign * S[1][1];
  if (a < 0) return {1, 0};
  if (c < 0) return {0, 1};
  if (a == 0) {
    // Q(m, 1) = 2bm + c, b != 0 since det S < 0
    long m = b > 0 ? -(c / (2 * b) + 1) : c / (-2 * b) + 1;
    return primitive({m, 1});
  }
  // a > 0: Stern-Brocot descent towards the root interval of a x^2 + 2bx + c with x = m/n,
  // testing (am + bn)^2 < -det S n^2 exactly
  long d = -(a * c - b * b);
  long lm = -1, ln = 0, rm = 1, rn = 0;
  for (int it = 0; it < 100000; ++it) {
    long m = lm + rm, n = ln + rn;
    if (n == 0) m = 0, n = 1;
    long u = a * m + b * n;
    if (u * u < d * n * n) return {m, n};
    if (u > 0) rm = m, rn = n;
    else lm = m, ln = n;
  }
  throw ConsistencyError("Stern-Brocot search did not terminate");
}

// lambda = e1, lambda' = t e1 + e2 in coordinates where Q(e1) < 0
std::pair<Vec2, Vec2> case1(const Mat2& S) {
  long a = S[0][0], b = S[0][1], c = S[1][1];
  for (long t = 0;; ++t) {
    if (a * t + b < 0 && a * t * t + 2 * b * t + c < 0) return {Vec2{1, 0}, Vec2{t, 1}};
    if (t > 1000000) throw ConsistencyError("case 1 shear did not terminate");
  }
}

bool negative_triple(const Mat2& S, const Vec2& l, const Vec2& lp) {
  return quad(S, l) < 0 && quad(S, lp) < 0 && bilinear(S, l, lp) < 0;
}

std::optional<ConeBasis> try_basis(const Mat2& S, const Vec2& l, const Vec2& lp, Vec2 tl, Vec2 tlp) {
  long M = bilinear(S, l, tl), N = -bilinear(S, lp, tlp);
  if (bilinear(S, l, tlp) != 0 || bilinear(S, lp, tl) != 0) return std::nullopt;
  if (M == 0 || N == 0) return std::nullopt;
  if (M < 0) tl = {-tl[0], -tl[1]}, M = -M;
  if (N < 0) tlp = {-tlp[0], -tlp[1]}, N = -N;
  if (std::labs(det2(columns(tl, tlp))) != 1) return std::nullopt;
  ConeBasis b{l, lp, tl, tlp, M, N, permanent(columns(tl, tlp)), "kernel"};
  return b;
}

}  // namespace

long bilinear(const Mat2& S, const Vec2& u, const Vec2& v) {
  return u[0] * (S[0][0] * v[0] + S[0][1] * v[1]) + u[1] * (S[1][0] * v[0] + S[1][1] * v[1]);
}

Mat2 to_mat2(const std::array<std::array<Int, 2>, 2>& S) {
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (!S[i][j].fits_slong_p()) throw std::overflow_error("S entry too large");
      r[i][j] = S[i][j].get_si();
    }
  return r;
}

long permanent(const Mat2& A) { return A[0][0] * A[1][1] + A[0][1] * A[1][0]; }

nlohmann::json ConeBasis::to_json() const {
  return {{"lambda", lambda}, {"lambdaP", lambdaP}, {"tlambda", tlambda}, {"tlambdaP", tlambdaP},
          {"Mp", Mp},         {"Np", Np},           {"perm", perm},       {"source", source}};
}

ConeBasis ConeBasis::from_json(const nlohmann::json& j) {
  ConeBasis b;
  b.lambda = j.at("lambda").get<Vec2>();
  b.lambdaP = j.at("lambdaP").get<Vec2>();
  b.tlambda = j.at("tlambda").get<Vec2>();
  b.tlambdaP = j.at("tlambdaP").get<Vec2>();
  b.Mp = j.at("Mp").get<long>();
  b.Np = j.at("Np").get<long>();
  b.perm = j.at("perm").get<long>();
  b.source = j.value("source", "pinned");
  return b;
}

void validate_cone_basis(const Mat2& S, const ConeBasis& b) {
  auto fail = [](const std::string& m) { throw ConsistencyError("invalid cone basis: " + m); };
  if (!negative_triple(S, b.lambda, b.lambdaP)) fail("Q(lambda), Q(lambda'), tlambda S lambda' must all be < 0");
  Mat2 A = columns(b.tlambda, b.tlambdaP);
  if (std::labs(det2(A)) != 1) fail("(tl, tl') is not unimodular");
  Mat2 D = mul(transpose(columns(b.lambda, b.lambdaP)), mul(S, A));
  if (D[0][1] != 0 || D[1][0] != 0 || D[0][0] != b.Mp || D[1][1] != -b.Np) fail("t(l,l') S (tl,tl') != diag(M',-N')");
  if (b.Mp <= 0 || b.Np <= 0) fail("M', N' must be positive");
  if (b.perm != permanent(A) || b.perm == 0) fail("bad permanent");
}

SNF2 snf2(const Mat2& S) {
  check_symmetric_nonsingular(S);
  // U S V = D, P = tU, Ptilde = V
  Mat2 D = S, U{{{1, 0}, {0, 1}}}, V{{{1, 0}, {0, 1}}};
  auto row_op = [&](int i, int j, long q) {  // row_i -= q row_j
    for (int c = 0; c < 2; ++c) D[i][c] -= q * D[j][c], U[i][c] -= q * U[j][c];
  };
  auto col_op = [&](int i, int j, long q) {  // col_i -= q col_j
    for (int r = 0; r < 2; ++r) D[r][i] -= q * D[r][j], V[r][i] -= q * V[r][j];
  };
  auto swap_rows = [&] { std::swap(D[0], D[1]), std::swap(U[0], U[1]); };
  auto swap_cols = [&] {
    for (int r = 0; r < 2; ++r) std::swap(D[r][0], D[r][1]), std::swap(V[r][0], V[r][1]);
  };
  for (;;) {
    // move a smallest nonzero entry to (0,0)
    int bi = -1, bj = -1;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (D[i][j] != 0 && (bi < 0 || std::labs(D[i][j]) < std::labs(D[bi][bj]))) bi = i, bj = j;
    if (bi == 1) swap_rows();
    if (bj == 1) swap_cols();
    bool changed = false;
    if (D[1][0] != 0) {
      row_op(1, 0, D[1][0] / D[0][0]);
      changed = true;
    }
    if (D[0][1] != 0) {
      col_op(1, 0, D[0][1] / D[0][0]);
      changed = true;
    }
    if (changed) continue;
    if (D[1][1] % D[0][0] != 0) {
      // bring D11 into row 0 and keep reducing
      for (int c = 0; c < 2; ++c) D[0][c] += D[1][c], U[0][c] += U[1][c];
      continue;
    }
    break;
  }
  if (D[0][0] < 0)
    for (int c = 0; c < 2; ++c) D[0][c] = -D[0][c], U[0][c] = -U[0][c];
  if (D[1][1] < 0)
    for (int c = 0; c < 2; ++c) D[1][c] = -D[1][c], U[1][c] = -U[1][c];
  return {transpose(U), V, D[0][0], D[1][1]};
}

std::pair<Vec2, Vec2> find_negative_pair(const Mat2& S) {
  check_symmetric_nonsingular(S);
  if (det2(S) >= 0) throw InputError("S not indefinite");
  Vec2 v = vector_with_sign(S, 1);
  Mat2 A = complete(v);
  Mat2 S1 = mul(transpose(A), mul(S, A));
  auto [l, lp] = case1(S1);
  std::pair<Vec2, Vec2> r{mat_vec(A, l), mat_vec(A, lp)};
  if (!negative_triple(S, r.first, r.second)) throw ConsistencyError("negative pair failed validation");
  return r;
}

std::optional<ConeBasis> diagonalizing_basis(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP,
                                             std::string* why, long search_bound) {
  if (!negative_triple(S, lambda, lambdaP)) throw InputError("pair is not a negative pair for S");
  // tl is in the kernel of the row t(lambda') S, tl' in the kernel of t(lambda) S
  Vec2 r0 = mat_vec(transpose(S), lambda), r1 = mat_vec(transpose(S), lambdaP);
  Vec2 tl = primitive({-r1[1], r1[0]}), tlp = primitive({-r0[1], r0[0]});
  if (auto b = try_basis(S, lambda, lambdaP, tl, tlp)) return b;
  // bounded search; diagonality pins the directions, so this only succeeds on degenerate inputs
  for (long B = 1; B <= search_bound; ++B)
    for (long a = -B; a <= B; ++a)
      for (long c = -B; c <= B; ++c)
        for (long bb = -B; bb <= B; ++bb)
          for (long d = -B; d <= B; ++d) {
            if (std::max({std::labs(a), std::labs(bb), std::labs(c), std::labs(d)}) != B) continue;
            if (std::labs(a * d - bb * c) != 1) continue;
            if (auto b = try_basis(S, lambda, lambdaP, {a, c}, {bb, d})) {
              b->source = "search";
              return b;
            }
          }
  if (why) {
    std::ostringstream os;
    os << "no unimodular diagonalizing basis for lambda=" << vstr(lambda) << ", lambda'=" << vstr(lambdaP)
       << "; kernel vectors " << vstr(tl) << ", " << vstr(tlp) << " have det " << det2(columns(tl, tlp));
    *why = os.str();
  }
  return std::nullopt;
}

FloorSplit floor_in_basis(const RatVec2& v, const ConeBasis& b) {
  Mat2 A = b.basis_matrix();
  long d = det2(A);
  if (std::labs(d) != 1) throw InputError("basis is not unimodular");
  // A^-1 = adj(A) / d
  FloorSplit f;
  f.coords[0] = Rat(A[1][1] * v[0] - A[0][1] * v[1]) / d;
  f.coords[1] = Rat(-A[1][0] * v[0] + A[0][0] * v[1]) / d;
  f.coords[0].canonicalize();
  f.coords[1].canonicalize();
  long x = floor_of(f.coords[0]).get_si(), y = floor_of(f.coords[1]).get_si();
  f.floorVec = mat_vec(A, {x, y});
  f.frac = {v[0] - f.floorVec[0], v[1] - f.floorVec[1]};
  f.fracCoords = {f.coords[0] - x, f.coords[1] - y};
  return f;
}

bool cone_convergent(const Mat2& S, const ConeBasis& b) {
  long p = quad(S, b.tlambda), s = quad(S, b.tlambdaP), r = bilinear(S, b.tlambda, b.tlambdaP);
  return p > 0 && s > 0 && (r >= 0 || r * r < p * s);
}

ConeBasis cone_basis(const Mat2& S) {
  auto [l, lp] = find_negative_pair(S);
  for (long t : {0L, 1L, -1L, 2L, -2L, 3L, -3L, 4L, -4L, 5L, -5L}) {
    Vec2 lp2 = {lp[0] + t * l[0], lp[1] + t * l[1]};
    if (!negative_triple(S, l, lp2)) continue;
    auto b = diagonalizing_basis(S, l, lp2);
    if (b && cone_convergent(S, *b)) {
      validate_cone_basis(S, *b);
      return *b;
    }
  }
  // constructive: unimodular (tl, tl') with Gram entries p, r, s > 0, then
  // lambda = -(s tl - r tl'), lambda' = -(r tl - p tl')
  Vec2 u = vector_with_sign(S, -1);
  Mat2 A = complete(u);
  Vec2 w = {A[0][1], A[1][1]};
  while (!(quad(S, w) > 0 && bilinear(S, u, w) > 0)) w = {w[0] + u[0], w[1] + u[1]};
  long p = quad(S, u), s = quad(S, w), r = bilinear(S, u, w);
  Vec2 nl = primitive({-(s * u[0] - r * w[0]), -(s * u[1] - r * w[1])});
  Vec2 nlp = primitive({-(r * u[0] - p * w[0]), -(r * u[1] - p * w[1])});
  auto b = try_basis(S, nl, nlp, u, w);
  if (!b || !cone_convergent(S, *b)) throw ConsistencyError("constructive cone basis failed");
  b->source = "constructive";
  validate_cone_basis(S, *b);
  return *b;
}

ConeBasis poincare_cone_basis() {
  return {{-1, -6}, {-6, -30}, {1, 0}, {0, -1}, 6, 6, -1, "pinned"};
}

}  // namespace qtop
