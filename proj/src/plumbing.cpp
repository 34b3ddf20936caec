#include "qtop/plumbing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace qtop {

using nlohmann::json;

std::vector<int> PlumbGraph::degrees() const {
  std::vector<int> d(weights.size(), 0);
  for (auto [u, v] : edges) {
    ++d[u];
    ++d[v];
  }
  return d;
}

bool PlumbGraph::operator==(const PlumbGraph& o) const {
  if (weights != o.weights || edges.size() != o.edges.size()) return false;
  auto norm = [](std::vector<std::pair<int, int>> e) {
    for (auto& p : e)
      if (p.first > p.second) std::swap(p.first, p.second);
    std::sort(e.begin(), e.end());
    return e;
  };
  return norm(edges) == norm(o.edges);
}

PlumbGraph HGraph::graph() const {
  return make_graph(std::vector<long>(w.begin(), w.end()), {{1, 2}, {1, 3}, {1, 4}, {2, 5}, {2, 6}});
}

PlumbGraph make_graph(std::vector<long> weights, const std::vector<std::pair<int, int>>& edges1) {
  PlumbGraph g;
  g.weights = std::move(weights);
  for (auto [u, v] : edges1) g.edges.emplace_back(u - 1, v - 1);
  validate_tree(g);
  return g;
}

void validate_tree(const PlumbGraph& g) {
  int n = static_cast<int>(g.size());
  if (n == 0) throw InputError("graph has no vertices");
  std::set<std::pair<int, int>> seen;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop edge");
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) throw InputError("duplicate edge");
    int a = find(u), b = find(v);
    if (a == b) throw InputError("edge set contains a cycle");
    parent[a] = b;
  }
  if (static_cast<int>(g.edges.size()) != n - 1) throw InputError("edge set is not connected");
}

PlumbGraph parse_graph(const json& spec) {
  if (!spec.is_object() || !spec.contains("weights")) throw InputError("graph needs a weights array");
  PlumbGraph g;
  for (const auto& w : spec.at("weights")) {
    if (!w.is_number_integer()) throw InputError("weights must be integers");
    g.weights.push_back(w.get<long>());
  }
  if (spec.contains("edges")) {
    for (const auto& e : spec.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("edges must be pairs");
      g.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
  }
  validate_tree(g);
  return g;
}

json graph_to_json(const PlumbGraph& g) {
  json e = json::array();
  for (auto [u, v] : g.edges) e.push_back({u + 1, v + 1});
  return {{"weights", g.weights}, {"edges", e}};
}

std::optional<HGraph> as_hgraph(const PlumbGraph& g) {
  if (g.size() != 6) return std::nullopt;
  auto deg = g.degrees();
  std::vector<int> centers;
  for (int v = 0; v < 6; ++v) {
    if (deg[v] == 3) centers.push_back(v);
    else if (deg[v] != 1) return std::nullopt;
  }
  if (centers.size() != 2) return std::nullopt;
  int c1 = centers[0], c2 = centers[1];
  std::vector<int> leaves1, leaves2;
  bool joined = false;
  for (auto [u, v] : g.edges) {
    auto hook = [&](int c, int o) {
      if (o == c1 || o == c2) {
        joined = true;
        return;
      }
      (c == c1 ? leaves1 : leaves2).push_back(o);
    };
    if (u == c1 || u == c2) hook(u, v);
    else if (v == c1 || v == c2) hook(v, u);
  }
  if (!joined || leaves1.size() != 2 || leaves2.size() != 2) return std::nullopt;
  std::sort(leaves1.begin(), leaves1.end());
  std::sort(leaves2.begin(), leaves2.end());
  HGraph h;
  h.w = {g.weights[c1], g.weights[c2], g.weights[leaves1[0]], g.weights[leaves1[1]],
         g.weights[leaves2[0]], g.weights[leaves2[1]]};
  return h;
}

IntMatrix linking_matrix(const PlumbGraph& g) {
  size_t n = g.size();
  IntMatrix W(n, std::vector<Int>(n, 0));
  for (size_t v = 0; v < n; ++v) W[v][v] = g.weights[v];
  for (auto [u, v] : g.edges) W[u][v] = W[v][u] = 1;
  return W;
}

Int determinant(const IntMatrix& m) {
  // Bareiss fraction-free elimination
  size_t n = m.size();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

MatrixInvariants matrix_invariants(const IntMatrix& m) {
  MatrixInvariants inv;
  inv.det = determinant(m);
  if (inv.det == 0) throw InputError("singular matrix");
  size_t n = m.size();
  RatMatrix a(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  // congruence elimination; when the diagonal is zero, add a row/column to create a pivot
  std::vector<bool> done(n, false);
  for (size_t step = 0; step < n; ++step) {
    long p = -1;
    for (size_t i = 0; i < n; ++i)
      if (!done[i] && a[i][i] != 0) {
        p = static_cast<long>(i);
        break;
      }
    if (p < 0) {
      size_t i0 = n, j0 = n;
      for (size_t i = 0; i < n && i0 == n; ++i)
        for (size_t j = i + 1; j < n; ++j)
          if (!done[i] && !done[j] && a[i][j] != 0) {
            i0 = i;
            j0 = j;
            break;
          }
      if (i0 == n) break;
      for (size_t k = 0; k < n; ++k) a[i0][k] += a[j0][k];
      for (size_t k = 0; k < n; ++k) a[k][i0] += a[k][j0];
      p = static_cast<long>(i0);
    }
    Rat piv = a[p][p];
    (piv > 0 ? inv.pos : inv.neg)++;
    done[p] = true;
    for (size_t i = 0; i < n; ++i) {
      if (done[i] || a[i][p] == 0) continue;
      Rat f = a[i][p] / piv;
      for (size_t k = 0; k < n; ++k) a[i][k] -= f * a[p][k];
      for (size_t k = 0; k < n; ++k) a[k][i] -= f * a[k][p];
    }
  }
  return inv;
}

RatMatrix inverse(const IntMatrix& m) {
  size_t n = m.size();
  RatMatrix a(n, std::vector<Rat>(2 * n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw InputError("singular matrix");
    std::swap(a[c], a[p]);
    Rat piv = a[c][c];
    for (auto& x : a[c]) x /= piv;
    for (size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  RatMatrix r(n, std::vector<Rat>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r[i][j] = a[i][n + j];
  return r;
}

Rat QuadFormData::Q(const Rat& x, const Rat& y) const {
  return Rat(S[0][0]) * x * x + Rat(2 * S[0][1]) * x * y + Rat(S[1][1]) * y * y;
}

namespace {

int sgn_int(const Int& x) { return sgn(x); }

}  // namespace

QuadFormData s_data(const HGraph& h) {
  const auto& w = h.w;
  for (int i = 2; i < 6; ++i)
    if (w[i] == 0) throw InputError("weights w3..w6 must be nonzero");
  QuadFormData d;
  d.W = linking_matrix(h.graph());
  d.invW = matrix_invariants(d.W);
  d.detW = d.invW.det;
  if (d.detW != 1 && d.detW != -1) throw InputError("det W must be +1 or -1, got " + d.detW.get_str());
  d.sigmaW = d.invW.sigma();
  RatMatrix Wi = inverse(d.W);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rat s = -Wi[i][j];
      if (s.get_den() != 1) throw ConsistencyError("S is not integral");
      d.S[i][j] = s.get_num();
    }
  d.M = Int(w[2]) * w[3];
  d.N = Int(w[4]) * w[5];
  d.a = -Int(w[1]) * w[4] * w[5] + w[4] + w[5];
  d.c = -Int(w[0]) * w[2] * w[3] + w[2] + w[3];
  IntMatrix Sm{{d.S[0][0], d.S[0][1]}, {d.S[1][0], d.S[1][1]}};
  d.invS = matrix_invariants(Sm);
  d.detS = d.invS.det;
  d.sigmaS = d.invS.sigma();
  d.sigmaWprime = d.sigmaW - d.sigmaS;
  for (int i = 2; i < 6; ++i) d.sigmaWprime += w[i] > 0 ? 1 : -1;
  Rat e = 3 * d.sigmaW;
  for (long x : w) e -= x;
  for (int i = 2; i < 6; ++i) e -= make_rat(1, w[i]);
  d.prefactorExponent = e / 4;

  // Lemma 3.1 (1), (2), (3) and (5) in the form valid for both signs of det W
  if (d.detS != d.M * d.N * d.detW) throw ConsistencyError("det S != M N det W");
  if (d.S[0][0] != d.detW * d.M * d.a || d.S[0][1] != d.detW * d.M * d.N || d.S[1][1] != d.detW * d.N * d.c)
    throw ConsistencyError("S != det W [[Ma, MN], [MN, Nc]]");
  if (std::gcd(w[2], w[3]) != 1 || std::gcd(w[4], w[5]) != 1) throw ConsistencyError("gcd condition fails");
  int expect = (1 + sgn_int(d.M * d.N * d.detW)) * sgn_int(d.M * d.a * d.detW);
  if (d.sigmaS != expect) throw ConsistencyError("signature of S disagrees with Lemma 3.1(5)");
  return d;
}

std::vector<WeightedCharSet::Elem> WeightedCharSet::S() const {
  std::vector<Elem> out;
  for (const auto& [a, ca] : T)
    for (const auto& [b, cb] : U) out.push_back({a, b, ca * cb});
  return out;
}

WeightedCharSet char_sets(const HGraph& h) {
  const auto& w = h.w;
  for (int i = 2; i < 6; ++i)
    if (w[i] == 0) throw InputError("weights w3..w6 must be nonzero");
  WeightedCharSet cs;
  auto build = [](long x, long y, std::map<Rat, long>& out) {
    for (int e1 : {1, -1})
      for (int e2 : {1, -1}) out[make_rat(1, 2) + make_rat(e1, 2 * x) + make_rat(e2, 2 * y)] += e1 * e2;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  };
  build(w[2], w[3], cs.T);
  build(w[4], w[5], cs.U);
  return cs;
}

namespace {

ComplexHP qpow(const ComplexHP& q, long n) {
  PrecisionGuard g(q.bits + 32);
  ComplexHP r(Real(1), Real(0), q.bits);
  ComplexHP b = q;
  bool inv = n < 0;
  unsigned long e = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  if (inv) r = ComplexHP(Real(1), Real(0), q.bits) / r;
  return r;
}

ComplexHP ratfun(long x, long y, const ComplexHP& q) {
  auto f = [&](long e) { return qpow(q, e) - qpow(q, -e); };
  ComplexHP den = f(x * y);
  if (den.abs() == 0) throw std::domain_error("pole of G/H: q^(2M) = 1");
  return f(x) * f(y) / den;
}

// |q|^{2M} must be < 1 for the expansion; exponents 2M(m + alpha)
ComplexHP expansion(long x, long y, const ComplexHP& q, double tol) {
  PrecisionGuard g(q.bits + 32);
  long M = x * y;
  std::map<Rat, long> T;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) T[make_rat(1, 2) + make_rat(e1, 2 * x) + make_rat(e2, 2 * y)] += e1 * e2;
  // q^{2M alpha} with rational 2M alpha = integer since alpha in (1/2M)Z
  ComplexHP sum(Real(0), Real(0), q.bits);
  ComplexHP step = qpow(q, 2 * M);
  if (step.abs() >= 1) throw std::domain_error("expansion requires |q|^(2M) < 1");
  for (const auto& [alpha, chi] : T) {
    if (chi == 0) continue;
    Rat e = Rat(2 * M) * alpha;
    if (e.get_den() != 1) throw ConsistencyError("2M alpha is not integral");
    ComplexHP term = qpow(q, e.get_num().get_si());
    ComplexHP part(Real(0), Real(0), q.bits);
    for (int m = 0; m < 100000; ++m) {
      part += term;
      if (term.abs() < tol) break;
      term *= step;
    }
    sum -= scale(part, Real(chi));
  }
  return sum;
}

}  // namespace

std::pair<ComplexHP, ComplexHP> gh_eval(const HGraph& h, const ComplexHP& q) {
  auto one = [&](long x, long y) {
    try {
      return ratfun(x, y, q);
    } catch (const std::domain_error&) {
      return expansion(x, y, q, 1e-30);
    }
  };
  return {one(h.w[2], h.w[3]), one(h.w[4], h.w[5])};
}

ComplexHP g_expansion(const HGraph& h, const ComplexHP& q, double tol) { return expansion(h.w[2], h.w[3], q, tol); }

ComplexHP h_expansion(const HGraph& h, const ComplexHP& q, double tol) { return expansion(h.w[4], h.w[5], q, tol); }

namespace {

std::vector<int> neighbors(const PlumbGraph& g, int v) {
  std::vector<int> out;
  for (auto [a, b] : g.edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  return out;
}

bool has_edge(const PlumbGraph& g, int u, int v) {
  for (auto [a, b] : g.edges)
    if ((a == u && b == v) || (a == v && b == u)) return true;
  return false;
}

PlumbGraph remove_vertex(const PlumbGraph& g, int x) {
  PlumbGraph out;
  for (int v = 0; v < static_cast<int>(g.size()); ++v)
    if (v != x) out.weights.push_back(g.weights[v]);
  auto idx = [x](int v) { return v > x ? v - 1 : v; };
  for (auto [a, b] : g.edges)
    if (a != x && b != x) out.edges.emplace_back(idx(a), idx(b));
  return out;
}

}  // namespace

PlumbGraph neumann_move(const PlumbGraph& g, MoveKind kind, MoveDir dir, const MoveSite& s) {
  int n = static_cast<int>(g.size());
  auto check_vertex = [n](int v) {
    if (v < 0 || v >= n) throw InputError("move site vertex out of range");
  };
  PlumbGraph out = g;
  if (dir == MoveDir::blowup) {
    if (kind != MoveKind::c && s.sign != 1 && s.sign != -1) throw InputError("blowup sign must be +1 or -1");
    switch (kind) {
      case MoveKind::a: {
        check_vertex(s.u);
        check_vertex(s.v);
        if (!has_edge(g, s.u, s.v)) throw InputError("move a needs an edge at the site");
        auto& e = out.edges;
        e.erase(std::find_if(e.begin(), e.end(), [&](auto p) {
          return (p.first == s.u && p.second == s.v) || (p.first == s.v && p.second == s.u);
        }));
        out.weights[s.u] += s.sign;
        out.weights[s.v] += s.sign;
        out.weights.push_back(s.sign);
        e.emplace_back(s.u, n);
        e.emplace_back(n, s.v);
        break;
      }
      case MoveKind::b:
        check_vertex(s.u);
        out.weights[s.u] += s.sign;
        out.weights.push_back(s.sign);
        out.edges.emplace_back(s.u, n);
        break;
      case MoveKind::c: {
        // w -> (sign) -- 0 -- (w - sign), all old neighbours stay on u
        check_vertex(s.u);
        long w = g.weights[s.u];
        out.weights[s.u] = s.sign;
        out.weights.push_back(0);
        out.weights.push_back(w - s.sign);
        out.edges.emplace_back(s.u, n);
        out.edges.emplace_back(n, n + 1);
        break;
      }
    }
    validate_tree(out);
    return out;
  }
  check_vertex(s.u);
  int x = s.u;
  long wx = g.weights[x];
  auto nb = neighbors(g, x);
  switch (kind) {
    case MoveKind::a: {
      if ((wx != 1 && wx != -1) || nb.size() != 2) throw InputError("move a blowdown needs a +-1 vertex of degree 2");
      out.weights[nb[0]] -= wx;
      out.weights[nb[1]] -= wx;
      out.edges.emplace_back(nb[0], nb[1]);
      out = remove_vertex(out, x);
      break;
    }
    case MoveKind::b: {
      if ((wx != 1 && wx != -1) || nb.size() != 1) throw InputError("move b blowdown needs a +-1 leaf");
      out.weights[nb[0]] -= wx;
      out = remove_vertex(out, x);
      break;
    }
    case MoveKind::c: {
      if (wx != 0 || nb.size() != 2) throw InputError("move c blowdown needs a 0-weight vertex of degree 2");
      int keep = std::min(nb[0], nb[1]), gone = std::max(nb[0], nb[1]);
      out.weights[keep] += g.weights[gone];
      for (auto& [a, b] : out.edges) {
        if (a == gone) a = keep;
        if (b == gone) b = keep;
      }
      out.edges.erase(std::remove_if(out.edges.begin(), out.edges.end(),
                                     [&](auto p) { return p.first == p.second || p.first == x || p.second == x; }),
                      out.edges.end());
      out = remove_vertex(out, std::max(x, gone));
      out = remove_vertex(out, std::min(x, gone));
      break;
    }
  }
  validate_tree(out);
  return out;
}

bool is_seifert_reducible(const HGraph& h) {
  for (int i = 2; i < 6; ++i)
    if (h.w[i] == 1 || h.w[i] == -1) return true;
  return false;
}

}  // namespace qtop
