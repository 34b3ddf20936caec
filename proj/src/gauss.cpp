#include "qtop/gauss.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

namespace qtop {

namespace {

// sum of rational multiples of e(r), r rational; reduced once at the lcm of the denominators
class PhaseSum {
 public:
  void add(const Rat& phase, const Rat& coef) {
    if (coef == 0) return;
    terms_[frac_of(phase)] += coef;
  }
  CycNum value() const {
    long L = 1;
    for (const auto& [r, c] : terms_)
      if (c != 0) L = lcm_long(L, r.get_den().get_si());
    std::vector<Rat> v(L, 0);
    for (const auto& [r, c] : terms_) {
      Rat j = r * L;
      v[j.get_num().get_si()] += c;
    }
    return CycNum::from_coeffs(L, std::move(v));
  }

 private:
  std::map<Rat, Rat> terms_;
};

long to_long(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
  return x.get_si();
}

long mod_pos(long a, long m) { return ((a % m) + m) % m; }

// index of r * D in Z/D; r * D must be integral
long root_index(const Rat& r, long D) {
  Rat x = r * D;
  if (x.get_den() != 1) throw ConsistencyError("phase not on the expected level");
  Int q = x.get_num() % D;
  return mod_pos(q.get_si(), D);
}

long gs_level(const QuadFormData& sd, long k) {
  return 4 * k * to_long(abs(sd.M * sd.N));
}

int threads_from_env() {
  const char* s = std::getenv("QTOP_THREADS");
  if (!s) return 1;
  int n = std::atoi(s);
  return std::clamp(n, 1, 64);
}

struct BruteStructure {
  std::vector<int> outer, inner;  // vertex orders
  std::vector<std::vector<int>> earlier;  // neighbours placed before each vertex in outer+inner order
};

}  // namespace

long permanent2(std::array<long, 2> l1, std::array<long, 2> l2) { return l1[0] * l2[1] + l2[0] * l1[1]; }

CycNum inv_zeta_diff(long k) {
  if (k < 2) throw InputError("level must be >= 2");
  // 1/(z - z^-1) = z/(z^2 - 1) and sum_j j x^j = k/(x - 1) for x = zeta_k
  std::vector<Rat> c(2 * k, 0);
  for (long j = 1; j < k; ++j) c[2 * j + 1] += make_rat(j, k);
  return CycNum::from_coeffs(2 * k, std::move(c));
}

std::vector<std::vector<long>> coset_reps(const std::vector<std::vector<long>>& A) {
  size_t n = A.size();
  std::vector<std::vector<long>> reps;
  if (n == 1) {
    long a = std::labs(A[0][0]);
    if (a == 0) throw InputError("singular lattice");
    for (long x = 0; x < a; ++x) reps.push_back({x});
    return reps;
  }
  if (n != 2) throw InputError("coset enumeration supports rank <= 2");
  long a = A[0][0], b = A[0][1], c = A[1][0], d = A[1][1];
  long det = a * d - b * c;
  if (det == 0) throw InputError("singular lattice");
  // column operations to lower triangular [[g, 0], [x, det/g]]
  (void)c;
  (void)d;
  long g = std::gcd(a, b);
  long h11 = std::labs(g), h22 = std::labs(det / g);
  for (long x = 0; x < h11; ++x)
    for (long y = 0; y < h22; ++y) reps.push_back({x, y});
  return reps;
}

void check_lattice(const LatticeData& d) {
  int n = d.n;
  if (n < 1 || n > 2) throw InputError("lattice rank must be 1 or 2");
  if (static_cast<int>(d.gram.size()) != n || static_cast<int>(d.h.size()) != n ||
      static_cast<int>(d.u.size()) != n)
    throw InputError("lattice data has inconsistent dimensions");
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(d.gram[i].size()) != n || static_cast<int>(d.h[i].size()) != n)
      throw InputError("lattice data has inconsistent dimensions");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (d.gram[i][j] != d.gram[j][i]) throw InputError("gram matrix is not symmetric");
  Int detG = determinant(d.gram);
  if (detG == 0) throw InputError("degenerate bilinear form");
  if (d.k <= 0 || Int(d.k) % abs(detG) != 0) throw InputError("k must be a positive multiple of |L'/L|");
  for (const auto& x : d.u)
    if (Rat(x * d.k).get_den() != 1) throw InputError("u must lie in L/k");
  RatMatrix G(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = d.gram[i][j];
  RatMatrix Gh(n, std::vector<Rat>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) Gh[i][j] += G[i][l] * d.h[l][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (Gh[i][j] != Gh[j][i]) throw InputError("h is not self-adjoint");
  Rat deth = n == 1 ? d.h[0][0] : d.h[0][0] * d.h[1][1] - d.h[0][1] * d.h[1][0];
  if (deth == 0) throw InputError("h is singular");
  RatMatrix Gi = inverse(d.gram);
  // dual generators y_i = G^-1 e_i; need h(y_i) in L' i.e. G h y_i integral, and (k/2)<y,h y> integral
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) {
      Rat v = 0;
      for (int l = 0; l < n; ++l) v += Gh[r][l] * Gi[l][i];
      if (v.get_den() != 1) throw InputError("h does not preserve the dual lattice");
    }
    for (int j = 0; j < n; ++j) {
      Rat v = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) v += Gi[a][i] * Gh[a][b] * Gi[b][j];
      Rat need = i == j ? Rat(v * d.k / 2) : Rat(v * d.k);
      if (need.get_den() != 1) throw InputError("(k/2)<y, h(y)> is not integral on L'");
    }
  }
}

namespace {

CycNum sqrt_rat(const Rat& r) {
  // sqrt(p/q) = s sqrt(f) / q with p q = s^2 f, f squarefree
  Int pq = r.get_num() * r.get_den();
  Int s = 1, f = 1, rest = pq;
  for (long p = 2; Int(p) * p <= rest; ++p) {
    while (rest % (Int(p) * p) == 0) {
      rest /= Int(p) * p;
      s *= p;
    }
    if (rest % p == 0) {
      rest /= p;
      f *= p;
    }
  }
  f *= rest;
  CycNum root = f == 1 ? CycNum(Rat(1)) : cyc_sqrt(to_long(f));
  Rat c(s, r.get_den());
  c.canonicalize();
  return root * CycNum(c);
}

}  // namespace

CycNum ReciprocitySides::rhs() const { return rhsPhase * sqrt_rat(rhsRadicand) * rhsSum; }

CycNum ReciprocitySides::rhs_printed() const { return rhsPhase * sqrt_rat(rhsRadicand) * rhsSumPrinted; }

bool ReciprocitySides::equal() const { return lhs == rhs(); }

bool ReciprocitySides::printed_equal() const { return lhs == rhs_printed(); }

ReciprocitySides reciprocity_sides(const LatticeData& d) {
  check_lattice(d);
  int n = d.n;
  long k = d.k;
  auto form = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
    Rat s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += x[i] * Rat(d.gram[i][j]) * y[j];
    return s;
  };
  auto apply = [&](const RatMatrix& m, const std::vector<Rat>& x) {
    std::vector<Rat> y(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += m[i][j] * x[j];
    return y;
  };
  ReciprocitySides out;
  PhaseSum lhs;
  std::vector<long> x(n, 0);
  for (;;) {
    std::vector<Rat> xr(x.begin(), x.end());
    lhs.add(form(xr, apply(d.h, xr)) / (2 * k) + form(xr, d.u), 1);
    int i = 0;
    while (i < n && ++x[i] == k) x[i++] = 0;
    if (i == n) break;
  }
  out.lhs = lhs.value();

  // signature of <x, h(y)>
  IntMatrix Ghi(n, std::vector<Int>(n));
  RatMatrix Gh(n, std::vector<Rat>(n, 0));
  Int den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) Gh[i][j] += Rat(d.gram[i][l]) * d.h[l][j];
      den = lcm(den, Gh[i][j].get_den());
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat v = Gh[i][j] * den;
      Ghi[i][j] = v.get_num();
    }
  int sigma = matrix_invariants(Ghi).sigma();
  Int detG = abs(determinant(d.gram));
  Rat deth = n == 1 ? d.h[0][0] : d.h[0][0] * d.h[1][1] - d.h[0][1] * d.h[1][0];
  Rat kn = 1;
  for (int i = 0; i < n; ++i) kn *= k;
  out.rhsPhase = cyc_e(make_rat(sigma, 8));
  out.rhsRadicand = kn / (Rat(detG) * abs(deth));

  // in coordinates z with y = G^-1 z: h(L') = G h G^-1 Z^n and h(L) = G h Z^n
  RatMatrix Gi = inverse(d.gram);
  RatMatrix hinv(n, std::vector<Rat>(n));
  if (n == 1) {
    hinv[0][0] = 1 / d.h[0][0];
  } else {
    hinv[0][0] = d.h[1][1] / deth;
    hinv[1][1] = d.h[0][0] / deth;
    hinv[0][1] = -d.h[0][1] / deth;
    hinv[1][0] = -d.h[1][0] / deth;
  }
  auto sum_over = [&](bool dual) {
    std::vector<std::vector<long>> sub(n, std::vector<long>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rat v = 0;
        if (dual)
          for (int l = 0; l < n; ++l) v += Gh[i][l] * Gi[l][j];
        else
          v = Gh[i][j];
        if (v.get_den() != 1) throw InputError("h does not preserve the dual lattice");
        sub[i][j] = to_long(v.get_num());
      }
    PhaseSum acc;
    for (const auto& z : coset_reps(sub)) {
      std::vector<Rat> zr(z.begin(), z.end());
      std::vector<Rat> y = apply(Gi, zr);
      for (int i = 0; i < n; ++i) y[i] += d.u[i];
      acc.add(-Rat(k) / 2 * form(y, apply(hinv, y)), 1);
    }
    return acc.value();
  };
  out.rhsSum = sum_over(false);
  out.rhsSumPrinted = sum_over(true);
  return out;
}

namespace {

// sum eps e(Q(gamma + m l1 + n l2)/k) * weight(m, n)
template <class Weight>
CycNum gauss_sum_impl(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                      std::array<long, 2> l2, Weight weight) {
  long D = gs_level(sd, k);
  std::vector<long long> counts(D, 0);
  for (const auto& el : cs.S()) {
    for (long m = 0; m < k; ++m)
      for (long n = 0; n < k; ++n) {
        long long w = weight(m, n);
        if (w == 0) continue;
        Rat x = el.alpha + m * l1[0] + n * l2[0];
        Rat y = el.beta + m * l1[1] + n * l2[1];
        counts[root_index(sd.Q(x, y) / k, D)] += el.eps * w;
      }
  }
  return CycNum::from_small_power_sums(D, counts);
}

}  // namespace

CycNum weighted_gauss_sum(const QuadFormData& sd, const WeightedCharSet& cs, long k) {
  return weighted_gauss_sum_basis(sd, cs, k, {1, 0}, {0, 1});
}

CycNum weighted_gauss_sum_basis(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                                std::array<long, 2> l2) {
  if (k < 1) throw InputError("k must be positive");
  return gauss_sum_impl(sd, cs, k, l1, l2, [](long m, long n) { return static_cast<long long>(m) * n; });
}

CycNum weighted_gauss_sum_lattice(const QuadFormData& sd, const WeightedCharSet& cs, long k,
                                  std::array<long, 2> l1, std::array<long, 2> l2) {
  if (k < 1) throw InputError("k must be positive");
  return gauss_sum_impl(sd, cs, k, l1, l2, [&](long m, long n) {
    return static_cast<long long>(m * l1[0] + n * l2[0]) * (m * l1[1] + n * l2[1]);
  });
}

WRTValue wrt_bruteforce(const PlumbGraph& g, long k) {
  if (k < 2) throw InputError("level must be >= 2");
  validate_tree(g);
  IntMatrix W = linking_matrix(g);
  MatrixInvariants inv = matrix_invariants(W);
  int V = static_cast<int>(g.size());
  auto deg = g.degrees();
  const long L = 4 * k;

  BruteStructure st;
  for (int v = 0; v < V; ++v) (deg[v] >= 3 ? st.outer : st.inner).push_back(v);
  std::vector<int> order = st.outer;
  order.insert(order.end(), st.inner.begin(), st.inner.end());
  std::vector<int> pos(V);
  for (int i = 0; i < V; ++i) pos[order[i]] = i;
  st.earlier.assign(V, {});
  for (auto [a, b] : g.edges) {
    if (pos[a] < pos[b]) st.earlier[b].push_back(a);
    else st.earlier[a].push_back(b);
  }

  std::vector<long> vals;
  for (long l = 1; l < 2 * k; ++l)
    if (l != k) vals.push_back(l);

  // (x - 1/x)^e with x = zeta_4k^{2l}, e = 2 - deg >= 0, as (coefficient, exponent) pairs
  auto expansion = [&](long l, int e) {
    std::vector<std::pair<long long, long>> out;
    long long binom = 1;
    for (int j = 0; j <= e; ++j) {
      out.emplace_back((j % 2 ? -binom : binom), mod_pos(2 * l * (e - 2 * j), L));
      binom = binom * (e - j) / (j + 1);
    }
    return out;
  };
  std::map<std::pair<long, int>, CycNum> outer_cache;
  auto outer_factor = [&](long l, int p) {
    auto key = std::make_pair(l, p);
    auto it = outer_cache.find(key);
    if (it != outer_cache.end()) return it->second;
    CycNum base = CycNum::root(L, 2 * l) - CycNum::root(L, -2 * l);
    CycNum pw(Rat(1));
    for (int i = 0; i < p; ++i) pw *= base;
    CycNum r = pw.inverse();
    outer_cache.emplace(key, r);
    return r;
  };

  size_t no = st.outer.size(), ni = st.inner.size();
  size_t nouter = 1;
  for (size_t i = 0; i < no; ++i) nouter *= vals.size();

  std::vector<std::vector<std::vector<std::pair<long long, long>>>> inner_exp(ni);
  for (size_t i = 0; i < ni; ++i)
    for (long l : vals) inner_exp[i].push_back(expansion(l, 2 - deg[st.inner[i]]));

  // prefill the cache so worker threads only read it
  for (int v : st.outer)
    for (long l : vals) outer_factor(l, deg[v] - 2);

  auto run_range = [&](size_t begin, size_t end) {
    CycNum acc;
    std::vector<long> lv(V, 0);
    for (size_t idx = begin; idx < end; ++idx) {
      size_t rem = idx;
      long e0 = 0;
      CycNum fac(Rat(1));
      for (size_t i = 0; i < no; ++i) {
        int v = st.outer[i];
        long l = vals[rem % vals.size()];
        rem /= vals.size();
        lv[v] = l;
        e0 += g.weights[v] * l * l;
        for (int u : st.earlier[v]) e0 += 2 * lv[u] * l;
        fac *= outer_cache.at({l, deg[v] - 2});
      }
      RootSum rs(L);
      // depth-first over inner vertices
      std::function<void(size_t, long, long long)> rec = [&](size_t d, long e, long long c) {
        if (d == ni) {
          rs.add(e, c);
          return;
        }
        int v = st.inner[d];
        for (size_t li = 0; li < vals.size(); ++li) {
          long l = vals[li];
          lv[v] = l;
          long ev = e + g.weights[v] * l * l;
          for (int u : st.earlier[v]) ev += 2 * lv[u] * l;
          ev = mod_pos(ev, L);
          for (auto [cc, ex] : inner_exp[d][li]) rec(d + 1, mod_pos(ev + ex, L), c * cc);
        }
      };
      rec(0, mod_pos(e0, L), 1);
      acc += fac * rs.value();
    }
    return acc;
  };

  int nt = std::min<int>(threads_from_env(), static_cast<int>(nouter));
  CycNum sum;
  if (nt <= 1) {
    sum = run_range(0, nouter);
  } else {
    std::vector<CycNum> parts(nt);
    std::vector<std::thread> th;
    for (int t = 0; t < nt; ++t) {
      size_t b = nouter * t / nt, e = nouter * (t + 1) / nt;
      th.emplace_back([&, t, b, e] { parts[t] = run_range(b, e); });
    }
    for (auto& x : th) x.join();
    for (auto& p : parts) sum += p;
  }

  int sigma = inv.sigma();
  long wsum = 0;
  for (long w : g.weights) wsum += w;
  CycNum pre = cyc_e(make_rat(sigma, 8)) * cyc_e(make_rat(3 * sigma - wsum, L)) * CycNum::root(4, V);
  Int denom = 2;
  for (int i = 0; i < V / 2; ++i) denom *= 2 * k;
  CycNum val = pre * sum * inv_zeta_diff(k) * CycNum(Rat(1, denom));
  if (V % 2) val *= cyc_sqrt(2 * k) * CycNum(make_rat(1, 2 * k));
  return {val, k};
}

CycNum prop41_printed(const HGraph& g, long k) {
  if (k < 2) throw InputError("level must be >= 2");
  QuadFormData sd = s_data(g);
  WeightedCharSet cs = char_sets(g);
  CycNum gs = weighted_gauss_sum(sd, cs, k);
  CycNum phase = cyc_e(sd.prefactorExponent / k) * cyc_e(make_rat(sd.sigmaWprime, 8));
  return phase * gs * inv_zeta_diff(k) * CycNum(Rat(1, 2 * k * k));
}

WRTValue wrt_fast(const HGraph& g, long k) { return {-prop41_printed(g, k), k}; }

bool prop23_hypotheses(const QuadFormData& sd, const WeightedCharSet& cs) {
  auto check = [](const std::map<Rat, long>& set, const Int& M) {
    std::optional<Rat> m1, m2;
    for (const auto& [a, c] : set) {
      (void)c;
      Rat twoMa = a * 2 * M;
      if (twoMa.get_den() != 1) return false;
      if (Rat(a * 2).get_den() == 1) return false;
      if (gcd(twoMa.get_num(), M) != 1 && gcd(twoMa.get_num(), M) != -1) return false;
      Rat x = frac_of(a * M), y = frac_of(a * a * M);
      if (m1 && (*m1 != x || *m2 != y)) return false;
      m1 = x;
      m2 = y;
    }
    return true;
  };
  return check(cs.T, sd.M) && check(cs.U, sd.N);
}

VanishingSums vanishing_sums(const QuadFormData& sd, const WeightedCharSet& cs, long k, const AlphaFun& C,
                             const AlphaFun& B) {
  if (k < 1) throw InputError("k must be positive");
  long D = gs_level(sd, k);
  auto acc = [D](std::vector<Rat>& v, const Rat& phase, const Rat& c) {
    if (c != 0) v[root_index(phase, D)] += c;
  };
  std::vector<Rat> p1a(D, 0), p1b(D, 0), p2a(D, 0), p2b(D, 0);
  auto elems = cs.S();
  for (const auto& el : elems)
    for (long m = 0; m < k; ++m)
      for (long n = 0; n < k; ++n) {
        Rat a = el.alpha + m, b = el.beta + n;
        acc(p1a, sd.Q(a, b) / k, Rat(el.eps) * C(b));
        acc(p1b, sd.Q(a, b) / k, Rat(el.eps) * el.alpha * C(b));
      }
  // l runs over (kZ + Z)/2kS(Z^2) and kZ^2/2kS(Z^2); work in coordinates of the bigger lattice
  IntMatrix Sm{{sd.S[0][0], sd.S[0][1]}, {sd.S[1][0], sd.S[1][1]}};
  RatMatrix Si = inverse(Sm);
  auto second = [&](std::vector<Rat>& out, long sx, long sy) {
    // lattice basis diag(sx, sy); 2kS in those coordinates
    std::vector<std::vector<long>> sub(2, std::vector<long>(2));
    long sc[2] = {sx, sy};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Int v = 2 * k * sd.S[i][j];
        if (v % sc[i] != 0) throw ConsistencyError("2kS(Z^2) is not inside the summation lattice");
        sub[i][j] = to_long(v / sc[i]);
      }
    // per point: index step a D / k, b D / k and weight eps B(a) C(b)
    struct Pt {
      long ia, ib;
      Rat w;
    };
    std::vector<Pt> pts;
    for (const auto& el : elems)
      for (long m = 0; m < k; ++m)
        for (long n = 0; n < k; ++n) {
          Rat a = el.alpha + m, b = el.beta + n;
          Rat w = Rat(el.eps) * B(a) * C(b);
          if (w == 0) continue;
          pts.push_back({root_index(a / k, D), root_index(b / k, D), w});
        }
    for (const auto& r : coset_reps(sub)) {
      Rat l0 = Rat(r[0] * sx), l1 = Rat(r[1] * sy);
      long base = root_index((l0 * Si[0][0] * l0 + 2 * l0 * Si[0][1] * l1 + l1 * Si[1][1] * l1) / (4 * k), D);
      long x0 = r[0] * sx % D, x1 = r[1] * sy % D;
      for (const auto& p : pts) out[mod_pos(base + (p.ia * x0 % D) + (p.ib * x1 % D), D)] += p.w;
    }
  };
  second(p2a, k, 1);
  second(p2b, k, k);
  VanishingSums vs;
  vs.p1a = CycNum::from_coeffs(D, std::move(p1a));
  vs.p1b = CycNum::from_coeffs(D, std::move(p1b));
  vs.p2a = CycNum::from_coeffs(D, std::move(p2a));
  vs.p2b = CycNum::from_coeffs(D, std::move(p2b));
  return vs;
}

HGraph random_hgraph(std::mt19937_64& rng, bool avoid_units, long range) {
  std::uniform_int_distribution<long> any(-range, range);
  for (;;) {
    HGraph h;
    h.w[1] = any(rng);
    bool bad = false;
    for (int i = 2; i < 6; ++i) {
      long x = any(rng);
      if (x == 0 || (avoid_units && (x == 1 || x == -1))) bad = true;
      h.w[i] = x;
    }
    if (bad) continue;
    // det W is affine in w1
    h.w[0] = 0;
    Int B = determinant(linking_matrix(h.graph()));
    h.w[0] = 1;
    Int A = determinant(linking_matrix(h.graph())) - B;
    if (A == 0) continue;
    int target = std::uniform_int_distribution<int>(0, 1)(rng) ? 1 : -1;
    Int num = target - B;
    if (num % A != 0) continue;
    Int w1 = num / A;
    if (!w1.fits_slong_p() || abs(w1) > 1000) continue;
    h.w[0] = w1.get_si();
    return h;
  }
}

namespace {

std::string graph_label(const HGraph& h) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << h.w[i];
  os << ")";
  return os.str();
}

std::pair<std::array<long, 2>, std::array<long, 2>> random_basis(std::mt19937_64& rng) {
  std::array<long, 2> a{1, 0}, b{0, 1};
  int steps = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int s = 0; s < steps; ++s) {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: std::swap(a, b); break;
      case 1: b = {b[0] + a[0], b[1] + a[1]}; break;
      case 2: b = {b[0] - a[0], b[1] - a[1]}; break;
      default: a = {-a[0], -a[1]}; break;
    }
  }
  return {a, b};
}

}  // namespace

BaseChangeSides base_change_sides(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                                  std::array<long, 2> l2) {
  long det = l1[0] * l2[1] - l2[0] * l1[1];
  if (det != 1 && det != -1) throw InputError("basis vectors are not unimodular");
  BaseChangeSides s;
  s.perm = permanent2(l1, l2);
  CycNum p{Rat(s.perm)};
  s.lattice = weighted_gauss_sum_lattice(sd, cs, k, l1, l2);
  s.inBasis = p * weighted_gauss_sum_basis(sd, cs, k, l1, l2);
  s.standard = p * weighted_gauss_sum(sd, cs, k);
  return s;
}

bool base_change_holds(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                       std::array<long, 2> l2) {
  auto s = base_change_sides(sd, cs, k, l1, l2);
  return s.first_holds() && s.second_holds();
}

SuiteReport vanishing_suite(uint64_t seed, int count) {
  SuiteReport rep;
  rep.name = "prop2.3-vanishing";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    ++rep.instances;
    HGraph h = random_hgraph(rng, true, 5);
    long k = 2 + i % 2;
    QuadFormData sd = s_data(h);
    WeightedCharSet cs = char_sets(h);
    if (!prop23_hypotheses(sd, cs)) {
      ++rep.skipped;
      continue;
    }
    std::uniform_int_distribution<long> val(-5, 5);
    std::map<Rat, Rat> Cmap, Bmap;
    auto C = [&](const Rat& x) {
      auto it = Cmap.find(x);
      if (it != Cmap.end()) return it->second;
      return Cmap[x] = Rat(val(rng));
    };
    // B on T + [k] with sum chi B = 0
    Rat tot = 0;
    std::optional<Rat> pivot;
    for (const auto& [a, c] : cs.T)
      for (long m = 0; m < k; ++m) {
        Rat x = a + m;
        Bmap[x] = Rat(val(rng));
        tot += Rat(c) * Bmap[x];
        if (!pivot) pivot = x;
      }
    long cpiv = cs.T.begin()->second;
    Bmap[*pivot] -= tot / cpiv;
    auto B = [&](const Rat& x) {
      auto it = Bmap.find(x);
      return it == Bmap.end() ? Rat(0) : it->second;
    };
    // fix C on the needed points first so the evaluation order does not matter
    for (const auto& [b, c] : cs.U)
      for (long n = 0; n < k; ++n) C(b + n);
    VanishingSums vs = vanishing_sums(sd, cs, k, C, B);
    std::vector<std::string> bad;
    if (!vs.p1a.is_zero()) bad.push_back("2.3(1) first sum");
    if (!vs.p1b.is_zero()) bad.push_back("2.3(1) second sum");
    if (!vs.p2a.is_zero()) bad.push_back("2.3(2) over (kZ+Z)/2kS");
    if (!vs.p2b.is_zero()) bad.push_back("2.3(2) over kZ^2/2kS");
    if (bad.empty()) {
      ++rep.passed;
    } else {
      std::string msg = graph_label(h) + " k=" + std::to_string(k) + ":";
      for (auto& b : bad) msg += " " + b;
      rep.failures.push_back(msg);
    }
  }
  return rep;
}

SuiteReport base_change_suite(uint64_t seed, int count) {
  SuiteReport rep;
  rep.name = "prop2.6-base-change";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    ++rep.instances;
    HGraph h = random_hgraph(rng, true, 5);
    long k = 2 + i % 2;
    QuadFormData sd = s_data(h);
    WeightedCharSet cs = char_sets(h);
    auto [l1, l2] = random_basis(rng);
    if (!prop23_hypotheses(sd, cs)) {
      ++rep.skipped;
      continue;
    }
    auto s = base_change_sides(sd, cs, k, l1, l2);
    if (s.first_holds() && s.second_holds()) {
      ++rep.passed;
      continue;
    }
    std::ostringstream os;
    os << graph_label(h) << " k=" << k << " basis (" << l1[0] << "," << l1[1] << "),(" << l2[0] << "," << l2[1]
       << ") perm " << s.perm << ":";
    if (!s.first_holds()) os << " first equality fails";
    if (!s.second_holds()) os << " second equality fails";
    rep.failures.push_back(os.str());
  }
  return rep;
}

SuiteReport reciprocity_suite(uint64_t seed, int count) {
  SuiteReport rep;
  rep.name = "prop2.1-reciprocity";
  std::mt19937_64 rng(seed);
  int printed = 0;
  std::uniform_int_distribution<long> small(-3, 3);
  for (int i = 0; i < count; ++i) {
    ++rep.instances;
    LatticeData d;
    d.n = 1 + i % 2;
    int n = d.n;
    // gram G nonsingular symmetric, h = C G with C symmetric nonsingular
    IntMatrix G, C;
    for (;;) {
      G.assign(n, std::vector<Int>(n));
      C.assign(n, std::vector<Int>(n));
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          G[a][b] = G[b][a] = small(rng);
          C[a][b] = C[b][a] = small(rng);
        }
      Int dg = determinant(G), dc = determinant(C);
      if (dg != 0 && dc != 0 && abs(dg) <= 6 && abs(dc) <= 6) break;
    }
    d.gram = G;
    d.h.assign(n, std::vector<Rat>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) d.h[a][b] += Rat(C[a][c] * G[c][b]);
    long dg = to_long(abs(determinant(G)));
    // (k/2) z^t C z integral: k even, or C with even diagonal
    bool even_diag = true;
    for (int a = 0; a < n; ++a)
      if (C[a][a] % 2 != 0) even_diag = false;
    long k = dg * std::uniform_int_distribution<long>(1, 3)(rng);
    if (!even_diag && k % 2) k *= 2;
    d.k = k;
    d.u.resize(n);
    for (int a = 0; a < n; ++a) d.u[a] = make_rat(std::uniform_int_distribution<long>(0, k - 1)(rng), k);
    try {
      auto sides = reciprocity_sides(d);
      if (sides.printed_equal()) ++printed;
      if (sides.equal()) {
        ++rep.passed;
      } else {
        rep.failures.push_back("instance " + std::to_string(i) + " rank " + std::to_string(n) + " k=" +
                               std::to_string(k) + ": lhs != rhs");
      }
    } catch (const InputError& e) {
      rep.failures.push_back("instance " + std::to_string(i) + ": " + e.what());
    }
  }
  rep.notes.push_back("sum over L'/h(L') as printed holds on " + std::to_string(printed) + "/" +
                      std::to_string(rep.instances));
  return rep;
}

}  // namespace qtop
