#include "qtop/theta.hpp"

#include <mpfr.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

namespace qtop {

namespace {

using i128 = __int128;

long long to_ll(const Rat& r) {
  if (r.get_den() != 1) throw ConsistencyError("expected an integer");
  if (!r.get_num().fits_slong_p()) throw std::overflow_error("integer does not fit in a machine word");
  return r.get_num().get_si();
}

long den_long(const Rat& r) {
  if (!r.get_den().fits_slong_p()) throw std::overflow_error("denominator too large");
  return r.get_den().get_si();
}

double to_d(const Rat& r) { return r.get_d(); }

Real to_real(const Rat& r) { return Real(r.get_num().get_str()) / Real(r.get_den().get_str()); }

Rat ratq(const Mat2& S, const RatVec2& u, const RatVec2& v) {
  return u[0] * (S[0][0] * v[0] + S[0][1] * v[1]) + u[1] * (S[1][0] * v[0] + S[1][1] * v[1]);
}

RatVec2 to_ratvec(const Vec2& v) { return {Rat(v[0]), Rat(v[1])}; }

// one translate of a cone: exponent(m, n) = shift + scale * Qraw(x0 + m, y0 + n),
// Qraw(x, y) = p x^2 + 2 r x y + s y^2, phase(m, n) = P0 + PA m + PB n
struct ConeSpec {
  long p = 0, r = 0, s = 0;
  Rat x0, y0;
  Rat scale = 1, shift = 0;
  Rat P0 = 0, PA = 0, PB = 0;
  long long mult = 1;
  ConeWeight kind = ConeWeight::false_theta;

  std::array<Rat, 6> exp_coeffs() const {
    Rat q0 = p * x0 * x0 + 2 * r * x0 * y0 + s * y0 * y0;
    return {shift + scale * q0,      scale * (2 * p * x0 + 2 * r * y0), scale * (2 * r * x0 + 2 * s * y0),
            scale * p,               scale * 2 * r,                      scale * s};
  }
};

int weight_of(ConeWeight kind, int sx, int sy) {
  return kind == ConeWeight::false_theta ? sx * (sx + sy) : sx + sy;
}

void check_convergent(long p, long r, long s) {
  auto bad = [](const std::string& ray) {
    throw DivergenceError("series diverges: the quadratic form is not positive along " + ray);
  };
  if (p <= 0) bad("the tl axis");
  if (s <= 0) bad("the tl' axis");
  if (r < 0 && r * r >= p * s) bad("the interior of the cone spanned by tl and tl'");
}

// visits every (m, n) with nonzero weight and exponent <= Emax
template <class F>
void enumerate_cone(const ConeSpec& c, long Dexp, long Lc, const Rat& Emax, F&& visit) {
  check_convergent(c.p, c.r, c.s);
  if (c.scale <= 0) throw ConsistencyError("scale must be positive");
  Rat B = (Emax - c.shift) / c.scale;
  if (B < 0) return;
  auto ec = c.exp_coeffs();
  std::array<long long, 6> e{};
  for (int i = 0; i < 6; ++i) e[i] = to_ll(ec[i] * Dexp);
  long long EmaxN = floor_of(Emax * Dexp).get_si();
  long long P0 = to_ll(c.P0 * Lc), PA = to_ll(c.PA * Lc), PB = to_ll(c.PB * Lc);
  long xd = den_long(c.x0), yd = den_long(c.y0);
  long long xn = to_ll(c.x0 * xd), yn = to_ll(c.y0 * yd);

  double Bd = to_d(B), p = c.p, r = c.r, s = c.s;
  double kx = c.r >= 0 ? p : p - r * r / s;
  double xmax = std::sqrt(Bd / kx) + 1;
  double x0 = to_d(c.x0), y0 = to_d(c.y0);
  long mlo = static_cast<long>(std::floor(-xmax - x0)) - 1, mhi = static_cast<long>(std::ceil(xmax - x0)) + 1;
  for (long m = mlo; m <= mhi; ++m) {
    long long X = xn + static_cast<long long>(m) * xd;
    int sx = (X > 0) - (X < 0);
    if (sx == 0 && c.kind == ConeWeight::false_theta) continue;
    double x = x0 + m;
    double disc = r * r * x * x - s * (p * x * x - Bd);
    if (disc < -1e-6 * (1 + std::fabs(Bd)) * s) continue;
    double sq = std::sqrt(std::max(disc, 0.0));
    double ylo = (-r * x - sq) / s, yhi = (-r * x + sq) / s;
    if (sx > 0) ylo = std::max(ylo, 0.0);
    if (sx < 0) yhi = std::min(yhi, 0.0);
    if (ylo > yhi + 1) continue;
    long nlo = static_cast<long>(std::floor(ylo - y0)) - 1, nhi = static_cast<long>(std::ceil(yhi - y0)) + 1;
    i128 base = e[0] + static_cast<i128>(e[1]) * m + static_cast<i128>(e[3]) * m * m;
    i128 lin = e[2] + static_cast<i128>(e[4]) * m;
    for (long n = nlo; n <= nhi; ++n) {
      long long Y = yn + static_cast<long long>(n) * yd;
      int sy = (Y > 0) - (Y < 0);
      int w = weight_of(c.kind, sx, sy);
      if (w == 0) continue;
      i128 en = base + lin * n + static_cast<i128>(e[5]) * n * n;
      if (en > EmaxN) continue;
      long long ph = P0 + PA * m + PB * n;
      long j = Lc == 1 ? 0 : static_cast<long>(((ph % Lc) + Lc) % Lc);
      visit(m, n, w, static_cast<long long>(en), j);
    }
  }
}

QSeries build_series(const std::vector<ConeSpec>& cones, const Rat& Emax) {
  QSeries qs;
  qs.Emax = Emax;
  for (const auto& c : cones) {
    for (const auto& x : c.exp_coeffs()) qs.Dexp = lcm_long(qs.Dexp, den_long(x));
    for (const auto* x : {&c.P0, &c.PA, &c.PB}) qs.Lc = lcm_long(qs.Lc, den_long(*x));
  }
  for (const auto& c : cones)
    enumerate_cone(c, qs.Dexp, qs.Lc, Emax, [&](long, long, int w, long long en, long j) {
      qs.entries.push_back({en, j, c.mult * w});
    });
  auto& v = qs.entries;
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.n != b.n ? a.n < b.n : a.j < b.j; });
  size_t o = 0;
  for (size_t i = 0; i < v.size();) {
    QSeries::Entry acc = v[i];
    size_t k = i + 1;
    while (k < v.size() && v[k].n == acc.n && v[k].j == acc.j) acc.count += v[k++].count;
    if (acc.count != 0) v[o++] = acc;
    i = k;
  }
  v.resize(o);
  return qs;
}

ConeSpec cone_from_basis(const Mat2& S, const ConeBasis& b, const RatVec2& offset, ConeWeight kind) {
  ConeSpec c;
  c.p = quad(S, b.tlambda);
  c.r = bilinear(S, b.tlambda, b.tlambdaP);
  c.s = quad(S, b.tlambdaP);
  auto f = floor_in_basis(offset, b);
  c.x0 = f.coords[0];
  c.y0 = f.coords[1];
  c.kind = kind;
  return c;
}

nlohmann::json cyc_json(const CycNum& z) {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& x : z.coeffs()) c.push_back(to_string(x));
  return {{"level", z.level()}, {"coeffs", c}};
}

struct MpfrVar {
  mpfr_t v;
  explicit MpfrVar(unsigned bits) { mpfr_init2(v, bits), mpfr_set_zero(v, 1); }
  ~MpfrVar() { mpfr_clear(v); }
  MpfrVar(const MpfrVar&) = delete;
  MpfrVar& operator=(const MpfrVar&) = delete;
};

Real from_mpfr(const mpfr_t x) {
  Real r;
  mpfr_set(r.backend().data(), x, MPFR_RNDN);
  return r;
}

// (u, u') = (tlambda S v, tlambda' S v) box and exact summation for the direct evaluators
ComplexHP direct_sum(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP, const RatVec2& gamma,
                     const RatVec2& delta, const ComplexHP& q, const Rat& Emax, ConeWeight kind, const Rat& scale) {
  if (!(quad(S, lambda) < 0 && quad(S, lambdaP) < 0 && bilinear(S, lambda, lambdaP) < 0))
    throw InputError("need Q(lambda), Q(lambda'), tlambda S lambda' < 0");
  unsigned bits = q.bits;
  PrecisionGuard guard(bits + 32);
  ComplexHP zero(Real(0), Real(0), bits);
  Vec2 a = {S[0][0] * lambda[0] + S[0][1] * lambda[1], S[1][0] * lambda[0] + S[1][1] * lambda[1]};
  Vec2 b = {S[0][0] * lambdaP[0] + S[0][1] * lambdaP[1], S[1][0] * lambdaP[0] + S[1][1] * lambdaP[1]};
  long det = a[0] * b[1] - a[1] * b[0];
  if (det == 0) return zero;  // lambda' is a positive multiple of lambda: every weight vanishes
  // v = Linv (u, u'), L rows a, b
  std::array<std::array<Rat, 2>, 2> Li{{{Rat(b[1], det), Rat(-a[1], det)}, {Rat(-b[0], det), Rat(a[0], det)}}};
  for (auto& row : Li)
    for (auto& x : row) x.canonicalize();
  RatVec2 c0 = {Li[0][0], Li[1][0]}, c1 = {Li[0][1], Li[1][1]};
  Rat pu = ratq(S, c0, c0), ru = -ratq(S, c0, c1), su = ratq(S, c1, c1);  // u' = -w
  if (pu <= 0 || su <= 0 || (ru < 0 && ru * ru >= pu * su))
    throw DivergenceError("series diverges on the support cone of lambda, lambda'");
  Rat qg = ratq(S, gamma, gamma);
  Rat B = Emax / scale + qg;
  if (B < 0) return zero;
  double Bd = to_d(B);
  double ku = ru >= 0 ? to_d(pu) : to_d(pu - ru * ru / su), kw = ru >= 0 ? to_d(su) : to_d(su - ru * ru / pu);
  double ub = std::sqrt(Bd / ku) + 1, wb = std::sqrt(Bd / kw) + 1;
  std::array<long, 2> lo{}, hi{};
  for (int i = 0; i < 2; ++i) {
    double r = std::fabs(to_d(Li[i][0])) * ub + std::fabs(to_d(Li[i][1])) * wb;
    lo[i] = static_cast<long>(std::floor(-r - to_d(gamma[i]))) - 1;
    hi[i] = static_cast<long>(std::ceil(r - to_d(gamma[i]))) + 1;
  }
  Real lr = boost::multiprecision::log(q.abs()), th = boost::multiprecision::atan2(q.im, q.re);
  Real twopi = boost::math::constants::two_pi<Real>();
  RatVec2 Sd = {S[0][0] * delta[0] + S[0][1] * delta[1], S[1][0] * delta[0] + S[1][1] * delta[1]};
  ComplexHP acc = zero;
  for (long l0 = lo[0]; l0 <= hi[0]; ++l0)
    for (long l1 = lo[1]; l1 <= hi[1]; ++l1) {
      RatVec2 v = {gamma[0] + l0, gamma[1] + l1};
      int su_ = sign_of(a[0] * v[0] + a[1] * v[1]), sw = sign_of(b[0] * v[0] + b[1] * v[1]);
      int w = kind == ConeWeight::false_theta ? su_ * (su_ - sw) : su_ - sw;
      if (w == 0) continue;
      Rat E = scale * (ratq(S, v, v) - qg);
      if (E > Emax) continue;
      Real Er = to_real(E);
      Real mod = boost::multiprecision::exp(Er * lr);
      Real ang = Er * th + twopi * to_real(frac_of(Sd[0] * v[0] + Sd[1] * v[1]));
      acc += ComplexHP(mod * boost::multiprecision::cos(ang) * w, mod * boost::multiprecision::sin(ang) * w, bits);
    }
  ComplexHP pre = expi_rat(-(gamma[0] * Sd[0] + gamma[1] * Sd[1]), bits + 32);
  return pre * acc;
}

std::vector<ComplexHP> neville_column(const std::vector<double>& ts, const std::vector<ComplexHP>& fs) {
  // value at 0 of the interpolant through all points
  std::vector<ComplexHP> P = fs;
  size_t n = ts.size();
  for (size_t d = 1; d < n; ++d)
    for (size_t i = 0; i + d < n; ++i) {
      Real ti(ts[i]), tj(ts[i + d]);
      // P_i..i+d(0) = (tj P_i..i+d-1 - ti P_i+1..i+d) / (tj - ti)
      P[i] = scale(scale(P[i], tj) - scale(P[i + 1], ti), Real(1) / (tj - ti));
    }
  return P;
}

ComplexHP extrapolate(const std::vector<double>& ts, const std::vector<ComplexHP>& fs, size_t pts) {
  std::vector<double> t(ts.end() - pts, ts.end());
  std::vector<ComplexHP> f(fs.end() - pts, fs.end());
  return neville_column(t, f)[0];
}

double absd(const ComplexHP& z) { return z.abs().convert_to<double>(); }

}  // namespace

nlohmann::json complex_json(const ComplexHP& z) { return nlohmann::json::array({z.real_d(), z.imag_d()}); }

std::vector<ConeTerm> cone_enumerate(const Mat2& S2, const ConeBasis& basis, const RatVec2& gamma0, const Rat& Emax) {
  ConeSpec c = cone_from_basis(S2, basis, gamma0, ConeWeight::false_theta);
  long D = 1;
  for (const auto& x : c.exp_coeffs()) D = lcm_long(D, den_long(x));
  std::vector<ConeTerm> out;
  enumerate_cone(c, D, 1, Emax, [&](long m, long n, int w, long long en, long) {
    out.push_back({m, n, w, Rat(0), make_rat(en, D)});
  });
  std::sort(out.begin(), out.end(), [](const ConeTerm& a, const ConeTerm& b) {
    return a.exponent != b.exponent ? a.exponent < b.exponent : std::make_pair(a.m, a.n) < std::make_pair(b.m, b.n);
  });
  return out;
}

std::map<Rat, CycNum> QSeries::terms() const {
  std::map<Rat, CycNum> out;
  for (size_t i = 0; i < entries.size();) {
    std::vector<long long> counts(Lc, 0);
    long long n = entries[i].n;
    for (; i < entries.size() && entries[i].n == n; ++i) counts[entries[i].j] += entries[i].count;
    CycNum c = prefactor * CycNum::from_small_power_sums(Lc, counts);
    if (!c.is_zero()) out.emplace(make_rat(n, Dexp), c);
  }
  return out;
}

std::vector<std::pair<Rat, CycNum>> QSeries::first_terms(size_t count) const {
  std::vector<std::pair<Rat, CycNum>> out;
  for (size_t i = 0; i < entries.size() && out.size() < count;) {
    std::vector<long long> counts(Lc, 0);
    long long n = entries[i].n;
    for (; i < entries.size() && entries[i].n == n; ++i) counts[entries[i].j] += entries[i].count;
    CycNum c = prefactor * CycNum::from_small_power_sums(Lc, counts);
    if (!c.is_zero()) out.emplace_back(make_rat(n, Dexp), c);
  }
  return out;
}

std::optional<Rat> QSeries::min_exponent() const {
  auto t = first_terms(1);
  if (t.empty()) return std::nullopt;
  return t[0].first;
}

ComplexHP QSeries::eval(const Rat& a, const Real& t, unsigned bits) const {
  PrecisionGuard guard(bits + 32);
  unsigned wb = bits + 32;
  long ad = den_long(a);
  long long an = to_ll(a * ad);
  long L = lcm_long(Lc, ad * Dexp);
  long long fc = L / Lc, fe = L / (ad * Dexp);
  std::vector<std::unique_ptr<MpfrVar>> own;
  for (long i = 0; i < L; ++i) own.push_back(std::make_unique<MpfrVar>(wb));
  MpfrVar rho(wb), cur(wb), step(wb), tmp(wb);
  // rho = exp(-t / Dexp)
  Real tr = t;
  mpfr_set(tmp.v, tr.backend().data(), MPFR_RNDN);
  mpfr_div_si(tmp.v, tmp.v, -Dexp, MPFR_RNDN);
  mpfr_exp(rho.v, tmp.v, MPFR_RNDN);
  long long prev = 0;
  bool first = true;
  for (const auto& e : entries) {
    if (first || e.n != prev) {
      if (first || e.n - prev > 64) {
        mpfr_mul_si(tmp.v, tr.backend().data(), -e.n, MPFR_RNDN);
        mpfr_div_si(tmp.v, tmp.v, Dexp, MPFR_RNDN);
        mpfr_exp(cur.v, tmp.v, MPFR_RNDN);
      } else {
        mpfr_pow_ui(step.v, rho.v, static_cast<unsigned long>(e.n - prev), MPFR_RNDN);
        mpfr_mul(cur.v, cur.v, step.v, MPFR_RNDN);
      }
      prev = e.n;
      first = false;
    }
    long long idx = static_cast<long long>((static_cast<i128>(e.j) * fc + static_cast<i128>(an) * e.n * fe) % L);
    if (idx < 0) idx += L;
    mpfr_mul_si(tmp.v, cur.v, e.count, MPFR_RNDN);
    mpfr_add(own[idx]->v, own[idx]->v, tmp.v, MPFR_RNDN);
  }
  Real re(0), im(0);
  Real twopi = boost::math::constants::two_pi<Real>();
  for (long i = 0; i < L; ++i) {
    if (mpfr_zero_p(own[i]->v)) continue;
    Real c = from_mpfr(own[i]->v);
    Real ang = twopi * Real(i) / Real(L);
    re += c * boost::multiprecision::cos(ang);
    im += c * boost::multiprecision::sin(ang);
  }
  return prefactor.embed(bits + 32) * ComplexHP(re, im, bits);
}

ComplexHP QSeries::eval_q(const ComplexHP& q, unsigned bits) const {
  PrecisionGuard guard(bits + 32);
  Real lr = boost::multiprecision::log(q.abs()), th = boost::multiprecision::atan2(q.im, q.re);
  Real twopi = boost::math::constants::two_pi<Real>();
  Real re(0), im(0);
  for (const auto& e : entries) {
    Real E = Real(e.n) / Real(Dexp);
    Real mod = boost::multiprecision::exp(E * lr) * e.count;
    Real ang = E * th + twopi * Real(e.j) / Real(Lc);
    re += mod * boost::multiprecision::cos(ang);
    im += mod * boost::multiprecision::sin(ang);
  }
  return prefactor.embed(bits + 32) * ComplexHP(re, im, bits);
}

nlohmann::json QSeries::to_json(size_t limit, unsigned bits) const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& [E, c] : first_terms(limit))
    terms_json.push_back({{"exponent", to_string(E)}, {"coefficient", cyc_json(c)}, {"numeric", complex_json(c.embed(bits))}});
  return {{"Emax", to_string(Emax)}, {"distinctEntries", entries.size()}, {"terms", terms_json}};
}

ComplexHP zwegers_theta(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP, const RatVec2& gamma,
                        const RatVec2& delta, const ComplexHP& q, const Rat& Emax) {
  return direct_sum(S, lambda, lambdaP, gamma, delta, q, Emax, ConeWeight::zwegers, make_rat(1, 2));
}

ComplexHP false_theta(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP, const RatVec2& gamma,
                      const RatVec2& delta, const ComplexHP& q, const Rat& Emax) {
  return direct_sum(S, lambda, lambdaP, gamma, delta, q, Emax, ConeWeight::false_theta, make_rat(1, 4));
}

QSeries zwegers_series(const Mat2& S, const ConeBasis& basis, const RatVec2& gamma, const Rat& Emax) {
  validate_cone_basis(S, basis);
  ConeSpec c = cone_from_basis(S, basis, gamma, ConeWeight::zwegers);
  c.scale = make_rat(1, 2);
  c.shift = -ratq(S, gamma, gamma) / 2;
  return build_series({c}, Emax);
}

QSeries zhat_series(const HGraph& g, const ConeBasis& basis, const Rat& x, const Rat& Emax) {
  QuadFormData sd = s_data(g);
  if (!sd.s_indefinite()) throw InputError("S not indefinite");
  if (abs(sd.detW) != 1) throw InputError("det W must be +-1");
  Mat2 S = to_mat2(sd.S);
  validate_cone_basis(S, basis);
  WeightedCharSet cs = char_sets(g);
  std::vector<ConeSpec> cones;
  for (const auto& el : cs.S()) {
    Vec2 fl = {floor_of(el.alpha).get_si(), floor_of(el.beta).get_si()};
    RatVec2 gp = {el.alpha - fl[0], el.beta - fl[1]};
    ConeSpec c = cone_from_basis(S, basis, gp, ConeWeight::false_theta);
    c.shift = sd.prefactorExponent;
    RatVec2 flr = to_ratvec(fl);
    c.P0 = x * (quad(S, fl) + 2 * ratq(S, flr, gp));
    c.PA = x * 2 * bilinear(S, fl, basis.tlambda);
    c.PB = x * 2 * bilinear(S, fl, basis.tlambdaP);
    c.mult = el.eps;
    cones.push_back(c);
  }
  QSeries qs = build_series(cones, Emax);
  qs.prefactor = cyc_e(make_rat(sd.sigmaWprime, 8)) * CycNum(make_rat(1, 4 * basis.perm));
  return qs;
}

std::vector<double> default_schedule() {
  std::vector<double> s;
  for (int j = 0; j < 6; ++j) s.push_back(0.004 / (1 << j));
  return s;
}

std::vector<double> default_schedule(const Mat2& S, const ConeBasis& b) {
  double g = static_cast<double>(std::max(std::labs(quad(S, b.tlambda)), std::labs(quad(S, b.tlambdaP))));
  double t0 = 0.12 / std::max(g, 1.0);
  std::vector<double> s;
  for (int j = 0; j < 6; ++j) s.push_back(t0 / (1 << j));
  return s;
}

Rat emax_for_schedule(const std::vector<double>& schedule, const Rat& shift) {
  double tmin = *std::min_element(schedule.begin(), schedule.end());
  return shift + Rat(static_cast<long>(std::ceil(35.0 / tmin)));
}

RadialLimitEstimate radial_limit(const RadialEvaluator& f, const std::vector<double>& schedule, int order,
                                 unsigned bits) {
  if (order < 0) throw InputError("extrapolation order must be >= 0");
  if (schedule.size() < static_cast<size_t>(order) + 2) throw InputError("schedule needs at least order+2 points");
  for (size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0)) throw InputError("schedule values must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1])) throw InputError("schedule must be strictly decreasing");
  }
  PrecisionGuard guard(bits + 32);
  RadialLimitEstimate est;
  est.schedule = schedule;
  est.extrapolationOrder = order;
  for (double t : schedule) est.samples.push_back(f(Real(t)));
  size_t pts = order + 1;
  est.value = extrapolate(schedule, est.samples, pts);
  if (order == 0) {
    est.errorEstimate = absd(est.samples.back() - est.samples[est.samples.size() - 2]);
    return est;
  }
  ComplexHP lower = extrapolate(schedule, est.samples, pts - 1);
  est.errorEstimate = absd(est.value - lower);
  if (order >= 2) {
    ComplexHP lower2 = extrapolate(schedule, est.samples, pts - 2);
    double prevCorr = absd(lower - lower2);
    double scaleMax = 0;
    for (const auto& z : est.samples) scaleMax = std::max(scaleMax, absd(z));
    est.converged = !(est.errorEstimate > prevCorr && est.errorEstimate > 1e-9 * (1 + scaleMax));
  }
  return est;
}

std::string to_string(Orientation o) { return o == Orientation::thm11 ? "thm11" : "thm72"; }

nlohmann::json MainTheoremReport::to_json() const {
  nlohmann::json j = {{"k", k},
                      {"basis", basis.to_json()},
                      {"limit", complex_json(limit.value)},
                      {"errorEstimate", limit.errorEstimate},
                      {"converged", limit.converged},
                      {"schedule", limit.schedule},
                      {"order", limit.extrapolationOrder},
                      {"wrt", complex_json(wrt)},
                      {"prop41Printed", complex_json(printed)},
                      {"thm11", complex_json(r1)},
                      {"thm72", complex_json(r2)},
                      {"relErrThm11", relErr1},
                      {"relErrThm72", relErr2},
                      {"ratioToWrt", complex_json(ratioToWrt)},
                      {"terms", terms},
                      {"seconds", seconds}};
  j["orientation"] = verdict ? nlohmann::json(to_string(*verdict)) : nlohmann::json(nullptr);
  return j;
}

MainTheoremReport verify_main_theorem(const HGraph& g, const ConeBasis& basis, long k,
                                      const std::vector<double>& schedule, int order, double tol) {
  if (k < 2) throw InputError("level must be >= 2");
  auto t0 = std::chrono::steady_clock::now();
  unsigned bits = 128;
  PrecisionGuard guard(bits + 32);
  MainTheoremReport rep;
  rep.k = k;
  rep.basis = basis;
  Rat x = make_rat(1, k);
  QSeries zs = zhat_series(g, basis, x, emax_for_schedule(schedule));
  rep.terms = zs.size();
  rep.limit = radial_limit([&](const Real& t) { return zs.eval(x, t, bits); }, schedule, order, bits);
  CycNum D = inv_zeta_diff(k).inverse() * CycNum(Rat(2));
  CycNum printed = prop41_printed(g, k), wrt = wrt_fast(g, k).value;
  rep.printed = printed.embed(bits);
  rep.wrt = wrt.embed(bits);
  rep.r1 = (printed * D).embed(bits);
  rep.r2 = (printed / D).embed(bits);
  rep.relErr1 = absd(rep.limit.value - rep.r1) / absd(rep.r1);
  rep.relErr2 = absd(rep.limit.value - rep.r2) / absd(rep.r2);
  double best = std::min(rep.relErr1, rep.relErr2);
  if (best <= 10 * tol) rep.verdict = rep.relErr1 <= rep.relErr2 ? Orientation::thm11 : Orientation::thm72;
  rep.ratioToWrt = rep.limit.value / (wrt * D).embed(bits);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

bool ZwegersReport::pass() const {
  if (samples.empty()) return false;
  for (const auto& s : samples)
    if (!(s.absLimit <= tolerance)) return false;
  return true;
}

nlohmann::json ZwegersReport::to_json() const {
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& s : samples)
    ss.push_back({{"gamma", {to_string(s.gamma[0]), to_string(s.gamma[1])}},
                  {"limit", complex_json(s.limit.value)},
                  {"abs", s.absLimit},
                  {"errorEstimate", s.limit.errorEstimate},
                  {"converged", s.limit.converged}});
  return {{"k", k}, {"basis", basis.to_json()}, {"tolerance", tolerance}, {"samples", ss}, {"pass", pass()}};
}

std::vector<RatVec2> zwegers_gammas(const HGraph& g, const ConeBasis& basis) {
  std::vector<RatVec2> out = {{Rat(0), Rat(0)}};
  auto elems = char_sets(g).S();
  const Vec2 &l = basis.lambda, &lp = basis.lambdaP;
  long det = l[0] * lp[1] - l[1] * lp[0];
  if (det == 0) throw InputError("lambda and lambda' are parallel");
  for (size_t i : {size_t(0), elems.size() / 2}) {
    if (i >= elems.size()) break;
    const Rat &x = elems[i].alpha, &y = elems[i].beta;
    Rat a = (lp[1] * x - lp[0] * y) / det, b = (-l[1] * x + l[0] * y) / det;
    a.canonicalize();
    b.canonicalize();
    a = frac_of(a);
    b = frac_of(b);
    out.push_back({a * l[0] + b * lp[0], a * l[1] + b * lp[1]});
  }
  return out;
}

ZwegersReport verify_zwegers_vanishing(const HGraph& g, const ConeBasis& basis, long k,
                                       const std::vector<double>& schedule, int order, double tol) {
  if (k < 2) throw InputError("level must be >= 2");
  unsigned bits = 128;
  PrecisionGuard guard(bits + 32);
  QuadFormData sd = s_data(g);
  Mat2 S = to_mat2(sd.S);
  ZwegersReport rep;
  rep.k = k;
  rep.basis = basis;
  rep.tolerance = tol;
  Rat x = make_rat(1, k);
  for (const auto& gam : zwegers_gammas(g, basis)) {
    QSeries zs = zwegers_series(S, basis, gam, emax_for_schedule(schedule));
    ZwegersSample s;
    s.gamma = gam;
    s.limit = radial_limit([&](const Real& t) { return zs.eval(x, t, bits); }, schedule, order, bits);
    s.absLimit = absd(s.limit.value);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace qtop
