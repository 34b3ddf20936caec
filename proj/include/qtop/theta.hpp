#pragma once

#include "qtop/conebasis.hpp"
#include "qtop/gauss.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qtop {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ConeWeight {
  false_theta,  // sgn(x)(sgn(x) + sgn(y))
  zwegers,      // sgn(x) + sgn(y)
};

// (x, y) are the (tl, tl')-coordinates of gamma0 + m tl + n tl'
struct ConeTerm {
  long m = 0, n = 0;
  int weight = 0;
  Rat phase;  // filled by zhat_series; 0 from cone_enumerate
  Rat exponent;
};

// Points of gamma0 + Z tl + Z tl' with nonzero false theta weight and tv S2 v <= Emax, sorted by exponent.
// gamma0 is in standard coordinates.
std::vector<ConeTerm> cone_enumerate(const Mat2& S2, const ConeBasis& basis, const RatVec2& gamma0, const Rat& Emax);

// Exact q-series sum_E c_E q^E, c_E = prefactor * sum count * zeta_Lc^j, E = n / Dexp.
class QSeries {
 public:
  struct Entry {
    long long n;
    long j;
    long long count;
  };

  Rat Emax;
  long Dexp = 1;
  long Lc = 1;
  CycNum prefactor = CycNum(Rat(1));
  std::vector<Entry> entries;  // sorted by (n, j), merged, nonzero counts

  std::map<Rat, CycNum> terms() const;  // zero coefficients dropped
  std::vector<std::pair<Rat, CycNum>> first_terms(size_t count) const;
  std::optional<Rat> min_exponent() const;
  size_t size() const { return entries.size(); }

  // value at tau = a + i t / 2pi, i.e. q^E = e(aE) exp(-tE)
  ComplexHP eval(const Rat& a, const Real& t, unsigned bits = 128) const;
  // principal branch q^E = exp(E log q)
  ComplexHP eval_q(const ComplexHP& q, unsigned bits = 128) const;
  // JSON list sorted by exponent, at most `limit` exponents
  nlohmann::json to_json(size_t limit = 200, unsigned bits = 64) const;
};

// Def 6.1 (second display), Q(v) = tv S v / 2, truncated at exponent Emax
ComplexHP zwegers_theta(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP, const RatVec2& gamma,
                        const RatVec2& delta, const ComplexHP& q, const Rat& Emax);
// Def 7.1 (second display), exponents Q(v)/2 - Q(gamma)/2 with the same Q
ComplexHP false_theta(const Mat2& S, const Vec2& lambda, const Vec2& lambdaP, const RatVec2& gamma,
                      const RatVec2& delta, const ComplexHP& q, const Rat& Emax);

// Zwegers theta at delta = 0 through the cone enumerator: sum over gamma + Z^2 of
// (sgn x + sgn y) q^{Q(v) - Q(gamma)}, Q(v) = tv S v / 2
QSeries zwegers_series(const Mat2& S, const ConeBasis& basis, const RatVec2& gamma, const Rat& Emax);

// Z-hat of an indefinite H-graph at x, exact to exponent Emax
QSeries zhat_series(const HGraph& g, const ConeBasis& basis, const Rat& x, const Rat& Emax);

struct RadialLimitEstimate {
  ComplexHP value;
  double errorEstimate = 0;
  std::vector<double> schedule;
  int extrapolationOrder = 0;
  bool converged = true;
  std::vector<ComplexHP> samples;
};

using RadialEvaluator = std::function<ComplexHP(const Real& t)>;
// polynomial (Neville) extrapolation to t = 0 through the `order`+1 smallest t
RadialLimitEstimate radial_limit(const RadialEvaluator& f, const std::vector<double>& schedule, int order,
                                 unsigned bits = 128);
std::vector<double> default_schedule();
// t0 = 0.12 / max |Gram diagonal| in the (tl, tl') basis, halved five times
std::vector<double> default_schedule(const Mat2& S, const ConeBasis& b);
// t_min * exponent cut used by the verifiers so that exp(-t E) < 1e-13 beyond Emax
Rat emax_for_schedule(const std::vector<double>& schedule, const Rat& shift = Rat(0));

enum class Orientation { thm11, thm72 };
std::string to_string(Orientation o);

struct MainTheoremReport {
  long k = 2;
  ConeBasis basis;
  RadialLimitEstimate limit;
  ComplexHP wrt;       // normalized WRT (equals wrt_bruteforce)
  ComplexHP printed;   // Prop 4.1 as printed, the normalization Thm 1.1 is stated in
  ComplexHP r1, r2;    // printed * 2(z - 1/z), printed / (2(z - 1/z)), z = zeta_2k
  double relErr1 = 0, relErr2 = 0;
  std::optional<Orientation> verdict;
  ComplexHP ratioToWrt;  // limit / (2(z - 1/z) wrt)
  double seconds = 0;
  size_t terms = 0;
  bool pass(double tol = 1e-3) const { return verdict.has_value() && std::min(relErr1, relErr2) <= tol; }
  nlohmann::json to_json() const;
};

MainTheoremReport verify_main_theorem(const HGraph& g, const ConeBasis& basis, long k,
                                      const std::vector<double>& schedule, int order = 3, double tol = 1e-3);

struct ZwegersSample {
  RatVec2 gamma;
  RadialLimitEstimate limit;
  double absLimit = 0;
};

struct ZwegersReport {
  long k = 2;
  ConeBasis basis;
  std::vector<ZwegersSample> samples;
  double tolerance = 1e-4;
  bool pass() const;
  nlohmann::json to_json() const;
};

// gamma = 0 and two points of S reduced into [0,1) lambda + [0,1) lambda'
std::vector<RatVec2> zwegers_gammas(const HGraph& g, const ConeBasis& basis);
ZwegersReport verify_zwegers_vanishing(const HGraph& g, const ConeBasis& basis, long k,
                                       const std::vector<double>& schedule, int order = 3, double tol = 1e-4);

nlohmann::json complex_json(const ComplexHP& z);

}  // namespace qtop
