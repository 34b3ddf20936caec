#pragma once

#include <gmpxx.h>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qtop {

using Int = mpz_class;
using Rat = mpq_class;
using Real = boost::multiprecision::mpfr_float;

Rat make_rat(long num, long den = 1);
Int floor_of(const Rat& r);
Rat frac_of(const Rat& r);  // r - floor(r), in [0,1)
int sign_of(const Rat& r);
std::string to_string(const Rat& r);
Rat parse_rat(const std::string& s);

long lcm_long(long a, long b);
long euler_phi(long n);

// Sets the working precision of Real for the current thread while alive.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned old_digits_;
};

struct ComplexHP {
  Real re, im;
  unsigned bits = 256;

  ComplexHP() = default;
  ComplexHP(Real r, Real i, unsigned b) : re(std::move(r)), im(std::move(i)), bits(b) {}

  ComplexHP& operator+=(const ComplexHP& o);
  ComplexHP& operator-=(const ComplexHP& o);
  ComplexHP& operator*=(const ComplexHP& o);
  Real abs() const;
  double real_d() const { return re.convert_to<double>(); }
  double imag_d() const { return im.convert_to<double>(); }
};

ComplexHP operator+(ComplexHP a, const ComplexHP& b);
ComplexHP operator-(ComplexHP a, const ComplexHP& b);
ComplexHP operator*(ComplexHP a, const ComplexHP& b);
ComplexHP operator/(const ComplexHP& a, const ComplexHP& b);
ComplexHP scale(const ComplexHP& a, const Real& s);
ComplexHP complex_hp(double re, double im, unsigned bits);
// e(x) = exp(2 pi i x) for rational x
ComplexHP expi_rat(const Rat& x, unsigned bits);

// Integer coefficients of the L-th cyclotomic polynomial, lowest degree first.
const std::vector<Int>& cyclotomic_poly(long L);

// Exact element of Q(zeta_L) in the power basis modulo Phi_L.
class CycNum {
 public:
  CycNum();  // zero at level 1
  CycNum(const Rat& r);  // rational constant at level 1
  static CycNum root(long L, long j);  // zeta_L^j
  static CycNum from_power_sums(long L, const std::vector<Int>& counts);  // sum counts[j] zeta_L^j
  static CycNum from_small_power_sums(long L, const std::vector<long long>& counts);
  static CycNum from_coeffs(long L, std::vector<Rat> coeffs);  // power basis, length phi(L)

  long level() const { return level_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  CycNum lift(long L) const;
  CycNum inverse() const;
  CycNum mul_root(long j) const;  // times zeta_L^j at this level
  CycNum conj() const;
  // times sum r * zeta_L^e over the given (e, r) pairs, at this level
  CycNum mul_power_sum(const std::vector<std::pair<long, Rat>>& terms) const;

  CycNum operator-() const;
  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const CycNum& o);
  CycNum& operator/=(const CycNum& o) { return *this *= o.inverse(); }

  friend bool operator==(const CycNum& a, const CycNum& b);
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  // sum of |c_j|, used in the embedding error bound
  Rat l1_norm() const;
  ComplexHP embed(unsigned bits = 256) const;

 private:
  long level_;
  std::vector<Rat> coeffs_;
};

inline CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
inline CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
inline CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
inline CycNum operator/(CycNum a, const CycNum& b) { return a /= b; }

CycNum cyc_e(const Rat& r);

enum class CycOp { add, sub, mul, neg };
CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op);
ComplexHP cyc_embed(const CycNum& z, unsigned bits);
// error bound 2^(1-bits) * sum|c_j| promised by cyc_embed
double cyc_embed_bound(const CycNum& z, unsigned bits);

// Sum of integer multiples of zeta_L^j, kept unreduced until value() is asked for.
class RootSum {
 public:
  explicit RootSum(long L) : level_(L), counts_(L, 0) {}
  long level() const { return level_; }
  void add(long j, long long n);
  void add(const RootSum& o);
  const std::vector<long long>& counts() const { return counts_; }
  CycNum value() const;

 private:
  long level_;
  std::vector<long long> counts_;
};

// sqrt(m) as an element of Q(zeta_{4m}) via the quadratic Gauss sum
CycNum cyc_sqrt(long m);

Rat bernoulli_number(unsigned n);
Rat bernoulli_poly(unsigned i, const Rat& x);

}  // namespace qtop
