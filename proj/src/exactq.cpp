#include "qtop/exactq.hpp"

#include <boost/math/constants/constants.hpp>

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace qtop {

Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

Int floor_of(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rat frac_of(const Rat& r) { return r - Rat(floor_of(r)); }

int sign_of(const Rat& r) { return sgn(r); }

std::string to_string(const Rat& r) { return r.get_str(); }

Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  return r;
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

long euler_phi(long n) {
  long r = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    r -= r / p;
  }
  if (n > 1) r -= r / n;
  return r;
}

PrecisionGuard::PrecisionGuard(unsigned bits) : old_digits_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(bits * 0.30103) + 1);
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(old_digits_); }

ComplexHP& ComplexHP::operator+=(const ComplexHP& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexHP& ComplexHP::operator-=(const ComplexHP& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexHP& ComplexHP::operator*=(const ComplexHP& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Real ComplexHP::abs() const { return boost::multiprecision::sqrt(re * re + im * im); }

ComplexHP operator+(ComplexHP a, const ComplexHP& b) { return a += b; }
ComplexHP operator-(ComplexHP a, const ComplexHP& b) { return a -= b; }
ComplexHP operator*(ComplexHP a, const ComplexHP& b) { return a *= b; }

ComplexHP operator/(const ComplexHP& a, const ComplexHP& b) {
  Real d = b.re * b.re + b.im * b.im;
  return ComplexHP((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d, a.bits);
}

ComplexHP scale(const ComplexHP& a, const Real& s) { return ComplexHP(a.re * s, a.im * s, a.bits); }

ComplexHP complex_hp(double re, double im, unsigned bits) {
  PrecisionGuard g(bits);
  return ComplexHP(Real(re), Real(im), bits);
}

ComplexHP expi_rat(const Rat& x, unsigned bits) {
  PrecisionGuard g(bits + 16);
  Rat f = frac_of(x);
  Real ang = boost::math::constants::two_pi<Real>() * Real(f.get_num().get_str()) / Real(f.get_den().get_str());
  ComplexHP z(boost::multiprecision::cos(ang), boost::multiprecision::sin(ang), bits);
  return z;
}

namespace {

using Poly = std::vector<Int>;

std::mutex g_cyclo_mu;
std::map<long, Poly> g_cyclo;

}  // namespace

namespace {

int moebius(long n) {
  int m = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  return n > 1 ? -m : m;
}

}  // namespace

const std::vector<Int>& cyclotomic_poly(long L) {
  if (L < 1) throw std::invalid_argument("cyclotomic level must be positive");
  {
    std::lock_guard<std::mutex> lk(g_cyclo_mu);
    auto it = g_cyclo.find(L);
    if (it != g_cyclo.end()) return it->second;
  }
  // Phi_L = prod_{d | L} (x^d - 1)^{mu(L/d)}: multiply the positive factors, then divide
  Poly p{1};
  std::vector<long> divisors;
  for (long d = 1; d <= L; ++d)
    if (L % d == 0 && moebius(L / d) != 0) divisors.push_back(d);
  for (long d : divisors) {
    if (moebius(L / d) != 1) continue;
    Poly q(p.size() + d, 0);
    for (size_t i = 0; i < p.size(); ++i) {
      q[i + d] += p[i];
      q[i] -= p[i];
    }
    p = std::move(q);
  }
  for (long d : divisors) {
    if (moebius(L / d) != -1) continue;
    // divide by x^d - 1: q_i = q_{i-d} - p_i read from the bottom
    size_t n = p.size() - d;
    Poly q(n, 0);
    for (size_t i = 0; i < n; ++i) q[i] = -p[i] + (i >= static_cast<size_t>(d) ? q[i - d] : Int(0));
    p = std::move(q);
  }
  std::lock_guard<std::mutex> lk(g_cyclo_mu);
  return g_cyclo.emplace(L, std::move(p)).first->second;
}

namespace {

// Reduce sum c_j x^j (j < L) modulo Phi_L; returns phi(L) coefficients.
template <class T>
std::vector<Rat> reduce_mod_cyclo(long L, std::vector<T> c) {
  const Poly& phi = cyclotomic_poly(L);
  size_t d = phi.size() - 1;
  for (size_t i = c.size(); i-- > d;) {
    if (c[i] == 0) continue;
    T a = c[i];
    c[i] = 0;
    for (size_t j = 0; j < d; ++j)
      if (phi[j] != 0) c[i - d + j] -= a * T(phi[j]);
  }
  std::vector<Rat> out(d);
  for (size_t j = 0; j < d && j < c.size(); ++j) out[j] = Rat(c[j]);
  return out;
}

// machine-integer version; returns false if an intermediate value could overflow
bool reduce_small(long L, std::vector<__int128>& c) {
  const Poly& phi = cyclotomic_poly(L);
  size_t d = phi.size() - 1;
  std::vector<std::pair<size_t, long>> nz;
  for (size_t j = 0; j < d; ++j) {
    if (phi[j] == 0) continue;
    if (!phi[j].fits_slong_p() || abs(phi[j]) > (1L << 30)) return false;
    nz.emplace_back(j, phi[j].get_si());
  }
  const __int128 lim = static_cast<__int128>(1) << 90;
  for (size_t i = c.size(); i-- > d;) {
    __int128 a = c[i];
    if (a == 0) continue;
    if (a > lim || a < -lim) return false;
    c[i] = 0;
    for (auto [j, f] : nz) {
      __int128& x = c[i - d + j];
      x -= a * f;
      if (x > lim || x < -lim) return false;
    }
  }
  c.resize(d);
  return true;
}

Int int_of(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  Int hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0UL));
  Int r = (hi << 64) + lo;
  return neg ? Int(-r) : r;
}

std::vector<Rat> poly_trim(std::vector<Rat> p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

// remainder and quotient of a by b over Q
void poly_divmod(const std::vector<Rat>& a, const std::vector<Rat>& b, std::vector<Rat>& q,
                 std::vector<Rat>& r) {
  r = poly_trim(a);
  auto bb = poly_trim(b);
  if (bb.empty()) throw std::domain_error("polynomial division by zero");
  q.assign(r.size() >= bb.size() ? r.size() - bb.size() + 1 : 1, 0);
  while (!r.empty() && r.size() >= bb.size()) {
    Rat c = r.back() / bb.back();
    size_t sh = r.size() - bb.size();
    q[sh] += c;
    for (size_t j = 0; j < bb.size(); ++j) r[sh + j] -= c * bb[j];
    r = poly_trim(r);
  }
}

std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Rat> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j] != 0) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<Rat> poly_sub(std::vector<Rat> a, const std::vector<Rat>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return poly_trim(a);
}

}  // namespace

CycNum::CycNum() : level_(1), coeffs_(1, Rat(0)) {}

CycNum::CycNum(const Rat& r) : level_(1), coeffs_(1, r) {}

CycNum CycNum::root(long L, long j) {
  if (L < 1) throw std::invalid_argument("root level must be positive");
  std::vector<Int> c(L, 0);
  c[((j % L) + L) % L] = 1;
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::from_power_sums(long L, const std::vector<Int>& counts) {
  std::vector<Int> c(L, 0);
  for (size_t j = 0; j < counts.size(); ++j) c[j % L] += counts[j];
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::from_small_power_sums(long L, const std::vector<long long>& counts) {
  std::vector<__int128> c(L, 0);
  for (size_t j = 0; j < counts.size(); ++j) c[j % L] += counts[j];
  if (reduce_small(L, c)) {
    CycNum z;
    z.level_ = L;
    z.coeffs_.resize(c.size());
    for (size_t j = 0; j < c.size(); ++j) z.coeffs_[j] = Rat(int_of(c[j]));
    return z;
  }
  std::vector<Int> big(L, 0);
  for (size_t j = 0; j < counts.size(); ++j) big[j % L] += Int(static_cast<long>(counts[j]));
  return from_power_sums(L, big);
}

CycNum CycNum::mul_power_sum(const std::vector<std::pair<long, Rat>>& terms) const {
  long L = level_;
  std::vector<Rat> c(L, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (const auto& [e, r] : terms) c[((static_cast<long>(i) + e) % L + L) % L] += coeffs_[i] * r;
  }
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::from_coeffs(long L, std::vector<Rat> coeffs) {
  long d = euler_phi(L);
  if (static_cast<long>(coeffs.size()) > d) {
    std::vector<Rat> c(L, 0);
    for (size_t j = 0; j < coeffs.size(); ++j) c[j % L] += coeffs[j];
    coeffs = reduce_mod_cyclo(L, std::move(c));
  }
  coeffs.resize(d, 0);
  CycNum z;
  z.level_ = L;
  z.coeffs_ = std::move(coeffs);
  return z;
}

bool CycNum::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

CycNum CycNum::lift(long L) const {
  if (L == level_) return *this;
  if (L % level_ != 0) throw std::invalid_argument("lift target must be a multiple of the level");
  long m = L / level_;
  std::vector<Rat> c(L, 0);
  for (size_t j = 0; j < coeffs_.size(); ++j) c[(j * m) % L] += coeffs_[j];
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::mul_root(long j) const {
  long L = level_;
  long s = ((j % L) + L) % L;
  std::vector<Rat> c(L, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[(i + s) % L] += coeffs_[i];
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::conj() const {
  long L = level_;
  std::vector<Rat> c(L, 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[(L - static_cast<long>(i)) % L] += coeffs_[i];
  CycNum z;
  z.level_ = L;
  z.coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return z;
}

CycNum CycNum::operator-() const {
  CycNum z = *this;
  for (auto& c : z.coeffs_) c = -c;
  return z;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  long L = lcm_long(level_, o.level_);
  if (L != level_) *this = lift(L);
  const CycNum& b = o.level_ == L ? o : o.lift(L);
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += b.coeffs_[i];
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) { return *this += -o; }

CycNum& CycNum::operator*=(const CycNum& o) {
  long L = lcm_long(level_, o.level_);
  CycNum a = lift(L);
  CycNum b = o.level_ == L ? o : o.lift(L);
  std::vector<Rat> c(L, 0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j)
      if (b.coeffs_[j] != 0) c[(i + j) % L] += a.coeffs_[i] * b.coeffs_[j];
  }
  level_ = L;
  coeffs_ = reduce_mod_cyclo(L, std::move(c));
  return *this;
}

CycNum CycNum::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero cyclotomic number");
  // extended Euclid: s*a + t*phi = g (constant)
  const Poly& phi = cyclotomic_poly(level_);
  std::vector<Rat> r0(phi.begin(), phi.end()), r1 = poly_trim(coeffs_);
  std::vector<Rat> s0, s1{Rat(1)};
  while (r1.size() > 1) {
    std::vector<Rat> q, r;
    poly_divmod(r0, r1, q, r);
    auto s2 = poly_sub(s0, poly_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r1.empty()) throw std::domain_error("non-invertible element");
  Rat g = r1[0];
  for (auto& c : s1) c /= g;
  return from_coeffs(level_, s1);
}

bool operator==(const CycNum& a, const CycNum& b) {
  if (a.level_ == b.level_) return a.coeffs_ == b.coeffs_;
  long L = lcm_long(a.level_, b.level_);
  return a.lift(L).coeffs_ == b.lift(L).coeffs_;
}

Rat CycNum::l1_norm() const {
  Rat s = 0;
  for (const auto& c : coeffs_) s += abs(c);
  return s;
}

ComplexHP CycNum::embed(unsigned bits) const {
  PrecisionGuard g(bits + 32);
  ComplexHP acc(Real(0), Real(0), bits);
  Real twopi = boost::math::constants::two_pi<Real>();
  for (size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    Real c = Real(coeffs_[j].get_num().get_str()) / Real(coeffs_[j].get_den().get_str());
    Real ang = twopi * Real(static_cast<long>(j)) / Real(level_);
    acc.re += c * boost::multiprecision::cos(ang);
    acc.im += c * boost::multiprecision::sin(ang);
  }
  return acc;
}

CycNum cyc_e(const Rat& r) {
  Rat f = frac_of(r);
  long L = f.get_den().get_si();
  return CycNum::root(L, f.get_num().get_si());
}

CycNum cyc_arith(const CycNum& a, const CycNum& b, CycOp op) {
  switch (op) {
    case CycOp::add: return a + b;
    case CycOp::sub: return a - b;
    case CycOp::mul: return a * b;
    case CycOp::neg: return -a;
  }
  throw std::invalid_argument("unknown op");
}

ComplexHP cyc_embed(const CycNum& z, unsigned bits) {
  if (bits < 64) throw std::invalid_argument("embedding precision must be at least 64 bits");
  return z.embed(bits);
}

double cyc_embed_bound(const CycNum& z, unsigned bits) {
  return std::ldexp(1.0, 1 - static_cast<int>(bits)) * z.l1_norm().get_d();
}

void RootSum::add(long j, long long n) {
  long r = j % level_;
  if (r < 0) r += level_;
  counts_[r] += n;
}

void RootSum::add(const RootSum& o) {
  if (o.level_ != level_) throw std::invalid_argument("RootSum level mismatch");
  for (long j = 0; j < level_; ++j) counts_[j] += o.counts_[j];
}

CycNum RootSum::value() const { return CycNum::from_small_power_sums(level_, counts_); }

CycNum cyc_sqrt(long m) {
  if (m < 0) throw std::invalid_argument("cyc_sqrt of a negative integer");
  if (m == 0) return CycNum();
  long L = 4 * m;
  RootSum s(L);
  for (long x = 0; x < L; ++x) s.add((x * x) % L, 1);
  // sum = 2 (1 + i) sqrt(m)
  CycNum onePlusI = CycNum(Rat(1)) + CycNum::root(4, 1);
  return s.value() / (CycNum(Rat(2)) * onePlusI);
}

Rat bernoulli_number(unsigned n) {
  // from t/(e^t - 1) = sum B_n t^n/n!, i.e. sum_{j<=n} C(n+1,j) B_j = 0
  static std::mutex mu;
  static std::vector<Rat> cache{Rat(1)};
  std::lock_guard<std::mutex> lk(mu);
  while (cache.size() <= n) {
    unsigned m = cache.size();
    Rat s = 0;
    Int binom = 1;
    for (unsigned j = 0; j < m; ++j) {
      s += Rat(binom) * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    cache.push_back(-s / Rat(m + 1));
  }
  return cache[n];
}

Rat bernoulli_poly(unsigned i, const Rat& x) {
  Rat s = 0, xp = 1;
  Int binom = 1;
  // B_i(x) = sum_k C(i,k) B_k x^(i-k), accumulated from k = i downward
  for (unsigned k = i + 1; k-- > 0;) {
    s += Rat(binom) * bernoulli_number(k) * xp;
    xp *= x;
    binom = binom * k / (i - k + 1);
  }
  return s;
}

}  // namespace qtop
