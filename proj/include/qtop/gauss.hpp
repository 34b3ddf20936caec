#pragma once

#include "qtop/plumbing.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace qtop {

// Data of the Gauss sum reciprocity formula, rank n <= 2.
struct LatticeData {
  int n = 1;
  IntMatrix gram;  // <x,y> = tx gram y on L = Z^n
  RatMatrix h;     // self-adjoint for <.,.>, given in coordinates of L
  std::vector<Rat> u;
  long k = 1;
};

struct ReciprocitySides {
  CycNum lhs;
  // rhs = phase * sqrt(rhsRadicand) * rhsSum
  CycNum rhsPhase;
  Rat rhsRadicand;
  CycNum rhsSum;         // over L'/h(L)
  CycNum rhsSumPrinted;  // over L'/h(L'); off by |L'/L| unless L is unimodular
  CycNum rhs() const;  // exact, using cyc_sqrt when the radicand is a rational square times an integer
  CycNum rhs_printed() const;
  bool equal() const;
  bool printed_equal() const;
};

// checks the LatticeData preconditions; throws InputError on violation
void check_lattice(const LatticeData& d);
ReciprocitySides reciprocity_sides(const LatticeData& d);

// sum_{(alpha,beta)} eps sum_{m,n in [k]} e(Q(gamma + (m,n))/k) m n
CycNum weighted_gauss_sum(const QuadFormData& sd, const WeightedCharSet& cs, long k);
// same sum over gamma + m l1 + n l2 for a basis (l1, l2) of Z^2
CycNum weighted_gauss_sum_basis(const QuadFormData& sd, const WeightedCharSet& cs, long k,
                                std::array<long, 2> l1, std::array<long, 2> l2);
// sum over l in [k]l1 + [k]l2 weighted by the product of the standard coordinates of l
CycNum weighted_gauss_sum_lattice(const QuadFormData& sd, const WeightedCharSet& cs, long k,
                                  std::array<long, 2> l1, std::array<long, 2> l2);
long permanent2(std::array<long, 2> l1, std::array<long, 2> l2);  // columns l1, l2
// 1 / (zeta_2k - zeta_2k^-1)
CycNum inv_zeta_diff(long k);

struct WRTValue {
  CycNum value;
  long k = 2;
};

WRTValue wrt_bruteforce(const PlumbGraph& g, long k);
WRTValue wrt_fast(const HGraph& g, long k);
// Prop 4.1 expression exactly as printed; equals -wrt_fast (see the decisions notes)
CycNum prop41_printed(const HGraph& g, long k);

// Prop 2.3 hypotheses on T: 2M alpha integral and M alpha, M alpha^2 mod 1 constant
bool prop23_hypotheses(const QuadFormData& sd, const WeightedCharSet& cs);

struct SuiteReport {
  std::string name;
  int instances = 0;
  int passed = 0;
  int skipped = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty() && passed + skipped == instances && passed > 0; }
};

// C: arbitrary map on T+[k]; B: map on T+[k] with sum chi(alpha) B(alpha) = 0 over T+[k]
using AlphaFun = std::function<Rat(const Rat& alpha)>;
struct VanishingSums {
  CycNum p1a, p1b, p2a, p2b;
};
VanishingSums vanishing_sums(const QuadFormData& sd, const WeightedCharSet& cs, long k, const AlphaFun& C,
                             const AlphaFun& B);

// one random H-graph with det W = +-1 and w3..w6 outside {-1,0,1}
HGraph random_hgraph(std::mt19937_64& rng, bool avoid_units = true, long range = 9);

SuiteReport vanishing_suite(uint64_t seed, int count);
SuiteReport base_change_suite(uint64_t seed, int count);
SuiteReport reciprocity_suite(uint64_t seed, int count);

struct BaseChangeSides {
  CycNum lattice;    // first line of Prop 2.6
  CycNum inBasis;    // perm * value(l1, l2)
  CycNum standard;   // perm * value(e1, e2)
  long perm = 0;
  bool first_holds() const { return lattice == inBasis; }
  bool second_holds() const { return inBasis == standard; }
};
BaseChangeSides base_change_sides(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                                  std::array<long, 2> l2);
// both equalities of Prop 2.6
bool base_change_holds(const QuadFormData& sd, const WeightedCharSet& cs, long k, std::array<long, 2> l1,
                       std::array<long, 2> l2);

// coset representatives of Z^n / A Z^n, n <= 2
std::vector<std::vector<long>> coset_reps(const std::vector<std::vector<long>>& A);

}  // namespace qtop
