#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "symtan/invariants.hpp"

using namespace symtan;

namespace {

// Variable permutation of the d*d matrix variables induced by g.
std::vector<int> mdd_variable_perm(const std::vector<int>& g) {
  int d = static_cast<int>(g.size());
  std::vector<int> perm(d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) perm[i * d + j] = g[i] * d + g[j];
  }
  return perm;
}

std::vector<int> transposition(int d, int a, int b) {
  std::vector<int> g(d);
  std::iota(g.begin(), g.end(), 0);
  std::swap(g[a], g[b]);
  return g;
}

std::vector<int> full_cycle(int d) {
  std::vector<int> g(d);
  for (int i = 0; i < d; ++i) g[i] = (i + 1) % d;
  return g;
}

}  // namespace

TEST_CASE("monomial symmetric polynomials") {
  Polynomial m2 = monomial_symmetric(Partition({2}), 3);
  CHECK(m2 == Polynomial::parse("x1^2 + x2^2 + x3^2", 3));

  Polynomial m21 = monomial_symmetric(Partition({2, 1}), 3);
  CHECK(m21.num_terms() == 6);
  CHECK(m21.coeff({{0, 2}, {1, 1}}) == Rat(1));
  CHECK(m21.coeff({{0, 1}, {1, 2}}) == Rat(1));

  Polynomial m111 = monomial_symmetric(Partition({1, 1, 1}), 3);
  CHECK(m111 == Polynomial::parse("x1*x2*x3", 3));

  CHECK_THROWS(monomial_symmetric(Partition({1, 1, 1, 1}), 3));
}

TEST_CASE("orbit sums: small cases from the diagonal action") {
  OrbitSum a = orbit_sum_mdd(parse_mdd_monomial("w11^2"), 3);
  CHECK(a.poly.num_terms() == 3);
  // Variables are row-major w_{ij} -> index (i-1)*d + (j-1).
  CHECK(a.poly.coeff({{0, 2}}) == Rat(1));
  CHECK(a.poly.coeff({{4, 2}}) == Rat(1));
  CHECK(a.poly.coeff({{8, 2}}) == Rat(1));

  OrbitSum b = orbit_sum_mdd(parse_mdd_monomial("w11*w22"), 3);
  CHECK(b.poly.num_terms() == 3);
  CHECK(b.poly.coeff({{0, 1}, {4, 1}}) == Rat(1));
  CHECK(b.poly.coeff({{0, 1}, {8, 1}}) == Rat(1));
  CHECK(b.poly.coeff({{4, 1}, {8, 1}}) == Rat(1));

  OrbitSum c = orbit_sum_perm({1, 1}, 4);
  CHECK(c.poly == monomial_symmetric(Partition({1, 1}), 4));

  CHECK_THROWS(orbit_sum_mdd(parse_mdd_monomial("w12*w34"), 3));
}

TEST_CASE("orbit sums of group-related seeds coincide") {
  // w12*w23 and w13*w32 are in the same orbit (relabel 2<->3).
  OrbitSum a = orbit_sum_mdd(parse_mdd_monomial("w12*w23"), 5);
  OrbitSum b = orbit_sum_mdd(parse_mdd_monomial("w13*w32"), 5);
  CHECK(a.poly == b.poly);
  CHECK(parse_mdd_monomial("w12*w23").canonical() == parse_mdd_monomial("w13*w32").canonical());
}

TEST_CASE("canonical seed enumeration matches the printed lists") {
  for (int degree : {2, 3}) {
    std::vector<MddMonomial> canon = canonical_mdd_seeds(degree);
    const auto& printed = printed_mdd_seeds(degree);
    CHECK(canon.size() == printed.size());
    std::set<MddMonomial> canon_set(canon.begin(), canon.end());
    // Every printed seed canonicalizes into the enumerated set, bijectively.
    std::set<MddMonomial> from_printed;
    for (const auto& s : printed) {
      MddMonomial c = parse_mdd_monomial(s).canonical();
      CHECK(canon_set.count(c) == 1);
      from_printed.insert(c);
    }
    CHECK(from_printed.size() == printed.size());
  }
  CHECK(canonical_mdd_seeds(2).size() == 11);
  CHECK(canonical_mdd_seeds(3).size() == 52);
}

TEST_CASE("invariant basis for the permutation representation") {
  InvariantBasis b2 = invariant_basis(RepId::perm(5), 2);
  REQUIRE(b2.elements.size() == 2);
  CHECK(b2.elements[0].poly == monomial_symmetric(Partition({2}), 5));
  CHECK(b2.elements[1].poly == monomial_symmetric(Partition({1, 1}), 5));

  InvariantBasis b3 = invariant_basis(RepId::perm(5), 3);
  CHECK(b3.elements.size() == 3);

  CHECK_THROWS(invariant_basis(RepId::perm(2), 2));
}

TEST_CASE("invariant basis counts equal the trivial multiplicity (perm)") {
  for (int d : {3, 5, 7}) {
    for (int degree : {2, 3}) {
      if (d < 3) continue;
      InvariantBasis b = invariant_basis(RepId::perm(d), degree);
      Decomposition dec = decompose(RepId::sym_power_of(degree, RepId::perm(d)));
      CHECK(static_cast<long long>(b.elements.size()) == dec.multiplicity_of(Partition({d})));
    }
  }
}

TEST_CASE("mdd quadratic invariant basis at d = 8") {
  InvariantBasis b = invariant_basis(RepId::mdd(8), 2);
  CHECK(b.elements.size() == 11);
  Decomposition dec = decompose(RepId::sym_power_of(2, RepId::mdd(8)));
  CHECK(dec.multiplicity_of(Partition({8})) == 11);

  // Exact invariance under the generators.
  std::vector<int> vp1 = mdd_variable_perm(transposition(8, 0, 1));
  std::vector<int> vp2 = mdd_variable_perm(full_cycle(8));
  for (const auto& el : b.elements) {
    CHECK(el.poly.permute_variables(vp1) == el.poly);
    CHECK(el.poly.permute_variables(vp2) == el.poly);
  }
  CHECK_THROWS(invariant_basis(RepId::mdd(7), 2));
}

TEST_CASE("generator degree bound") {
  CHECK(generator_degree_bound(RepId::perm(2)) == 2);
  CHECK(generator_degree_bound(RepId::perm(5)) == 10);
  CHECK(generator_degree_bound(RepId::mdd(4)) == 120);
}
