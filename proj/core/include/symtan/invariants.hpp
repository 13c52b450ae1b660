#pragma once

#include <string>
#include <vector>

#include "symtan/isotypic.hpp"
#include "symtan/poly.hpp"

namespace symtan {

// Monomial in the matrix entries w_{ij}, as ((i,j), exponent) factors with
// 1-based indices. Used as orbit seed for the diagonal S_d action
// g.w_{ij} = w_{g(i)g(j)}.
struct MddMonomial {
  std::vector<std::pair<std::pair<int, int>, int>> factors;

  int degree() const;
  std::vector<int> distinct_indices() const;
  // Lex-minimal relabeling of the distinct indices to 1..m.
  MddMonomial canonical() const;
  std::string to_string() const;  // "w11*w23^2"
  bool operator==(const MddMonomial& o) const { return factors == o.factors; }
  bool operator<(const MddMonomial& o) const { return factors < o.factors; }
};

MddMonomial parse_mdd_monomial(const std::string& s);

// Monomial symmetric polynomial m_lambda in d variables.
Polynomial monomial_symmetric(const Partition& lambda, int d);

struct OrbitSum {
  std::string seed_name;
  Polynomial poly;

  OrbitSum() : poly(0) {}
};

// Orbit sum over the S_d action on x-variables; seed given by exponents on
// x_1..x_m (m <= d).
OrbitSum orbit_sum_perm(const std::vector<int>& seed_exponents, int d);
// Orbit sum over the diagonal action on w_{ij}; the expanded polynomial lives
// on d*d variables indexed row-major.
OrbitSum orbit_sum_mdd(const MddMonomial& seed, int d);

struct InvariantBasis {
  RepId rep;
  int degree = 0;
  std::vector<OrbitSum> elements;
};

// Orbit-sum basis of the homogeneous invariants of degree 2 or 3 for perm-rd
// and mdd; requires d at or above the stabilization threshold (perm: 3,
// mdd deg 2: 8, mdd deg 3: 12). Linear independence is certified by exact
// Gaussian elimination over the seed-monomial column submatrix.
InvariantBasis invariant_basis(const RepId& rep, int degree);

// All canonical seed monomials of the given degree for the mdd action
// (11 for degree 2, 52 for degree 3).
std::vector<MddMonomial> canonical_mdd_seeds(int degree);

// The orbit-seed lists as printed in the source material, for the
// canonicalization cross-check.
const std::vector<std::string>& printed_mdd_seeds(int degree);

// max{n, n(n-1)/2} for n = dim of the permutation representation.
Int generator_degree_bound(const RepId& rep);

}  // namespace symtan
