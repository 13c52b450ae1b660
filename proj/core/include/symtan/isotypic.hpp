#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "symtan/symgroup.hpp"

namespace symtan {

// Representation of S_d by construction tag. Composites nest, e.g.
// sym_power(2, mdd_diag(8)).
struct RepId {
  enum class Tag { perm_rd, mdd_diag, mdd_plus_rd, tensor_power, sym_power, ext_power };

  Tag tag = Tag::perm_rd;
  int d = 0;
  int power = 0;  // for tensor/sym/ext powers
  std::shared_ptr<const RepId> inner;

  static RepId perm(int d);
  static RepId mdd(int d);
  static RepId mdd_plus(int d);
  static RepId tensor_power_of(int k, const RepId& inner);
  static RepId sym_power_of(int k, const RepId& inner);
  static RepId ext_power_of(const RepId& inner);  // exterior square

  Int dimension() const;
  std::string name() const;  // "perm-rd", "mdd", "sym2(mdd)", ...
};

// Cycle type of g^k from the cycle type of g: a j-cycle splits into gcd(j,k)
// cycles of length j/gcd(j,k).
CycleType power_class(const CycleType& t, int k);

// Character of the representation at the class t; exact.
Int rep_character(const RepId& rep, const CycleType& t);

struct Decomposition {
  struct Entry {
    Partition lambda;
    long long multiplicity = 0;
  };
  std::vector<Entry> entries;  // enumerate_partitions order, multiplicity >= 1

  long long multiplicity_of(const Partition& lambda) const;
};

// Exact isotypic multiplicities via character inner products; verifies the
// dimension identity before returning.
Decomposition decompose(const RepId& rep);

// Orthonormal basis of one irreducible block. `label` names the block
// (e.g. "D_{d,2}"); `lambda` is its isomorphism type. Columns of `basis` are
// the basis vectors in the ambient coordinates (R^d, or vec(M(d,d)) row-major,
// optionally extended by R^d for mdd_plus_rd).
struct ComponentBasis {
  std::string label;
  Partition lambda;
  Eigen::MatrixXd basis;
};

// Explicit constructive bases for perm_rd, mdd_diag and mdd_plus_rd (d >= 4
// for the matrix reps). Deterministic: fixed spanning sequences +
// Gram-Schmidt.
std::vector<ComponentBasis> component_bases(const RepId& rep);

// Orthogonal split of a d x d matrix into the seven invariant blocks of
// M(d,d) = D_d + S_d + A_d. Components sum to W.
struct MddSplit {
  Eigen::MatrixXd d1, d2, s1, s2, s3, a1, a2;
  Eigen::MatrixXd sum() const { return d1 + d2 + s1 + s2 + s3 + a1 + a2; }
};

MddSplit mdd_split(const Eigen::MatrixXd& w);

// Row-major vec: M(i,j) -> index i*d + j.
Eigen::VectorXd vec_rowmajor(const Eigen::MatrixXd& m);
Eigen::MatrixXd unvec_rowmajor(const Eigen::VectorXd& v, int d);

// Action of a permutation g (as images g[i]) on R^d and on vec(M(d,d)) by the
// diagonal action (g.W)_{g(i),g(j)} = W_{i,j}.
Eigen::MatrixXd perm_action_rd(const std::vector<int>& g);
Eigen::MatrixXd perm_action_mdd(const std::vector<int>& g);

// dim V_lambda^H for H = S_{d-p} x S_p (Young subgroup on the last p letters):
// the multiplicity of the trivial H-representation in the restriction.
long long fixed_dim_young(const Partition& lambda, int d, int p);

}  // namespace symtan
