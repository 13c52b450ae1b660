#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "symtan/isotypic.hpp"
#include "symtan/tangency.hpp"

namespace symtan {

class LeakageError : public std::runtime_error {
 public:
  explicit LeakageError(const std::string& what) : std::runtime_error(what) {}
};

struct BlockSpectrum {
  struct Block {
    Partition lambda;
    std::vector<std::string> labels;    // constituent component-basis labels
    std::vector<double> eigenvalues;    // p_lambda values, sorted ascending
    long long degree = 0;               // multiplier deg(V_lambda)
  };
  std::vector<Block> blocks;
  int ambient_dim = 0;

  std::vector<double> expand() const;  // full multiset, sorted
};

// Projects H onto each isotypic component (the bases grouped by partition),
// eigendecomposes the restrictions, and checks that cross-component leakage
// is below 1e-8 * |H| and that the expanded block spectrum reproduces the
// dense spectrum as a multiset within 1e-8. Throws LeakageError when H is not
// equivariant.
BlockSpectrum equivariant_spectrum(const Eigen::MatrixXd& h, const std::vector<ComponentBasis>& bases);

// Operator norm of the unfolding of A as a linear map from (k-1)-tensors to
// vectors (largest singular value); an upper bound for the spectral norm.
double unfolding_norm_bound(const NumSymTensor& a);
double unfolding_norm_bound(const SymForm& a);

// Lower estimate of |A|_sigma by multi-start tensor power iteration.
double spectral_norm_estimate(const NumSymTensor& a, int starts, std::uint64_t seed);

struct ClusterReport {
  struct Cluster {
    double center = 0.0;
    double width = 0.0;
    long long multiplicity = 0;
    std::optional<std::string> table_match;
  };
  std::vector<Cluster> clusters;
};

// Single-linkage clustering of the eigenvalue list at gap threshold tol.
ClusterReport cluster_report(std::vector<double> eigenvalues, double tol);

// Reference constants of the skew Hessian table at Delta(S_{d-p} x S_p)
// minima of the expected-square ReLU loss, with their multiplicities.
struct TableConstant {
  std::string name;
  double value;
  long long multiplicity;
  bool near_zero;  // the O(d^{-1/2}) cluster
};
std::vector<TableConstant> relu_table_constants(int d);

// Clustered report with each cluster matched to the nearest in-tolerance
// table constant (unmatched surplus clusters allowed).
ClusterReport cluster_report_matched(std::vector<double> eigenvalues, double tol, int d,
                                     double match_tol);

}  // namespace symtan
