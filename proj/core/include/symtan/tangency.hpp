#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "symtan/poly.hpp"

namespace symtan {

// Dense numeric symmetric tensor (small order/dimension); entries stored on
// the full index grid so contraction is a plain loop.
class NumSymTensor {
 public:
  NumSymTensor(int order, int dim);

  static NumSymTensor from(const SymForm& a);

  int order() const { return order_; }
  int dim() const { return dim_; }
  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;
  double max_abs() const;

  // A(x, ..., x) with k copies.
  double apply_full(const Eigen::VectorXd& x) const;
  // A(x,...,x, .) with k-1 copies: a vector.
  Eigen::VectorXd apply_partial(const Eigen::VectorXd& x) const;
  // A(x,...,x, ., .) with k-2 copies: a matrix.
  Eigen::MatrixXd apply_matrix(const Eigen::VectorXd& x) const;
  // Multi-argument partial application A(v_1,...,v_{k-1}, .).
  Eigen::VectorXd apply_partial_multi(const std::vector<Eigen::VectorXd>& xs) const;
  // Pullback A(Q., ..., Q.) for a dim x m basis matrix Q.
  NumSymTensor restrict(const Eigen::MatrixXd& q) const;
  // Unfolding as a dim x dim^(k-1) matrix.
  Eigen::MatrixXd unfolding() const;

 private:
  int order_, dim_;
  std::vector<double> a_;
  std::int64_t flat(const std::vector<int>& idx) const;
};

struct TangencyProblem {
  Polynomial f;
  Eigen::VectorXd center;

  TangencyProblem(Polynomial poly, Eigen::VectorXd c) : f(std::move(poly)), center(std::move(c)) {
    if (f.nvars() != center.size()) throw std::invalid_argument("TangencyProblem: dimension mismatch");
  }
};

// Membership in the tangency set: all 2x2 minors of [x - c | grad f(x)]
// vanish to a relative tolerance tol * (1 + |grad| * |x-c|).
bool in_tangency_set(const TangencyProblem& tp, const Eigen::VectorXd& x, double tol = 1e-9);

// Truncated tangency arc gamma(t) = sum t^i v_i with eta(t) = sum eta^(i) t^i.
struct ArcJet {
  int order = 0;                    // K: highest power of t carried in gamma
  std::vector<Eigen::VectorXd> v;   // v[0] = v_1, ..., v[K-1] = v_K, |v_1| = 1
  std::vector<double> eta;          // eta[0] = eta^(0), ..., eta[K-1] = eta^(K-1)

  Eigen::VectorXd gamma(double t) const;
  double eta_at(double t) const;
};

// Coefficient of t^k in grad(p - eta(t)/2 |.|^2) along the arc; the zero
// vector iff the arc satisfies the k-th tangency equation.
Eigen::VectorXd tangency_residual(const Polynomial& p, const ArcJet& arc, int k);

struct EigenPair {
  double eta = 0.0;
  Eigen::VectorXd x;  // unit
  int order = 0;
};

struct TensorEigOptions {
  int starts_per_dim_factor = 200;  // total starts = factor * 3^m
  int max_starts = 200000;
  int max_newton_iters = 60;
  double residual_tol = 1e-12;
  double dedupe_angle = 1e-6;
  std::uint64_t seed = 0;
};

struct TensorEigResult {
  std::vector<EigenPair> pairs;  // one representative per eigenvector line
  bool stabilized = false;       // no new line found in the last half of the budget
  long long count_bound = 0;     // ((k-1)^m - 1)/(k-2) for k >= 3, m for k = 2
};

// Enumerates real unit E-eigenpairs k A x^{k-1} = eta x by multi-start
// projective Newton; reports one representative per line {x, -x}.
TensorEigResult tensor_eigenpairs(const NumSymTensor& a, const TensorEigOptions& opts = {});

class SeedError : public std::runtime_error {
 public:
  enum class Kind { degenerate, no_real_seed };
  SeedError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

class ExtensionError : public std::runtime_error {
 public:
  explicit ExtensionError(const std::string& what) : std::runtime_error(what) {}
};

// Order-2 arc seeds at the eigenvalue eta0 of the Hessian 2A_2 = D^2 p(0),
// with Q an orthonormal basis of the eigenspace. Emits both signs of each
// eigenvector line. Throws SeedError on a degenerate linearization
// (Property C failure at eta0) or when no real seed is found.
std::vector<ArcJet> seed_arc(const Polynomial& p, double eta0, const Eigen::MatrixXd& q,
                             const TensorEigOptions& opts = {});

// Extends an arc to order K by solving the bordered linear system of each
// tangency equation in turn. Throws ExtensionError on rank deficiency.
ArcJet extend_arc(const Polynomial& p, const ArcJet& arc, int K);

// Eigen-decomposition of the Hessian grouped into eigenspaces.
struct HessianEigenspaces {
  std::vector<double> eigenvalues;            // one per eigenspace, ascending
  std::vector<Eigen::MatrixXd> bases;         // orthonormal columns
};
HessianEigenspaces hessian_eigenspaces(const Polynomial& p, double group_tol = 1e-8);

// Seeds arcs at every Hessian eigenvalue and extends them to the given order.
std::vector<ArcJet> all_arcs(const Polynomial& p, int order, const TensorEigOptions& opts = {});

enum class PropCStatus { pass, fail, inconclusive };

struct PropertyCReport {
  struct PerEigenvalue {
    double eta0 = 0.0;
    int eigenspace_dim = 0;
    int pairs_found = 0;
    double min_regularity = 0.0;  // smallest singular value seen in the checks
    PropCStatus status = PropCStatus::fail;
  };
  std::vector<PerEigenvalue> eigenvalues;
  PropCStatus overall = PropCStatus::fail;
};

// Checks the regularity of every eigenvalue of D^3 p(0) restricted to each
// eigenspace of D^2 p(0).
PropertyCReport check_property_c(const Polynomial& p, const TensorEigOptions& opts = {});

struct BBox {
  double xmin, xmax, ymin, ymax;
};

struct Polyline {
  std::vector<Eigen::Vector2d> pts;
};

struct TraceResult {
  std::vector<Polyline> polylines;
  int degenerate_cells = 0;
};

// Marching-squares zero contour of T(x,y) = D1 f * (y - c2) - D2 f * (x - c1).
TraceResult trace_2d(const TangencyProblem& tp, const BBox& box, int grid_n);

// Residual |grad p(gamma(t)) - eta(t) gamma(t)| at the sample points; used by
// the order-of-contact checks.
std::vector<double> arc_residual_samples(const Polynomial& p, const ArcJet& arc,
                                         const std::vector<double>& ts);

// Least-squares slope of log(residual) vs log(t); returns +inf if all
// residuals are at machine-zero scale.
double log_log_slope(const std::vector<double>& ts, const std::vector<double>& rs,
                     double zero_floor = 1e-13);

}  // namespace symtan
