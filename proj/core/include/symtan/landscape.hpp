#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symtan/poly.hpp"

namespace symtan {

class CollinearRowsError : public std::runtime_error {
 public:
  explicit CollinearRowsError(const std::string& what) : std::runtime_error(what) {}
};

class NoConvergenceError : public std::runtime_error {
 public:
  explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Symmetric kernel kappa(w, v). relu_gauss is the Gaussian expectation
// E[relu(<w,x>) relu(<v,x>)] in closed form (arc-cosine kernel);
// cubic_activation is the rho(t) = t^3 Gaussian expectation; power(n) is
// <w,v>^n; geometric is |w|^k |v|^k J(cos(w,v)).
struct KernelSpec {
  enum class Kind { relu_gauss, cubic_activation, power, geometric };

  Kind kind = Kind::relu_gauss;
  int power_n = 1;  // power kernel exponent
  int geo_k = 1;    // geometric kernel norm exponent
  std::function<double(double)> J;    // geometric: J(cos theta)
  std::function<double(double)> dJ;   // geometric: J'

  static KernelSpec relu();
  static KernelSpec cubic();
  static KernelSpec power(int n);
  static KernelSpec geometric(std::function<double(double)> j, std::function<double(double)> dj, int k);

  double value(const Eigen::VectorXd& w, const Eigen::VectorXd& v) const;
  // d kappa / d w; at collinear inputs of angle kernels the one-sided limit is
  // returned and *collinear_warning set.
  Eigen::VectorXd grad_w(const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                         bool* collinear_warning = nullptr) const;
  // Second-derivative blocks d2k/dw2 and d2k/dwdv. For the ReLU kernel these
  // use forms that stay bounded near collinearity; allow_collinear_limit
  // accepts same-direction collinear pairs (one-sided limit), otherwise a
  // CollinearRowsError is thrown there.
  void second_blocks(const Eigen::VectorXd& w, const Eigen::VectorXd& v, Eigen::MatrixXd& h_ww,
                     Eigen::MatrixXd& h_wv, bool allow_collinear_limit = false) const;
  bool smooth_everywhere() const { return kind == Kind::cubic_activation || kind == Kind::power; }
};

// L(W, alpha) = 1/2 [ sum a_i a_j k(w_i,w_j) - 2 sum a_i b_j k(w_i,v_j)
//                     + sum b_i b_j k(v_i,v_j) ],
// the squared-distance form; zero at (W, alpha) = (V, beta).
struct KernelLoss {
  KernelSpec kernel;
  Eigen::MatrixXd targets;     // V: h x d, rows are target neurons
  Eigen::VectorXd beta;        // h
  bool second_layer_trainable = true;

  int d() const { return static_cast<int>(targets.cols()); }

  double value(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha) const;
  // Gradient over vec(W) (row-major), followed by alpha when trainable.
  Eigen::VectorXd gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha) const;
  Eigen::MatrixXd hessian(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha,
                          bool allow_collinear_limit = false) const;
  int param_count(int k_rows) const;
};

// Linear isometric chart of the fixed-point space of a subgroup acting
// diagonally on M(d,d) (optionally plus the second layer R^d).
struct FixedPointChart {
  std::string label;
  int d = 0;
  int k_rows = 0;  // = d for the square architecture
  bool with_alpha = false;
  Eigen::MatrixXd xi;  // (d*d [+ d]) x N, orthonormal columns
  std::vector<std::vector<int>> generators;  // permutations generating H

  int params() const { return static_cast<int>(xi.cols()); }
  void unpack(const Eigen::VectorXd& coords, Eigen::MatrixXd& w, Eigen::VectorXd& alpha) const;
  Eigen::VectorXd pack_gradient(const Eigen::VectorXd& full_grad) const { return xi.transpose() * full_grad; }
};

enum class Subgroup {
  delta_sd,          // Delta S_d
  delta_sdm1_s1,     // Delta (S_{d-1} x S_1)
  delta_sdm2_s1s1,   // Delta (S_{d-2} x S_1^2)
  delta_sdm2_s2,     // Delta (S_{d-2} x S_2)
  delta_sdm3_s3,     // Delta (S_{d-3} x S_3)
};

std::string subgroup_name(Subgroup h, int d);
std::optional<Subgroup> parse_subgroup(const std::string& text);

FixedPointChart fixed_point_chart(Subgroup h, int d, bool include_second_layer);

struct NewtonOptions {
  int max_iterations = 300;
  double grad_tol_factor = 1e-8;  // converged when |grad| < factor * (1 + |L|)
  double hessian_floor = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 32;
  double restart_spread = 0.25;
};

struct CriticalPoint {
  Eigen::MatrixXd w;
  Eigen::VectorXd alpha;
  double loss = 0.0;
  double grad_norm = 0.0;      // full-space gradient norm
  std::string isotropy;
  std::string extremal_type;   // "min" | "max" | "saddle" | "degenerate"
  bool converged = false;
  int iterations = 0;
};

// Damped Newton on xi -> L(Xi(xi)): Hessian eigenvalue-floor modification with
// backtracking far from the solution, pure Newton near it. Convergence is
// judged by the full-space gradient.
CriticalPoint newton_on_chart(const KernelLoss& loss, const FixedPointChart& chart,
                              const Eigen::VectorXd& init, const NewtonOptions& opts = {});

// Multi-start variant: seeded perturbations of the init patterns; returns the
// best point by (grad_norm, loss), deterministic for a fixed seed.
CriticalPoint newton_multistart(const KernelLoss& loss, const FixedPointChart& chart,
                                const std::vector<Eigen::VectorXd>& inits, const NewtonOptions& opts = {});

struct IsotropyResult {
  std::string label;
  Int order;
  std::vector<std::vector<int>> generators;
  bool heuristic_only = false;
};

// Largest subgroup of S_d fixing W under the diagonal action (and alpha under
// the permutation action when given). Exhaustive for d <= 8; partition
// refinement heuristic beyond (certified Young subgroups, flagged heuristic).
IsotropyResult isotropy_of(const Eigen::MatrixXd& w, const std::optional<Eigen::VectorXd>& alpha,
                           double tol = 1e-9);

// --- example functions -----------------------------------------------------

struct CriticalPointInfo {
  std::vector<double> x;
  std::string type;        // "min" | "max" | "saddle"
  bool exact_certificate;  // gradient vanishes in exact arithmetic
};

struct ExampleFunction {
  std::string name;
  Polynomial poly;
  std::vector<CriticalPointInfo> critical_points;  // empty when not classified
};

// h(x,y) = x^4 + x^2 y^2 + y^4 - 2x^2 - 2y^2 with its nine certified
// critical points (diagonal minima at a = sqrt(2/3), value -4/3).
ExampleFunction example_h();
// g_d = 1/2 sum x_i^2 + 1/3 sum x_i^3, critical set {0,-1}^d.
ExampleFunction example_gd(int d);
// h_d = sum_{i<j} x_i x_j + 1/3 sum x_i^3.
ExampleFunction example_hd(int d);
// 1/2 x^T A x for a symmetric rational matrix.
ExampleFunction example_quad(const std::vector<std::vector<Rat>>& a);
// sum_i (i x_i^2 / 2 + x_i^3 / 3): distinct Hessian eigenvalues, Property C.
ExampleFunction example_diag_cubic(int d);

ExampleFunction example_by_name(const std::string& name, int d);

}  // namespace symtan
