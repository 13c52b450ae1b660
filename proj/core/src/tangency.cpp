#include "symtan/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <random>

#include "symtan/parallel.hpp"

namespace symtan {

NumSymTensor::NumSymTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1 || dim < 1) throw std::invalid_argument("NumSymTensor: order, dim >= 1");
  std::int64_t n = 1;
  for (int i = 0; i < order; ++i) {
    n *= dim;
    if (n > (1 << 28)) throw std::invalid_argument("NumSymTensor: too large");
  }
  a_.assign(n, 0.0);
}

std::int64_t NumSymTensor::flat(const std::vector<int>& idx) const {
  std::int64_t f = 0;
  for (int i : idx) f = f * dim_ + i;
  return f;
}

double& NumSymTensor::at(const std::vector<int>& idx) { return a_[flat(idx)]; }
double NumSymTensor::at(const std::vector<int>& idx) const { return a_[flat(idx)]; }

double NumSymTensor::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

NumSymTensor NumSymTensor::from(const SymForm& a) {
  NumSymTensor out(a.order(), a.dim());
  for (const auto& [sorted_idx, v] : a.entries()) {
    double val = to_double(v);
    std::vector<int> idx = sorted_idx;
    do {
      out.a_[out.flat(idx)] = val;
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return out;
}

double NumSymTensor::apply_full(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v = apply_partial(x);
  return v.dot(x);
}

Eigen::VectorXd NumSymTensor::apply_partial(const Eigen::VectorXd& x) const {
  // Contract the last k-1 slots with x.
  std::int64_t n = static_cast<std::int64_t>(a_.size());
  std::vector<double> cur(a_.begin(), a_.end());
  std::int64_t len = n;
  for (int step = 0; step < order_ - 1; ++step) {
    len /= dim_;
    std::vector<double> next(len, 0.0);
    for (std::int64_t i = 0; i < len; ++i) {
      double acc = 0.0;
      const double* base = cur.data() + i * dim_;
      for (int j = 0; j < dim_; ++j) acc += base[j] * x[j];
      next[i] = acc;
    }
    cur.swap(next);
  }
  Eigen::VectorXd out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = cur[i];
  return out;
}

Eigen::MatrixXd NumSymTensor::apply_matrix(const Eigen::VectorXd& x) const {
  if (order_ < 2) throw std::invalid_argument("apply_matrix needs order >= 2");
  std::int64_t n = static_cast<std::int64_t>(a_.size());
  std::vector<double> cur(a_.begin(), a_.end());
  std::int64_t len = n;
  for (int step = 0; step < order_ - 2; ++step) {
    len /= dim_;
    std::vector<double> next(len, 0.0);
    for (std::int64_t i = 0; i < len; ++i) {
      double acc = 0.0;
      const double* base = cur.data() + i * dim_;
      for (int j = 0; j < dim_; ++j) acc += base[j] * x[j];
      next[i] = acc;
    }
    cur.swap(next);
  }
  Eigen::MatrixXd out(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) out(i, j) = cur[i * dim_ + j];
  }
  return out;
}

Eigen::VectorXd NumSymTensor::apply_partial_multi(const std::vector<Eigen::VectorXd>& xs) const {
  if (static_cast<int>(xs.size()) != order_ - 1) throw std::invalid_argument("apply_partial_multi arity");
  std::int64_t len = static_cast<std::int64_t>(a_.size());
  std::vector<double> cur(a_.begin(), a_.end());
  for (int step = 0; step < order_ - 1; ++step) {
    const Eigen::VectorXd& x = xs[order_ - 2 - step];  // contract last slot first
    len /= dim_;
    std::vector<double> next(len, 0.0);
    for (std::int64_t i = 0; i < len; ++i) {
      double acc = 0.0;
      const double* base = cur.data() + i * dim_;
      for (int j = 0; j < dim_; ++j) acc += base[j] * x[j];
      next[i] = acc;
    }
    cur.swap(next);
  }
  Eigen::VectorXd out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = cur[i];
  return out;
}

NumSymTensor NumSymTensor::restrict(const Eigen::MatrixXd& q) const {
  if (q.rows() != dim_) throw std::invalid_argument("restrict: basis rows must match dim");
  int m = static_cast<int>(q.cols());
  NumSymTensor out(order_, m);
  // Contract one slot at a time: cost O(k * dim^k * m).
  std::vector<double> cur(a_.begin(), a_.end());
  std::int64_t len = static_cast<std::int64_t>(cur.size());
  for (int step = 0; step < order_; ++step) {
    // cur has shape [m^step][dim^(order-step)]; contract the slot right after
    // the m-block, i.e. transform the leading dim-axis of the tail.
    std::int64_t head = 1;
    for (int i = 0; i < step; ++i) head *= m;
    std::int64_t tail = len / (head * dim_);
    std::vector<double> next(head * m * tail, 0.0);
    for (std::int64_t h = 0; h < head; ++h) {
      for (int mm = 0; mm < m; ++mm) {
        for (std::int64_t t = 0; t < tail; ++t) {
          double acc = 0.0;
          for (int dd = 0; dd < dim_; ++dd) {
            acc += cur[(h * dim_ + dd) * tail + t] * q(dd, mm);
          }
          next[(h * m + mm) * tail + t] = acc;
        }
      }
    }
    cur.swap(next);
    len = static_cast<std::int64_t>(cur.size());
  }
  out.a_ = cur;
  return out;
}

Eigen::MatrixXd NumSymTensor::unfolding() const {
  std::int64_t cols = static_cast<std::int64_t>(a_.size()) / dim_;
  Eigen::MatrixXd f(dim_, cols);
  for (int i = 0; i < dim_; ++i) {
    for (std::int64_t c = 0; c < cols; ++c) f(i, c) = a_[i * cols + c];
  }
  return f;
}

// ---------------------------------------------------------------------------

bool in_tangency_set(const TangencyProblem& tp, const Eigen::VectorXd& x, double tol) {
  if (x.size() != tp.center.size()) throw std::invalid_argument("in_tangency_set: dimension mismatch");
  int d = static_cast<int>(x.size());
  std::vector<double> xv(x.data(), x.data() + d);
  std::vector<double> gv = tp.f.gradient(xv);
  Eigen::Map<Eigen::VectorXd> g(gv.data(), d);
  Eigen::VectorXd r = x - tp.center;
  double scale = 1.0 + g.norm() * r.norm();
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      worst = std::max(worst, std::abs(g[i] * r[j] - g[j] * r[i]));
    }
  }
  return worst <= tol * scale;
}

Eigen::VectorXd ArcJet::gamma(double t) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(v.empty() ? 0 : v.front().size());
  double tp = t;
  for (const auto& vi : v) {
    x += tp * vi;
    tp *= t;
  }
  return x;
}

double ArcJet::eta_at(double t) const {
  double acc = 0.0, tp = 1.0;
  for (double e : eta) {
    acc += tp * e;
    tp *= t;
  }
  return acc;
}

namespace {

// Derivative-tensor ladder A_m = polar form of the degree-m homogeneous
// component of p at 0 (so m A_m x^{m-1} sums to grad p).
std::vector<NumSymTensor> homogeneous_forms(const Polynomial& p) {
  int deg = p.degree();
  std::vector<NumSymTensor> forms;  // index m-2 holds A_m
  for (int m = 2; m <= deg; ++m) {
    Polynomial hom = p.homogeneous_component(m);
    if (hom.is_zero()) {
      forms.emplace_back(m, p.nvars());
    } else {
      forms.push_back(NumSymTensor::from(polarize(hom)));
    }
  }
  return forms;
}

// Sum over ordered compositions (i_1,...,i_{m-1}), i_j in [1, maxpart],
// summing to k, of A_m(v_{i_1},...,v_{i_{m-1}}, .).
void add_composition_terms(const NumSymTensor& am, const std::vector<Eigen::VectorXd>& v, int k,
                           int maxpart, Eigen::VectorXd& acc, double coeff) {
  int slots = am.order() - 1;
  std::vector<Eigen::VectorXd> args(slots);
  std::function<void(int, int)> rec = [&](int slot, int remaining) {
    if (slot == slots) {
      if (remaining != 0) return;
      acc += coeff * am.apply_partial_multi(args);
      return;
    }
    int hi = std::min(maxpart, remaining - (slots - slot - 1));
    for (int part = 1; part <= hi; ++part) {
      args[slot] = v[part - 1];
      rec(slot + 1, remaining - part);
    }
  };
  rec(0, k);
}

// Coefficient of t^k in grad p(gamma(t)) - eta(t) gamma(t) for an arc with
// coefficients v_1..v_limit and eta^(0)..eta^(limit-1).
Eigen::VectorXd tangency_equation_lhs(const std::vector<NumSymTensor>& forms,
                                      const std::vector<Eigen::VectorXd>& v,
                                      const std::vector<double>& eta, int k) {
  int d = static_cast<int>(v.front().size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  int vmax = static_cast<int>(v.size());
  for (size_t fi = 0; fi < forms.size(); ++fi) {
    int m = static_cast<int>(fi) + 2;
    if (k < m - 1) continue;  // each slot carries at least t^1
    add_composition_terms(forms[fi], v, k, vmax, acc, static_cast<double>(m));
  }
  for (int a = 0; a < static_cast<int>(eta.size()); ++a) {
    int b = k - a;
    if (b >= 1 && b <= vmax) acc -= eta[a] * v[b - 1];
  }
  return acc;
}

}  // namespace

Eigen::VectorXd tangency_residual(const Polynomial& p, const ArcJet& arc, int k) {
  if (k < 1 || k > arc.order) throw std::invalid_argument("tangency_residual: k exceeds arc order");
  std::vector<NumSymTensor> forms = homogeneous_forms(p);
  return tangency_equation_lhs(forms, arc.v, arc.eta, k);
}

TensorEigResult tensor_eigenpairs(const NumSymTensor& a, const TensorEigOptions& opts) {
  int k = a.order();
  int m = a.dim();
  TensorEigResult res;
  if (k == 2) {
    Eigen::MatrixXd mat(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) mat(i, j) = 2.0 * a.at({i, j});
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
    for (int i = 0; i < m; ++i) {
      res.pairs.push_back({es.eigenvalues()[i], es.eigenvectors().col(i), 2});
    }
    res.stabilized = true;
    res.count_bound = m;
    return res;
  }
  res.count_bound = 1;
  {
    long long p = 1;
    for (int i = 0; i < m; ++i) p *= (k - 1);
    res.count_bound = (p - 1) / (k - 2);
  }

  long long starts = static_cast<long long>(opts.starts_per_dim_factor);
  for (int i = 0; i < m; ++i) starts *= 3;
  starts = std::min<long long>(starts, opts.max_starts);

  struct Hit {
    Eigen::VectorXd x;
    double eta;
    long long start_index;
  };
  std::vector<std::optional<Hit>> hits(starts);

  double scale = std::max(a.max_abs(), 1e-300);

  parallel_for(starts, [&](std::int64_t s) {
    std::mt19937_64 rng(mix_seed(opts.seed, static_cast<std::uint64_t>(s)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x[i] = gauss(rng);
    double n = x.norm();
    if (n == 0) return;
    x /= n;
    double eta = k * a.apply_full(x);
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      Eigen::VectorXd fx = k * a.apply_partial(x) - eta * x;
      double g = 0.5 * (x.squaredNorm() - 1.0);
      double rnorm = std::sqrt(fx.squaredNorm() + g * g);
      if (rnorm < opts.residual_tol * scale) {
        Eigen::VectorXd xe = x / x.norm();
        hits[s] = Hit{xe, k * a.apply_full(xe), s};
        return;
      }
      Eigen::MatrixXd jac(m + 1, m + 1);
      jac.topLeftCorner(m, m) = k * (k - 1) * a.apply_matrix(x) - eta * Eigen::MatrixXd::Identity(m, m);
      jac.topRightCorner(m, 1) = -x;
      jac.bottomLeftCorner(1, m) = x.transpose();
      jac(m, m) = 0.0;
      Eigen::VectorXd rhs(m + 1);
      rhs.head(m) = -fx;
      rhs[m] = -g;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
      if (!lu.isInvertible()) return;
      Eigen::VectorXd step = lu.solve(rhs);
      x += step.head(m);
      eta += step[m];
      if (!x.allFinite() || !std::isfinite(eta)) return;
    }
  });

  // Deterministic dedupe by line, in start order.
  res.stabilized = true;
  long long last_new = -1;
  for (long long s = 0; s < starts; ++s) {
    if (!hits[s]) continue;
    const Hit& h = *hits[s];
    bool known = false;
    for (const auto& p : res.pairs) {
      double c = std::abs(p.x.dot(h.x));
      if (c > std::cos(opts.dedupe_angle)) {
        known = true;
        break;
      }
    }
    if (!known) {
      // Canonical sign: first nonzero coordinate positive.
      Eigen::VectorXd x = h.x;
      double eta = h.eta;
      for (int i = 0; i < m; ++i) {
        if (std::abs(x[i]) > 1e-12) {
          if (x[i] < 0) {
            x = -x;
            eta = (k % 2 == 1) ? -eta : eta;
          }
          break;
        }
      }
      res.pairs.push_back({eta, x, k});
      last_new = s;
    }
  }
  if (last_new >= starts / 2) res.stabilized = false;
  if (static_cast<long long>(res.pairs.size()) > res.count_bound) {
    // More lines than the algebraic bound: dedupe failed to stabilize.
    res.stabilized = false;
  }
  return res;
}

HessianEigenspaces hessian_eigenspaces(const Polynomial& p, double group_tol) {
  int d = p.nvars();
  Polynomial quad = p.homogeneous_component(2);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(d, d);
  if (!quad.is_zero()) {
    NumSymTensor a2 = NumSymTensor::from(polarize(quad));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) hess(i, j) = 2.0 * a2.at({i, j});
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  HessianEigenspaces out;
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int i = 0;
  while (i < d) {
    int j = i;
    while (j + 1 < d && std::abs(es.eigenvalues()[j + 1] - es.eigenvalues()[i]) < group_tol * scale) ++j;
    out.eigenvalues.push_back(es.eigenvalues().segment(i, j - i + 1).mean());
    out.bases.push_back(es.eigenvectors().middleCols(i, j - i + 1));
    i = j + 1;
  }
  return out;
}

std::vector<ArcJet> seed_arc(const Polynomial& p, double eta0, const Eigen::MatrixXd& q,
                             const TensorEigOptions& opts) {
  int d = p.nvars();
  int m = static_cast<int>(q.cols());
  if (q.rows() != d) throw std::invalid_argument("seed_arc: basis dimension mismatch");
  if (p.degree() < 3) throw std::invalid_argument("seed_arc: deg p >= 3 required");

  std::vector<NumSymTensor> forms = homogeneous_forms(p);
  const NumSymTensor& a3 = forms[1];

  // Complement basis R from the Hessian eigendecomposition.
  HessianEigenspaces spaces = hessian_eigenspaces(p);
  Eigen::MatrixXd r(d, d - m);
  Eigen::VectorXd rvals(d - m);
  {
    int col = 0;
    for (size_t s = 0; s < spaces.bases.size(); ++s) {
      if (std::abs(spaces.eigenvalues[s] - eta0) < 1e-7 * std::max(1.0, std::abs(eta0))) continue;
      for (int c = 0; c < spaces.bases[s].cols(); ++c) {
        if (col >= d - m) throw std::invalid_argument("seed_arc: Q does not span the full eigenspace");
        r.col(col) = spaces.bases[s].col(c);
        rvals[col] = spaces.eigenvalues[s];
        ++col;
      }
    }
    if (col != d - m) throw std::invalid_argument("seed_arc: Q does not match the eta0 eigenspace");
  }

  NumSymTensor a3q = a3.restrict(q);
  if (a3q.max_abs() < 1e-14 * std::max(1.0, a3.max_abs())) {
    throw SeedError(SeedError::Kind::degenerate,
                    "cubic form vanishes on the eigenspace (degenerate seed)");
  }
  TensorEigResult eig = tensor_eigenpairs(a3q, opts);
  if (eig.pairs.empty()) {
    throw SeedError(SeedError::Kind::no_real_seed, "restricted tensor eigenproblem has no real solution found");
  }

  double reg_scale = std::max(1.0, 6.0 * a3q.max_abs());
  std::vector<ArcJet> arcs;
  for (const EigenPair& pr : eig.pairs) {
    for (int sign : {+1, -1}) {
      Eigen::VectorXd alpha0 = sign * pr.x;
      double eta1 = (sign > 0 || a3q.order() % 2 == 0) ? pr.eta : -pr.eta;
      // Nondegeneracy: x -> 6 A3(Q alpha0, Q x) - eta1 x invertible on the eigenspace.
      Eigen::MatrixXd lin = 6.0 * a3q.apply_matrix(alpha0) - eta1 * Eigen::MatrixXd::Identity(m, m);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin);
      double smin = svd.singularValues()[m - 1];
      if (smin < 1e-8 * reg_scale) {
        throw SeedError(SeedError::Kind::degenerate,
                        "singular seed linearization (Property C failure at this eigenvalue)");
      }
      Eigen::VectorXd v1 = q * alpha0;
      // beta(0) = -3 (R^T (2A_2 - eta0 I) R)^{-1} R^T A_3 v1^2
      Eigen::VectorXd rhs = r.transpose() * a3.apply_partial(v1);
      Eigen::VectorXd beta0(d - m);
      for (int i = 0; i < d - m; ++i) beta0[i] = -3.0 * rhs[i] / (rvals[i] - eta0);
      ArcJet arc;
      arc.order = 2;
      arc.v = {v1, r * beta0};
      arc.eta = {eta0, eta1};
      arcs.push_back(std::move(arc));
    }
  }
  return arcs;
}

ArcJet extend_arc(const Polynomial& p, const ArcJet& arc, int K) {
  if (K <= arc.order) return arc;
  int d = p.nvars();
  std::vector<NumSymTensor> forms = homogeneous_forms(p);
  const NumSymTensor& a3 = forms.size() > 1 ? forms[1] : forms[0];
  if (forms.size() < 2) throw ExtensionError("extend_arc: deg p >= 3 required");

  double eta0 = arc.eta[0];
  const Eigen::VectorXd v1 = arc.v[0];

  HessianEigenspaces spaces = hessian_eigenspaces(p);
  int which = -1;
  for (size_t s = 0; s < spaces.bases.size(); ++s) {
    if (std::abs(spaces.eigenvalues[s] - eta0) < 1e-6 * std::max(1.0, std::abs(eta0))) which = static_cast<int>(s);
  }
  if (which < 0) throw ExtensionError("extend_arc: eta^(0) is not a Hessian eigenvalue");
  Eigen::MatrixXd q = spaces.bases[which];
  int m = static_cast<int>(q.cols());
  Eigen::MatrixXd r(d, d - m);
  {
    int col = 0;
    for (size_t s = 0; s < spaces.bases.size(); ++s) {
      if (static_cast<int>(s) == which) continue;
      for (int c = 0; c < spaces.bases[s].cols(); ++c) r.col(col++) = spaces.bases[s].col(c);
    }
  }
  // Directions in the eigenspace orthogonal to v_1 (free components of the
  // previous coefficient, Lyapunov-Schmidt style).
  Eigen::MatrixXd qp(d, m - 1);
  {
    Eigen::VectorXd alpha0 = q.transpose() * v1;
    Eigen::MatrixXd basis(m, m);
    basis.col(0) = alpha0.normalized();
    int col = 1;
    for (int i = 0; i < m && col < m; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(m, i);
      for (int j = 0; j < col; ++j) e -= basis.col(j).dot(e) * basis.col(j);
      if (e.norm() > 1e-8) basis.col(col++) = e.normalized();
    }
    if (col != m) throw ExtensionError("extend_arc: failed to complete eigenspace basis");
    qp = q * basis.rightCols(m - 1);
  }

  ArcJet out = arc;
  Eigen::MatrixXd hess(d, d);
  {
    NumSymTensor a2 = forms[0];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) hess(i, j) = 2.0 * a2.at({i, j});
    }
  }

  for (int k = out.order + 1; k <= K; ++k) {
    out.v.push_back(Eigen::VectorXd::Zero(d));
    out.eta.push_back(0.0);
    Eigen::VectorXd known = tangency_equation_lhs(forms, out.v, out.eta, k);

    // Unknowns: [qp-part of v_{k-1} | r-part of v_k | eta^(k-1)].
    int nq = (k >= 3) ? m - 1 : 0;
    int cols = nq + (d - m) + 1;
    Eigen::MatrixXd sys(d, cols);
    for (int c = 0; c < nq; ++c) {
      Eigen::VectorXd dir = qp.col(c);
      sys.col(c) = 6.0 * a3.apply_partial_multi({v1, dir}) - out.eta[1] * dir;
    }
    for (int c = 0; c < d - m; ++c) {
      sys.col(nq + c) = hess * r.col(c) - eta0 * r.col(c);
    }
    sys.col(cols - 1) = -v1;

    Eigen::MatrixXd a = sys;
    Eigen::VectorXd b = -known;
    if (nq == 0) {
      // Square after dropping nothing: d x (d - m + 1); for m = 1 it is d x d.
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < cols) throw ExtensionError("extend_arc: bordered system is rank-deficient");
      Eigen::VectorXd sol = lu.solve(b);
      if ((a * sol - b).norm() > 1e-8 * (1.0 + b.norm())) {
        throw ExtensionError("extend_arc: bordered system is inconsistent");
      }
      out.v[k - 1] = r * sol.segment(0, d - m);
      out.eta[k - 1] = sol[cols - 1];
    } else {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < cols) throw ExtensionError("extend_arc: bordered system is rank-deficient");
      Eigen::VectorXd sol = lu.solve(b);
      if ((a * sol - b).norm() > 1e-8 * (1.0 + b.norm())) {
        throw ExtensionError("extend_arc: bordered system is inconsistent");
      }
      out.v[k - 2] += qp * sol.segment(0, nq);
      out.v[k - 1] = r * sol.segment(nq, d - m);
      out.eta[k - 1] = sol[cols - 1];
    }
  }
  out.order = K;
  return out;
}

std::vector<ArcJet> all_arcs(const Polynomial& p, int order, const TensorEigOptions& opts) {
  HessianEigenspaces spaces = hessian_eigenspaces(p);
  std::vector<ArcJet> arcs;
  for (size_t s = 0; s < spaces.bases.size(); ++s) {
    std::vector<ArcJet> seeds = seed_arc(p, spaces.eigenvalues[s], spaces.bases[s], opts);
    for (ArcJet& a : seeds) arcs.push_back(extend_arc(p, a, order));
  }
  return arcs;
}

PropertyCReport check_property_c(const Polynomial& p, const TensorEigOptions& opts) {
  if (p.degree() < 3) throw std::invalid_argument("check_property_c: deg p >= 3 required");
  std::vector<NumSymTensor> forms = homogeneous_forms(p);
  const NumSymTensor& a3 = forms[1];
  HessianEigenspaces spaces = hessian_eigenspaces(p);
  PropertyCReport rep;
  rep.overall = PropCStatus::pass;
  for (size_t s = 0; s < spaces.bases.size(); ++s) {
    PropertyCReport::PerEigenvalue pe;
    pe.eta0 = spaces.eigenvalues[s];
    int m = static_cast<int>(spaces.bases[s].cols());
    pe.eigenspace_dim = m;
    NumSymTensor a3q = a3.restrict(spaces.bases[s]);
    double ascale = std::max(1.0, 6.0 * a3q.max_abs());
    if (a3q.max_abs() < 1e-13 * std::max(1.0, a3.max_abs())) {
      // Zero cubic form: every unit vector solves with eta = 0 and singular
      // linearization.
      pe.status = PropCStatus::fail;
      pe.min_regularity = 0.0;
      rep.eigenvalues.push_back(pe);
      rep.overall = PropCStatus::fail;
      continue;
    }
    TensorEigResult eig = tensor_eigenpairs(a3q, opts);
    pe.pairs_found = static_cast<int>(eig.pairs.size());
    if (!eig.stabilized) {
      pe.status = PropCStatus::inconclusive;
      if (rep.overall == PropCStatus::pass) rep.overall = PropCStatus::inconclusive;
      rep.eigenvalues.push_back(pe);
      continue;
    }
    double worst = std::numeric_limits<double>::infinity();
    for (const EigenPair& pr : eig.pairs) {
      Eigen::MatrixXd lin = 6.0 * a3q.apply_matrix(pr.x) - pr.eta * Eigen::MatrixXd::Identity(m, m);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin);
      worst = std::min(worst, svd.singularValues()[m - 1]);
    }
    pe.min_regularity = worst;
    pe.status = (worst > 1e-8 * ascale) ? PropCStatus::pass : PropCStatus::fail;
    if (pe.status == PropCStatus::fail) rep.overall = PropCStatus::fail;
    rep.eigenvalues.push_back(pe);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Marching squares

namespace {

// Edge id: (ix, iy) of the edge's lower-left node, orient 0 = horizontal.
long long edge_id(int ix, int iy, int orient, int n) {
  return (static_cast<long long>(iy) * (n + 1) + ix) * 2 + orient;
}

}  // namespace

TraceResult trace_2d(const TangencyProblem& tp, const BBox& box, int grid_n) {
  if (tp.f.nvars() != 2) throw std::invalid_argument("trace_2d: two variables required");
  int n = grid_n;
  if (n < 2) throw std::invalid_argument("trace_2d: grid too small");
  double hx = (box.xmax - box.xmin) / n;
  double hy = (box.ymax - box.ymin) / n;

  Polynomial d1 = tp.f.partial(0);
  Polynomial d2 = tp.f.partial(1);
  double cx = tp.center[0], cy = tp.center[1];
  auto tval = [&](double x, double y) {
    std::vector<double> pt{x, y};
    return d1.eval(pt) * (y - cy) - d2.eval(pt) * (x - cx);
  };

  std::vector<double> grid((n + 1) * (n + 1));
  for (int iy = 0; iy <= n; ++iy) {
    for (int ix = 0; ix <= n; ++ix) {
      grid[iy * (n + 1) + ix] = tval(box.xmin + ix * hx, box.ymin + iy * hy);
    }
  }

  struct Seg {
    long long e0, e1;
    Eigen::Vector2d p0, p1;
  };
  std::vector<Seg> segs;
  TraceResult out;

  auto interp = [&](double x0, double y0, double x1, double y1, double f0, double f1) {
    double t = (f0 == f1) ? 0.5 : f0 / (f0 - f1);
    t = std::clamp(t, 0.0, 1.0);
    return Eigen::Vector2d(x0 + t * (x1 - x0), y0 + t * (y1 - y0));
  };

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      double x0 = box.xmin + ix * hx, x1 = x0 + hx;
      double y0 = box.ymin + iy * hy, y1 = y0 + hy;
      double f00 = grid[iy * (n + 1) + ix];
      double f10 = grid[iy * (n + 1) + ix + 1];
      double f01 = grid[(iy + 1) * (n + 1) + ix];
      double f11 = grid[(iy + 1) * (n + 1) + ix + 1];
      int cfg = (f00 > 0 ? 1 : 0) | (f10 > 0 ? 2 : 0) | (f01 > 0 ? 4 : 0) | (f11 > 0 ? 8 : 0);
      if (cfg == 0 || cfg == 15) continue;
      if (f00 == 0 || f10 == 0 || f01 == 0 || f11 == 0) out.degenerate_cells++;

      // Edge vertices (bottom, top, left, right) where sign changes.
      long long eb = edge_id(ix, iy, 0, n), et = edge_id(ix, iy + 1, 0, n);
      long long el = edge_id(ix, iy, 1, n), er = edge_id(ix + 1, iy, 1, n);
      Eigen::Vector2d pb = interp(x0, y0, x1, y0, f00, f10);
      Eigen::Vector2d pt = interp(x0, y1, x1, y1, f01, f11);
      Eigen::Vector2d pl = interp(x0, y0, x0, y1, f00, f01);
      Eigen::Vector2d pr = interp(x1, y0, x1, y1, f10, f11);

      auto add = [&](long long ea, const Eigen::Vector2d& pa, long long ebb, const Eigen::Vector2d& pbb) {
        segs.push_back({ea, ebb, pa, pbb});
      };

      switch (cfg) {
        case 1: case 14: add(el, pl, eb, pb); break;
        case 2: case 13: add(eb, pb, er, pr); break;
        case 3: case 12: add(el, pl, er, pr); break;
        case 4: case 11: add(el, pl, et, pt); break;
        case 5: case 10: add(eb, pb, et, pt); break;
        case 6: case 9: {
          // Saddle: resolve with the center value. If the center is on the
          // f00 side, the f00 corner connects through the middle and the
          // contour hugs the other two corners.
          double fc = tval(0.5 * (x0 + x1), 0.5 * (y0 + y1));
          bool center_pos = fc > 0;
          bool corner00_pos = f00 > 0;
          if (center_pos == corner00_pos) {
            add(eb, pb, er, pr);
            add(el, pl, et, pt);
          } else {
            add(el, pl, eb, pb);
            add(et, pt, er, pr);
          }
          out.degenerate_cells++;
          break;
        }
        case 7: case 8: add(et, pt, er, pr); break;
        default: break;
      }
    }
  }

  // Chain segments into polylines through shared edge ids. Deterministic:
  // seeds are taken in creation order and each side is extended greedily.
  std::multimap<long long, size_t> by_edge;
  for (size_t i = 0; i < segs.size(); ++i) {
    by_edge.emplace(segs[i].e0, i);
    by_edge.emplace(segs[i].e1, i);
  }
  std::vector<bool> used(segs.size(), false);
  auto take_at = [&](long long edge) -> size_t {
    auto range = by_edge.equal_range(edge);
    for (auto it = range.first; it != range.second; ++it) {
      if (!used[it->second]) return it->second;
    }
    return SIZE_MAX;
  };
  for (size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    used[start] = true;
    std::deque<Eigen::Vector2d> pts{segs[start].p0, segs[start].p1};
    long long front_edge = segs[start].e0;
    long long back_edge = segs[start].e1;
    for (;;) {
      size_t nxt = take_at(back_edge);
      if (nxt == SIZE_MAX) break;
      used[nxt] = true;
      if (segs[nxt].e0 == back_edge) {
        pts.push_back(segs[nxt].p1);
        back_edge = segs[nxt].e1;
      } else {
        pts.push_back(segs[nxt].p0);
        back_edge = segs[nxt].e0;
      }
    }
    for (;;) {
      size_t nxt = take_at(front_edge);
      if (nxt == SIZE_MAX) break;
      used[nxt] = true;
      if (segs[nxt].e0 == front_edge) {
        pts.push_front(segs[nxt].p1);
        front_edge = segs[nxt].e1;
      } else {
        pts.push_front(segs[nxt].p0);
        front_edge = segs[nxt].e0;
      }
    }
    Polyline pl;
    pl.pts.assign(pts.begin(), pts.end());
    out.polylines.push_back(std::move(pl));
  }
  return out;
}

std::vector<double> arc_residual_samples(const Polynomial& p, const ArcJet& arc,
                                         const std::vector<double>& ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    Eigen::VectorXd x = arc.gamma(t);
    std::vector<double> xv(x.data(), x.data() + x.size());
    std::vector<double> gv = p.gradient(xv);
    Eigen::Map<Eigen::VectorXd> g(gv.data(), x.size());
    out.push_back((g - arc.eta_at(t) * x).norm());
  }
  return out;
}

double log_log_slope(const std::vector<double>& ts, const std::vector<double>& rs,
                     double zero_floor) {
  bool all_zero = true;
  for (double r : rs) {
    if (r > zero_floor) all_zero = false;
  }
  if (all_zero) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (rs[i] <= 0) continue;
    double x = std::log(ts[i]);
    double y = std::log(std::max(rs[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace symtan
