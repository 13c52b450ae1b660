#include "symtan/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "symtan/isotypic.hpp"
#include "symtan/parallel.hpp"

namespace symtan {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCollinearEps = 1e-12;

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

struct Angle {
  double a, b, u, c, s, theta;
  Eigen::VectorXd wh, vh;
};

Angle angle_of(const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  Angle g;
  g.a = w.norm();
  g.b = v.norm();
  if (g.a == 0.0 || g.b == 0.0) throw std::invalid_argument("angle kernel: zero vector input");
  g.u = w.dot(v);
  g.c = std::clamp(g.u / (g.a * g.b), -1.0, 1.0);
  g.theta = std::acos(g.c);
  g.s = std::sin(g.theta);
  g.wh = w / g.a;
  g.vh = v / g.b;
  return g;
}

}  // namespace

KernelSpec KernelSpec::relu() { return KernelSpec{Kind::relu_gauss, 1, 1, nullptr, nullptr}; }
KernelSpec KernelSpec::cubic() { return KernelSpec{Kind::cubic_activation, 1, 1, nullptr, nullptr}; }
KernelSpec KernelSpec::power(int n) {
  if (n < 1) throw std::invalid_argument("power kernel: n >= 1");
  return KernelSpec{Kind::power, n, 1, nullptr, nullptr};
}
KernelSpec KernelSpec::geometric(std::function<double(double)> j, std::function<double(double)> dj, int k) {
  if (!j) throw std::invalid_argument("geometric kernel: J required");
  return KernelSpec{Kind::geometric, 1, k, std::move(j), std::move(dj)};
}

double KernelSpec::value(const Eigen::VectorXd& w, const Eigen::VectorXd& v) const {
  switch (kind) {
    case Kind::relu_gauss: {
      Angle g = angle_of(w, v);
      return (g.a * g.b / (2.0 * kPi)) * (g.s + (kPi - g.theta) * g.c);
    }
    case Kind::cubic_activation: {
      double u = w.dot(v);
      return 6.0 * u * u * u + 9.0 * w.squaredNorm() * v.squaredNorm() * u;
    }
    case Kind::power:
      return ipow(w.dot(v), power_n);
    case Kind::geometric: {
      Angle g = angle_of(w, v);
      return ipow(g.a * g.b, geo_k) * J(g.c);
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd KernelSpec::grad_w(const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                                   bool* collinear_warning) const {
  switch (kind) {
    case Kind::relu_gauss: {
      Angle g = angle_of(w, v);
      if (collinear_warning && 1.0 - std::abs(g.c) < kCollinearEps) *collinear_warning = true;
      return (1.0 / (2.0 * kPi)) * ((g.b * g.s / g.a) * w + (kPi - g.theta) * v);
    }
    case Kind::cubic_activation: {
      double u = w.dot(v);
      double p = w.squaredNorm(), q = v.squaredNorm();
      return 18.0 * u * u * v + 18.0 * q * u * w + 9.0 * p * q * v;
    }
    case Kind::power: {
      double u = w.dot(v);
      if (power_n == 1) return v;
      return power_n * ipow(u, power_n - 1) * v;
    }
    case Kind::geometric: {
      Angle g = angle_of(w, v);
      if (collinear_warning && 1.0 - std::abs(g.c) < kCollinearEps) *collinear_warning = true;
      if (!dJ) throw std::invalid_argument("geometric kernel: J' required for gradients");
      double scale = ipow(g.a * g.b, geo_k);
      Eigen::VectorXd dc = (g.vh - g.c * g.wh) / g.a;
      return geo_k * ipow(g.a, geo_k - 1) * ipow(g.b, geo_k) * J(g.c) * g.wh + scale * dJ(g.c) * dc;
    }
  }
  throw std::logic_error("unreachable");
}

void KernelSpec::second_blocks(const Eigen::VectorXd& w, const Eigen::VectorXd& v,
                               Eigen::MatrixXd& h_ww, Eigen::MatrixXd& h_wv,
                               bool allow_collinear_limit) const {
  int d = static_cast<int>(w.size());
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  switch (kind) {
    case Kind::relu_gauss: {
      Angle g = angle_of(w, v);
      bool collinear = 1.0 - std::abs(g.c) < kCollinearEps;
      if (collinear && !allow_collinear_limit) {
        throw CollinearRowsError("ReLU kernel Hessian at collinear rows");
      }
      // u_hat: unit vector completing w_hat in span{w, v}. All terms carry a
      // factor of s, so dropping u_hat in the collinear limit is exact.
      Eigen::VectorXd uh = Eigen::VectorXd::Zero(d);
      if (g.s > 1e-14) uh = (g.vh - g.c * g.wh) / g.s;
      Eigen::MatrixXd wwt = g.wh * g.wh.transpose();
      Eigen::MatrixXd uut = uh * uh.transpose();
      Eigen::MatrixXd wut = g.wh * uh.transpose();
      h_ww = (g.s * g.b / (2.0 * kPi * g.a)) * (eye - wwt + uut);
      h_wv = (1.0 / (2.0 * kPi)) *
             ((kPi - g.theta) * eye + g.c * g.s * (wwt - uut) + g.s * g.s * (wut + wut.transpose()));
      return;
    }
    case Kind::cubic_activation: {
      double u = w.dot(v);
      double p = w.squaredNorm(), q = v.squaredNorm();
      h_ww = 36.0 * u * v * v.transpose() + 18.0 * q * (w * v.transpose() + v * w.transpose()) +
             18.0 * q * u * eye;
      h_wv = 18.0 * u * u * eye + 36.0 * u * (v * w.transpose() + w * v.transpose()) +
             18.0 * q * w * w.transpose() + 18.0 * p * v * v.transpose() + 9.0 * p * q * eye;
      return;
    }
    case Kind::power: {
      double u = w.dot(v);
      int n = power_n;
      double un1 = n >= 1 ? ipow(u, n - 1) : 0.0;
      double un2 = n >= 2 ? ipow(u, n - 2) : 0.0;
      h_ww = n * (n - 1) * un2 * v * v.transpose();
      h_wv = n * un1 * eye + n * (n - 1) * un2 * v * w.transpose();
      return;
    }
    case Kind::geometric: {
      // Central differences on the analytic gradient (step 1e-5).
      const double h = 1e-5;
      h_ww.resize(d, d);
      h_wv.resize(d, d);
      for (int j = 0; j < d; ++j) {
        Eigen::VectorXd wp = w, wm = w, vp = v, vm = v;
        wp[j] += h;
        wm[j] -= h;
        vp[j] += h;
        vm[j] -= h;
        h_ww.col(j) = (grad_w(wp, v) - grad_w(wm, v)) / (2.0 * h);
        h_wv.col(j) = (grad_w(w, vp) - grad_w(w, vm)) / (2.0 * h);
      }
      h_ww = 0.5 * (h_ww + h_ww.transpose()).eval();
      return;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// KernelLoss

int KernelLoss::param_count(int k_rows) const {
  return k_rows * d() + (second_layer_trainable ? k_rows : 0);
}

double KernelLoss::value(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha) const {
  int k = static_cast<int>(w.rows());
  int h = static_cast<int>(targets.rows());
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) acc += alpha[i] * alpha[j] * kernel.value(w.row(i), w.row(j));
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < h; ++j) acc -= 2.0 * alpha[i] * beta[j] * kernel.value(w.row(i), targets.row(j));
  }
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < h; ++j) acc += beta[i] * beta[j] * kernel.value(targets.row(i), targets.row(j));
  }
  return 0.5 * acc;
}

Eigen::VectorXd KernelLoss::gradient(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha) const {
  int k = static_cast<int>(w.rows());
  int h = static_cast<int>(targets.rows());
  int dd = d();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(param_count(k));
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd gi = Eigen::VectorXd::Zero(dd);
    for (int l = 0; l < k; ++l) gi += alpha[l] * kernel.grad_w(w.row(i), w.row(l));
    for (int m = 0; m < h; ++m) gi -= beta[m] * kernel.grad_w(w.row(i), targets.row(m));
    g.segment(i * dd, dd) = alpha[i] * gi;
  }
  if (second_layer_trainable) {
    for (int i = 0; i < k; ++i) {
      double gi = 0.0;
      for (int l = 0; l < k; ++l) gi += alpha[l] * kernel.value(w.row(i), w.row(l));
      for (int m = 0; m < h; ++m) gi -= beta[m] * kernel.value(w.row(i), targets.row(m));
      g[k * dd + i] = gi;
    }
  }
  return g;
}

Eigen::MatrixXd KernelLoss::hessian(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha,
                                    bool allow_collinear_limit) const {
  int k = static_cast<int>(w.rows());
  int h = static_cast<int>(targets.rows());
  int dd = d();
  int n = param_count(k);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd h_ww(dd, dd), h_wv(dd, dd);

  for (int i = 0; i < k; ++i) {
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(dd, dd);
    // self pair (l = i): full second derivative of w -> kappa(w, w)
    kernel.second_blocks(w.row(i), w.row(i), h_ww, h_wv, true);
    diag += alpha[i] * alpha[i] * (h_ww + 0.5 * (h_wv + h_wv.transpose()));
    for (int l = 0; l < k; ++l) {
      if (l == i) continue;
      kernel.second_blocks(w.row(i), w.row(l), h_ww, h_wv, allow_collinear_limit);
      diag += alpha[i] * alpha[l] * h_ww;
      hess.block(i * dd, l * dd, dd, dd) = alpha[i] * alpha[l] * h_wv;
    }
    for (int m = 0; m < h; ++m) {
      kernel.second_blocks(w.row(i), targets.row(m), h_ww, h_wv, allow_collinear_limit);
      diag -= alpha[i] * beta[m] * h_ww;
    }
    hess.block(i * dd, i * dd, dd, dd) = diag;
  }
  if (second_layer_trainable) {
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd bracket = Eigen::VectorXd::Zero(dd);
      for (int l = 0; l < k; ++l) bracket += alpha[l] * kernel.grad_w(w.row(i), w.row(l));
      for (int m = 0; m < h; ++m) bracket -= beta[m] * kernel.grad_w(w.row(i), targets.row(m));
      for (int j = 0; j < k; ++j) {
        Eigen::VectorXd blk = alpha[i] * kernel.grad_w(w.row(i), w.row(j));
        if (j == i) blk += bracket;
        hess.block(i * dd, k * dd + j, dd, 1) = blk;
        hess.block(k * dd + j, i * dd, 1, dd) = blk.transpose();
      }
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        hess(k * dd + i, k * dd + j) = kernel.value(w.row(i), w.row(j));
      }
    }
  }
  return hess;
}

// ---------------------------------------------------------------------------
// Fixed-point charts

std::string subgroup_name(Subgroup h, int d) {
  std::ostringstream os;
  switch (h) {
    case Subgroup::delta_sd: os << "Delta(S_" << d << ")"; break;
    case Subgroup::delta_sdm1_s1: os << "Delta(S_" << d - 1 << " x S_1)"; break;
    case Subgroup::delta_sdm2_s1s1: os << "Delta(S_" << d - 2 << " x S_1^2)"; break;
    case Subgroup::delta_sdm2_s2: os << "Delta(S_" << d - 2 << " x S_2)"; break;
    case Subgroup::delta_sdm3_s3: os << "Delta(S_" << d - 3 << " x S_3)"; break;
  }
  return os.str();
}

std::optional<Subgroup> parse_subgroup(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(std::tolower(c));
  }
  if (t == "s_d" || t == "sd" || t == "delta_sd" || t == "deltas_d") return Subgroup::delta_sd;
  if (t == "s_{d-1}xs_1" || t == "s_{d-1}xs1" || t == "sd-1xs1" || t == "s_{d-1}x s_1")
    return Subgroup::delta_sdm1_s1;
  if (t == "s_{d-2}xs_1^2" || t == "s_{d-2}xs1^2" || t == "sd-2xs1^2") return Subgroup::delta_sdm2_s1s1;
  if (t == "s_{d-2}xs_2" || t == "s_{d-2}xs2" || t == "sd-2xs2") return Subgroup::delta_sdm2_s2;
  if (t == "s_{d-3}xs_3" || t == "s_{d-3}xs3" || t == "sd-3xs3") return Subgroup::delta_sdm3_s3;
  return std::nullopt;
}

namespace {

std::vector<std::vector<int>> subgroup_generators(Subgroup h, int d) {
  auto identity = [&]() {
    std::vector<int> g(d);
    std::iota(g.begin(), g.end(), 0);
    return g;
  };
  auto transposition = [&](int i, int j) {
    auto g = identity();
    std::swap(g[i], g[j]);
    return g;
  };
  auto cycle = [&](int lo, int hi) {  // lo..hi inclusive, 0-based
    auto g = identity();
    for (int i = lo; i < hi; ++i) g[i] = i + 1;
    g[hi] = lo;
    return g;
  };
  std::vector<std::vector<int>> gens;
  auto add_block = [&](int lo, int hi) {
    if (hi > lo) {
      gens.push_back(transposition(lo, lo + 1));
      if (hi - lo >= 2) gens.push_back(cycle(lo, hi));
    }
  };
  switch (h) {
    case Subgroup::delta_sd: add_block(0, d - 1); break;
    case Subgroup::delta_sdm1_s1: add_block(0, d - 2); break;
    case Subgroup::delta_sdm2_s1s1: add_block(0, d - 3); break;
    case Subgroup::delta_sdm2_s2:
      add_block(0, d - 3);
      add_block(d - 2, d - 1);
      break;
    case Subgroup::delta_sdm3_s3:
      add_block(0, d - 4);
      add_block(d - 3, d - 1);
      break;
  }
  return gens;
}

// Orbit cells of H acting on matrix positions (i,j) and on the alpha index
// set, described by block membership.
std::vector<std::vector<int>> chart_cells(Subgroup h, int d, bool with_alpha) {
  // block id per letter: contiguous blocks [0 .. split) and singletons/tail.
  std::vector<int> block(d, 0);
  int nblocks = 1;
  switch (h) {
    case Subgroup::delta_sd:
      break;
    case Subgroup::delta_sdm1_s1:
      block[d - 1] = 1;
      nblocks = 2;
      break;
    case Subgroup::delta_sdm2_s1s1:
      block[d - 2] = 1;
      block[d - 1] = 2;
      nblocks = 3;
      break;
    case Subgroup::delta_sdm2_s2:
      block[d - 2] = block[d - 1] = 1;
      nblocks = 2;
      break;
    case Subgroup::delta_sdm3_s3:
      block[d - 3] = block[d - 2] = block[d - 1] = 1;
      nblocks = 2;
      break;
  }
  std::vector<int> block_size(nblocks, 0);
  for (int i = 0; i < d; ++i) block_size[block[i]]++;

  // Orbit key for a matrix position: (block(i), block(j), i == j within a block).
  std::map<std::tuple<int, int, int>, std::vector<int>> cells;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      int same = (i == j) ? 1 : 0;
      // Within one block, diagonal and off-diagonal split; across blocks the
      // single-orbit key is (bi, bj). A same-block pair with block size 1 is
      // diagonal by force.
      std::tuple<int, int, int> key{block[i], block[j], (block[i] == block[j]) ? same : 2};
      cells[key].push_back(i * d + j);
    }
  }
  std::vector<std::vector<int>> out;
  for (auto& [k, idxs] : cells) out.push_back(std::move(idxs));
  if (with_alpha) {
    std::map<int, std::vector<int>> acell;
    for (int i = 0; i < d; ++i) acell[block[i]].push_back(d * d + i);
    for (auto& [k, idxs] : acell) out.push_back(std::move(idxs));
  }
  return out;
}

}  // namespace

FixedPointChart fixed_point_chart(Subgroup h, int d, bool include_second_layer) {
  int min_d = 0;
  switch (h) {
    case Subgroup::delta_sd: min_d = 2; break;
    case Subgroup::delta_sdm1_s1: min_d = 3; break;
    case Subgroup::delta_sdm2_s1s1: min_d = 4; break;
    case Subgroup::delta_sdm2_s2: min_d = 4; break;
    case Subgroup::delta_sdm3_s3: min_d = 5; break;
  }
  if (d < min_d) throw std::invalid_argument("fixed_point_chart: d too small for this subgroup");

  FixedPointChart chart;
  chart.label = subgroup_name(h, d);
  chart.d = d;
  chart.k_rows = d;
  chart.with_alpha = include_second_layer;
  chart.generators = subgroup_generators(h, d);

  std::vector<std::vector<int>> cells = chart_cells(h, d, include_second_layer);
  int ambient = d * d + (include_second_layer ? d : 0);
  chart.xi = Eigen::MatrixXd::Zero(ambient, static_cast<int>(cells.size()));
  for (size_t c = 0; c < cells.size(); ++c) {
    double nrm = 1.0 / std::sqrt(static_cast<double>(cells[c].size()));
    for (int idx : cells[c]) chart.xi(idx, static_cast<int>(c)) = nrm;
  }

  // The image must be pointwise fixed by the generators; indicator columns
  // make this exact, verified here once.
  for (const auto& g : chart.generators) {
    for (int c = 0; c < chart.xi.cols(); ++c) {
      Eigen::VectorXd col = chart.xi.col(c);
      Eigen::VectorXd moved = Eigen::VectorXd::Zero(ambient);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) moved[g[i] * d + g[j]] = col[i * d + j];
      }
      if (include_second_layer) {
        for (int i = 0; i < d; ++i) moved[d * d + g[i]] = col[d * d + i];
      }
      if ((moved - col).norm() > 1e-12) throw std::logic_error("chart image not fixed by generator");
    }
  }
  return chart;
}

void FixedPointChart::unpack(const Eigen::VectorXd& coords, Eigen::MatrixXd& w,
                             Eigen::VectorXd& alpha) const {
  Eigen::VectorXd full = xi * coords;
  w = unvec_rowmajor(full.head(d * d), d);
  if (with_alpha) {
    alpha = full.tail(d);
  } else {
    alpha = Eigen::VectorXd::Ones(d);
  }
}

// ---------------------------------------------------------------------------
// Newton on a chart

namespace {

std::string classify_extremal(const Eigen::MatrixXd& hess) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  double tau = 1e-6 * std::max(1.0, std::max(std::abs(lmin), std::abs(lmax)));
  if (lmin > tau) return "min";
  if (lmax < -tau) return "max";
  if (lmin < -tau && lmax > tau) return "saddle";
  return "degenerate";
}

}  // namespace

CriticalPoint newton_on_chart(const KernelLoss& loss, const FixedPointChart& chart,
                              const Eigen::VectorXd& init, const NewtonOptions& opts) {
  if (init.size() != chart.params()) throw std::invalid_argument("newton_on_chart: init size mismatch");
  Eigen::VectorXd xi = init;
  Eigen::MatrixXd w;
  Eigen::VectorXd alpha;
  CriticalPoint best;
  best.grad_norm = std::numeric_limits<double>::infinity();
  best.loss = std::numeric_limits<double>::infinity();

  for (int it = 0; it < opts.max_iterations; ++it) {
    chart.unpack(xi, w, alpha);
    double lval = loss.value(w, alpha);
    Eigen::VectorXd gfull = loss.gradient(w, alpha);
    double gnorm = gfull.norm();
    if (gnorm < best.grad_norm) {
      best.w = w;
      best.alpha = alpha;
      best.loss = lval;
      best.grad_norm = gnorm;
      best.iterations = it;
    }
    if (gnorm < opts.grad_tol_factor * (1.0 + std::abs(lval))) {
      best.converged = true;
      break;
    }
    Eigen::MatrixXd hfull = loss.hessian(w, alpha, true);
    Eigen::VectorXd gc = chart.xi.transpose() * gfull;
    Eigen::MatrixXd hc = chart.xi.transpose() * hfull * chart.xi;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hc);
    bool near = gnorm < 1e-4 * (1.0 + std::abs(lval));
    Eigen::VectorXd lam = es.eigenvalues();
    Eigen::VectorXd inv(lam.size());
    for (int i = 0; i < lam.size(); ++i) {
      double l = near ? lam[i] : std::max(std::abs(lam[i]), opts.hessian_floor);
      if (std::abs(l) < opts.hessian_floor) l = (l >= 0 ? 1.0 : -1.0) * opts.hessian_floor;
      inv[i] = 1.0 / l;
    }
    Eigen::VectorXd step = -es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * gc;
    if (!step.allFinite()) break;
    double t = 1.0;
    double gdot = gc.dot(step);
    Eigen::MatrixXd w2;
    Eigen::VectorXd a2;
    for (; t > 1e-12; t *= 0.5) {
      chart.unpack(xi + t * step, w2, a2);
      double l2 = loss.value(w2, a2);
      if (near || l2 <= lval + 1e-4 * t * gdot || l2 < lval) break;
    }
    xi += t * step;
  }
  chart.unpack(xi, w, alpha);
  double lval = loss.value(w, alpha);
  Eigen::VectorXd gfull = loss.gradient(w, alpha);
  if (gfull.norm() <= best.grad_norm) {
    best.w = w;
    best.alpha = alpha;
    best.loss = lval;
    best.grad_norm = gfull.norm();
    best.converged = gfull.norm() < opts.grad_tol_factor * (1.0 + std::abs(lval));
  }
  Eigen::MatrixXd hfull = loss.hessian(best.w, best.alpha, true);
  best.extremal_type = classify_extremal(hfull);
  std::optional<Eigen::VectorXd> al;
  if (loss.second_layer_trainable) al = best.alpha;
  best.isotropy = isotropy_of(best.w, al).label;
  return best;
}

CriticalPoint newton_multistart(const KernelLoss& loss, const FixedPointChart& chart,
                                const std::vector<Eigen::VectorXd>& inits, const NewtonOptions& opts) {
  std::vector<Eigen::VectorXd> starts;
  for (const auto& base : inits) starts.push_back(base);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int extra = std::max(0, opts.restarts - static_cast<int>(starts.size()));
  for (int r = 0; r < extra; ++r) {
    const Eigen::VectorXd& base = inits[r % inits.size()];
    Eigen::VectorXd jitter(base.size());
    for (int i = 0; i < base.size(); ++i) jitter[i] = gauss(rng);
    starts.push_back(base + opts.restart_spread * jitter);
  }
  std::vector<CriticalPoint> results(starts.size());
  parallel_for(static_cast<std::int64_t>(starts.size()), [&](std::int64_t i) {
    NewtonOptions local = opts;
    results[i] = newton_on_chart(loss, chart, starts[i], local);
  });
  int best_idx = 0;
  auto better = [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.grad_norm != b.grad_norm) return a.grad_norm < b.grad_norm;
    return a.loss < b.loss;
  };
  for (size_t i = 1; i < results.size(); ++i) {
    if (better(results[i], results[best_idx])) best_idx = static_cast<int>(i);
  }
  return results[best_idx];
}

// ---------------------------------------------------------------------------
// Isotropy

namespace {

bool fixes(const Eigen::MatrixXd& w, const std::optional<Eigen::VectorXd>& alpha,
           const std::vector<int>& g, double tol) {
  int d = static_cast<int>(w.rows());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (std::abs(w(g[i], g[j]) - w(i, j)) > tol) return false;
    }
  }
  if (alpha) {
    for (int i = 0; i < d; ++i) {
      if (std::abs((*alpha)[g[i]] - (*alpha)[i]) > tol) return false;
    }
  }
  return true;
}

std::string young_label(const std::vector<int>& sizes, int d) {
  std::vector<int> s = sizes;
  std::sort(s.rbegin(), s.rend());
  if (s.size() == 1 && s[0] == d) return "Delta(S_" + std::to_string(d) + ")";
  if (std::all_of(s.begin(), s.end(), [](int x) { return x == 1; })) return "trivial";
  std::ostringstream os;
  os << "Delta(";
  std::map<int, int> counts;
  for (int x : s) counts[x]++;
  bool first = true;
  for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
    if (!first) os << " x ";
    first = false;
    os << "S_" << it->first;
    if (it->second > 1) os << "^" << it->second;
  }
  os << ")";
  return os.str();
}

}  // namespace

IsotropyResult isotropy_of(const Eigen::MatrixXd& w, const std::optional<Eigen::VectorXd>& alpha,
                           double tol) {
  int d = static_cast<int>(w.rows());
  if (w.cols() != d) throw std::invalid_argument("isotropy_of: square matrix required");
  IsotropyResult res;
  if (d <= 8) {
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> elements;
    do {
      if (fixes(w, alpha, perm, tol)) elements.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.order = static_cast<long>(elements.size());
    // Orbit partition of the group.
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& g : elements) {
      for (int i = 0; i < d; ++i) {
        int a = find(i), b = find(g[i]);
        if (a != b) parent[a] = b;
      }
    }
    std::map<int, std::vector<int>> orbits;
    for (int i = 0; i < d; ++i) orbits[find(i)].push_back(i);
    Int young_order = 1;
    std::vector<int> sizes;
    for (auto& [r, mem] : orbits) {
      sizes.push_back(static_cast<int>(mem.size()));
      young_order *= factorial(static_cast<int>(mem.size()));
    }
    if (young_order == res.order) {
      res.label = young_label(sizes, d);
      for (auto& [r, mem] : orbits) {
        if (mem.size() >= 2) {
          std::vector<int> t(d);
          std::iota(t.begin(), t.end(), 0);
          std::swap(t[mem[0]], t[mem[1]]);
          res.generators.push_back(t);
          if (mem.size() >= 3) {
            std::vector<int> c(d);
            std::iota(c.begin(), c.end(), 0);
            for (size_t i = 0; i + 1 < mem.size(); ++i) c[mem[i]] = mem[i + 1];
            c[mem.back()] = mem[0];
            res.generators.push_back(c);
          }
        }
      }
    } else {
      res.label = "order-" + res.order.get_str() + " subgroup";
      res.generators = elements;  // valid generating set, not minimal
    }
    return res;
  }

  // Heuristic: partition refinement on row/column/diagonal signatures, then
  // certify the Young product of the stable classes by its generators.
  res.heuristic_only = true;
  std::vector<int> color(d, 0);
  auto key_of = [&](int i) {
    std::vector<std::pair<double, int>> row, col;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      row.emplace_back(w(i, j), color[j]);
      col.emplace_back(w(j, i), color[j]);
    }
    std::sort(row.begin(), row.end());
    std::sort(col.begin(), col.end());
    std::ostringstream os;
    os.precision(12);
    os << color[i] << "|" << w(i, i) << "|";
    if (alpha) os << (*alpha)[i] << "|";
    for (auto& [v, c] : row) os << v << "," << c << ";";
    os << "|";
    for (auto& [v, c] : col) os << v << "," << c << ";";
    return os.str();
  };
  for (int round = 0; round < d; ++round) {
    std::map<std::string, int> remap;
    std::vector<int> next(d);
    for (int i = 0; i < d; ++i) {
      std::string k = key_of(i);
      auto [it, inserted] = remap.emplace(k, static_cast<int>(remap.size()));
      next[i] = it->second;
    }
    if (next == color) break;
    color = next;
  }
  std::map<int, std::vector<int>> classes;
  for (int i = 0; i < d; ++i) classes[color[i]].push_back(i);
  res.order = 1;
  std::vector<int> sizes;
  for (auto& [c, mem] : classes) {
    bool whole_class_symmetric = true;
    if (mem.size() >= 2) {
      // Certify with adjacent transpositions and the full cycle.
      for (size_t i = 0; i + 1 < mem.size() && whole_class_symmetric; ++i) {
        std::vector<int> t(d);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[mem[i]], t[mem[i + 1]]);
        if (!fixes(w, alpha, t, tol)) whole_class_symmetric = false;
      }
    }
    if (whole_class_symmetric) {
      sizes.push_back(static_cast<int>(mem.size()));
      res.order *= factorial(static_cast<int>(mem.size()));
      if (mem.size() >= 2) {
        std::vector<int> t(d);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[mem[0]], t[mem[1]]);
        res.generators.push_back(t);
        if (mem.size() >= 3) {
          std::vector<int> cyc(d);
          std::iota(cyc.begin(), cyc.end(), 0);
          for (size_t i = 0; i + 1 < mem.size(); ++i) cyc[mem[i]] = mem[i + 1];
          cyc[mem.back()] = mem[0];
          res.generators.push_back(cyc);
        }
      }
    } else {
      for (size_t i = 0; i < mem.size(); ++i) sizes.push_back(1);
    }
  }
  res.label = young_label(sizes, d);
  return res;
}

// ---------------------------------------------------------------------------
// Example functions

namespace {

// Reduce a univariate polynomial (nvars = 1) modulo x^2 = c, exactly.
Rat reduce_mod_x2(const Polynomial& p, const Rat& c, Rat* linear_out) {
  Rat constant(0), linear(0);
  for (const auto& [m, coef] : p.terms()) {
    int e = m.empty() ? 0 : m[0].second;
    Rat factor(1);
    for (int i = 0; i < e / 2; ++i) factor *= c;
    if (e % 2 == 0) {
      constant += coef * factor;
    } else {
      linear += coef * factor;
    }
  }
  if (linear_out) *linear_out = linear;
  return constant;
}

}  // namespace

ExampleFunction example_h() {
  Polynomial p = Polynomial::parse("x1^4 + x1^2*x2^2 + x2^4 - 2*x1^2 - 2*x2^2", 2);
  ExampleFunction ex{"h", p, {}};

  Polynomial gx = p.partial(0);
  Polynomial gy = p.partial(1);
  auto rational_point = [&](Rat x, Rat y, const std::string& type) {
    if (gx.eval(std::vector<Rat>{x, y}) != 0 || gy.eval(std::vector<Rat>{x, y}) != 0) {
      throw std::logic_error("example h: claimed critical point fails the exact gradient check");
    }
    ex.critical_points.push_back({{to_double(x), to_double(y)}, type, true});
  };
  rational_point(0, 0, "max");
  rational_point(1, 0, "saddle");
  rational_point(-1, 0, "saddle");
  rational_point(0, 1, "saddle");
  rational_point(0, -1, "saddle");

  // Diagonal minima (sx*a, sy*a) with a^2 = 2/3: substitute y = (sy/sx) x and
  // reduce the gradient mod (x^2 - 2/3); both components must vanish exactly.
  Rat asq(2, 3);
  double a = std::sqrt(2.0 / 3.0);
  for (int sx : {+1, -1}) {
    for (int sy : {+1, -1}) {
      std::vector<Polynomial> sub = {Polynomial::variable(1, 0) * Rat(sx),
                                     Polynomial::variable(1, 0) * Rat(sy)};
      Polynomial gx1 = gx.substitute(sub);
      Polynomial gy1 = gy.substitute(sub);
      Rat c1, l1, c2, l2;
      c1 = reduce_mod_x2(gx1, asq, &l1);
      c2 = reduce_mod_x2(gy1, asq, &l2);
      if (c1 != 0 || l1 != 0 || c2 != 0 || l2 != 0) {
        throw std::logic_error("example h: diagonal critical point fails the exact reduction check");
      }
      ex.critical_points.push_back({{sx * a, sy * a}, "min", true});
    }
  }
  return ex;
}

ExampleFunction example_gd(int d) {
  Polynomial p(d);
  for (int i = 0; i < d; ++i) {
    p.add_term({{i, 2}}, Rat(1, 2));
    p.add_term({{i, 3}}, Rat(1, 3));
  }
  ExampleFunction ex{"gd", p, {}};
  // Critical set {0, -1}^d; exact since each gradient entry is x_i + x_i^2.
  for (long long mask = 0; mask < (1LL << d); ++mask) {
    std::vector<double> pt(d, 0.0);
    std::vector<Rat> rp(d, Rat(0));
    for (int i = 0; i < d; ++i) {
      if (mask & (1LL << i)) {
        pt[i] = -1.0;
        rp[i] = -1;
      }
    }
    for (int i = 0; i < d; ++i) {
      if (p.partial(i).eval(rp) != 0) throw std::logic_error("example g_d: critical point check failed");
    }
    ex.critical_points.push_back({pt, "", true});
  }
  return ex;
}

ExampleFunction example_hd(int d) {
  Polynomial p(d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) p.add_term({{i, 1}, {j, 1}}, 1);
    p.add_term({{i, 3}}, Rat(1, 3));
  }
  return ExampleFunction{"hd", p, {}};
}

ExampleFunction example_quad(const std::vector<std::vector<Rat>>& a) {
  int d = static_cast<int>(a.size());
  Polynomial p(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (a[i][j] != a[j][i]) throw std::invalid_argument("example quad: symmetric matrix required");
      if (i == j) {
        p.add_term({{i, 2}}, a[i][i] / 2);
      } else if (i < j) {
        p.add_term({{i, 1}, {j, 1}}, a[i][j]);
      }
    }
  }
  ExampleFunction ex{"quad", p, {}};
  ex.critical_points.push_back({std::vector<double>(d, 0.0), "", true});
  return ex;
}

ExampleFunction example_diag_cubic(int d) {
  Polynomial p(d);
  for (int i = 0; i < d; ++i) {
    p.add_term({{i, 2}}, Rat(i + 1, 2));
    p.add_term({{i, 3}}, Rat(1, 3));
  }
  return ExampleFunction{"diag-cubic", p, {}};
}

ExampleFunction example_by_name(const std::string& name, int d) {
  if (name == "h") return example_h();
  if (name == "gd" || name == "g_d") return example_gd(d);
  if (name == "hd" || name == "h_d") return example_hd(d);
  if (name == "diag-cubic" || name == "diagcubic") return example_diag_cubic(d);
  throw std::invalid_argument("unknown example function: " + name);
}

}  // namespace symtan
