#include <cmath>
#include <random>

#include "doctest.h"
#include "symtan/isotypic.hpp"
#include "symtan/landscape.hpp"

using namespace symtan;

namespace {

Eigen::VectorXd gauss_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

double fd_loss_grad_error(const KernelLoss& loss, const Eigen::MatrixXd& w,
                          const Eigen::VectorXd& alpha) {
  int k = static_cast<int>(w.rows());
  int d = static_cast<int>(w.cols());
  Eigen::VectorXd g = loss.gradient(w, alpha);
  const double h = 1e-5;
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXd wp = w, wm = w;
      wp(i, j) += h;
      wm(i, j) -= h;
      double fd = (loss.value(wp, alpha) - loss.value(wm, alpha)) / (2 * h);
      double an = g[i * d + j];
      worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
  }
  if (loss.second_layer_trainable) {
    for (int i = 0; i < k; ++i) {
      Eigen::VectorXd ap = alpha, am = alpha;
      ap[i] += h;
      am[i] -= h;
      double fd = (loss.value(w, ap) - loss.value(w, am)) / (2 * h);
      double an = g[k * d + i];
      worst = std::max(worst, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
  }
  return worst;
}

double fd_loss_hess_error(const KernelLoss& loss, const Eigen::MatrixXd& w,
                          const Eigen::VectorXd& alpha) {
  int k = static_cast<int>(w.rows());
  int d = static_cast<int>(w.cols());
  int n = loss.param_count(k);
  Eigen::MatrixXd hess = loss.hessian(w, alpha);
  const double h = 1e-5;
  double worst = 0.0;
  auto apply = [&](const Eigen::VectorXd& theta) {
    Eigen::MatrixXd ww(k, d);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < d; ++j) ww(i, j) = theta[i * d + j];
    }
    Eigen::VectorXd aa = alpha;
    if (loss.second_layer_trainable) aa = theta.tail(k);
    return loss.gradient(ww, aa);
  };
  Eigen::VectorXd theta0(n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) theta0[i * d + j] = w(i, j);
  }
  if (loss.second_layer_trainable) theta0.tail(k) = alpha;
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd tp = theta0, tm = theta0;
    tp[c] += h;
    tm[c] -= h;
    Eigen::VectorXd col = (apply(tp) - apply(tm)) / (2 * h);
    worst = std::max(worst, (col - hess.col(c)).cwiseAbs().maxCoeff() /
                                (1.0 + hess.col(c).cwiseAbs().maxCoeff()));
  }
  return worst;
}

}  // namespace

TEST_CASE("kernel values") {
  KernelSpec relu = KernelSpec::relu();
  KernelSpec cubic = KernelSpec::cubic();
  KernelSpec pow1 = KernelSpec::power(1);

  Eigen::VectorXd w = Eigen::Vector3d(1, 0, 0);
  CHECK(cubic.value(w, w) == doctest::Approx(15.0));
  CHECK(relu.value(w, w) == doctest::Approx(0.5));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd a = gauss_vec(rng, 4), b = gauss_vec(rng, 4);
    CHECK(pow1.value(a, b) == doctest::Approx(a.dot(b)));
    CHECK(relu.value(a, b) == doctest::Approx(relu.value(b, a)));
    CHECK(cubic.value(a, b) == doctest::Approx(cubic.value(b, a)));
  }
  CHECK_THROWS(relu.value(Eigen::Vector3d::Zero(), w));
}

TEST_CASE("relu kernel matches a Monte Carlo of the Gaussian expectation") {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int d = 5;
  Eigen::VectorXd w = gauss_vec(rng, d), v = gauss_vec(rng, d);
  KernelSpec relu = KernelSpec::relu();
  double closed = relu.value(w, v);
  int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x = gauss_vec(rng, d);
    double val = std::max(0.0, w.dot(x)) * std::max(0.0, v.dot(x));
    sum += val;
    sumsq += val * val;
  }
  double mean = sum / n;
  double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(closed - mean) < 5 * se);
}

TEST_CASE("kernel gradients and second blocks match finite differences") {
  std::mt19937_64 rng(7);
  const double h = 1e-5;
  std::vector<KernelSpec> kernels = {KernelSpec::relu(), KernelSpec::cubic(), KernelSpec::power(2),
                                     KernelSpec::power(3),
                                     KernelSpec::geometric([](double c) { return c * c + 0.5 * c; },
                                                           [](double c) { return 2 * c + 0.5; }, 2)};
  for (const auto& ker : kernels) {
    for (int t = 0; t < 6; ++t) {
      Eigen::VectorXd w = gauss_vec(rng, 3), v = gauss_vec(rng, 3);
      if (w.norm() < 0.3 || v.norm() < 0.3) continue;
      Eigen::VectorXd g = ker.grad_w(w, v);
      for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd wp = w, wm = w;
        wp[i] += h;
        wm[i] -= h;
        double fd = (ker.value(wp, v) - ker.value(wm, v)) / (2 * h);
        CHECK(std::abs(fd - g[i]) < 2e-6 * (1.0 + std::abs(g[i])));
      }
      Eigen::MatrixXd h_ww, h_wv;
      ker.second_blocks(w, v, h_ww, h_wv);
      for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd wp = w, wm = w, vp = v, vm = v;
        wp[i] += h;
        wm[i] -= h;
        vp[i] += h;
        vm[i] -= h;
        Eigen::VectorXd colw = (ker.grad_w(wp, v) - ker.grad_w(wm, v)) / (2 * h);
        Eigen::VectorXd colv = (ker.grad_w(w, vp) - ker.grad_w(w, vm)) / (2 * h);
        CHECK((colw - h_ww.col(i)).cwiseAbs().maxCoeff() < 5e-5 * (1.0 + h_ww.cwiseAbs().maxCoeff()));
        CHECK((colv - h_wv.col(i)).cwiseAbs().maxCoeff() < 5e-5 * (1.0 + h_wv.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("relu kernel collinear handling") {
  KernelSpec relu = KernelSpec::relu();
  Eigen::VectorXd w = Eigen::Vector3d(1, 2, 0);
  Eigen::VectorXd v = 2.5 * w;
  bool warn = false;
  Eigen::VectorXd g = relu.grad_w(w, v, &warn);
  CHECK(warn);
  CHECK((g - 0.5 * v).norm() < 1e-10);  // one-sided limit: v/2
  Eigen::MatrixXd h_ww, h_wv;
  CHECK_THROWS_AS(relu.second_blocks(w, v, h_ww, h_wv, false), CollinearRowsError);
  relu.second_blocks(w, v, h_ww, h_wv, true);
  CHECK(h_ww.norm() < 1e-10);
  CHECK((h_wv - 0.5 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("loss value, gradient and hessian") {
  std::mt19937_64 rng(21);
  int d = 4;

  for (auto kind : {KernelSpec::relu(), KernelSpec::cubic(), KernelSpec::power(2)}) {
    KernelLoss loss{kind, Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), true};
    // Zero at the target.
    CHECK(loss.value(Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    for (int t = 0; t < 3; ++t) {
      Eigen::MatrixXd w(d, d);
      for (int i = 0; i < d; ++i) w.row(i) = gauss_vec(rng, d).transpose();
      Eigen::VectorXd alpha = gauss_vec(rng, d);
      CHECK(fd_loss_grad_error(loss, w, alpha) < 1e-6);
      CHECK(fd_loss_hess_error(loss, w, alpha) < 1e-4);
    }
  }
}

TEST_CASE("power(2) loss closed form from Gram matrices") {
  // W = 2I, V = I, alpha = beta = 1, d = 2:
  // L = 1/2 (sum <wi,wj>^2 - 2 sum <wi,vj>^2 + sum <vi,vj>^2) = 1/2(32-16+2).
  KernelLoss loss{KernelSpec::power(2), Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2), true};
  Eigen::MatrixXd w = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  CHECK(loss.value(w, Eigen::VectorXd::Ones(2)) == doctest::Approx(9.0));
}

TEST_CASE("relu loss value matches a Monte Carlo of the expected square loss") {
  std::mt19937_64 rng(5150);
  int d = 5;
  Eigen::MatrixXd w(d, d), v = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i) w.row(i) = (Eigen::VectorXd::Unit(d, i) + 0.3 * gauss_vec(rng, d)).transpose();
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(d) + 0.2 * gauss_vec(rng, d);
  KernelLoss loss{KernelSpec::relu(), v, Eigen::VectorXd::Ones(d), true};
  double closed = loss.value(w, alpha);
  int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = gauss(rng);
    double fw = 0.0, fv = 0.0;
    for (int i = 0; i < d; ++i) {
      fw += alpha[i] * std::max(0.0, w.row(i).dot(x));
      fv += std::max(0.0, v.row(i).dot(x));
    }
    double val = 0.5 * (fw - fv) * (fw - fv);
    sum += val;
    sumsq += val * val;
  }
  double mean = sum / n;
  double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(closed - mean) < 5 * se);
}

TEST_CASE("gradient equivariance for invariant losses") {
  std::mt19937_64 rng(33);
  int d = 5;
  KernelLoss loss{KernelSpec::relu(), Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), true};
  Eigen::MatrixXd w(d, d);
  for (int i = 0; i < d; ++i) w.row(i) = gauss_vec(rng, d).transpose();
  Eigen::VectorXd alpha = gauss_vec(rng, d);
  Eigen::VectorXd g = loss.gradient(w, alpha);

  std::vector<int> perm = {1, 0, 3, 4, 2};
  Eigen::MatrixXd wg(d, d);
  Eigen::VectorXd ag(d);
  for (int i = 0; i < d; ++i) {
    ag[perm[i]] = alpha[i];
    for (int j = 0; j < d; ++j) wg(perm[i], perm[j]) = w(i, j);
  }
  Eigen::VectorXd gg = loss.gradient(wg, ag);
  // g(sigma.W) = sigma.g(W)
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CHECK(gg[perm[i] * d + perm[j]] == doctest::Approx(g[i * d + j]).epsilon(1e-10));
    }
  }
}

TEST_CASE("fixed point charts: dimensions, orthonormality, consistency") {
  int d = 6;
  struct Case {
    Subgroup h;
    int p;  // Young block size for the character cross-check (p <= 3)
    int expected;
  };
  std::vector<Case> cases = {{Subgroup::delta_sd, 0, 2},
                             {Subgroup::delta_sdm1_s1, 1, 5},
                             {Subgroup::delta_sdm2_s1s1, -1, 10},
                             {Subgroup::delta_sdm2_s2, 2, 6},
                             {Subgroup::delta_sdm3_s3, 3, 6}};
  for (const auto& c : cases) {
    FixedPointChart chart = fixed_point_chart(c.h, d, false);
    CHECK(chart.params() == c.expected);
    Eigen::MatrixXd gram = chart.xi.transpose() * chart.xi;
    CHECK((gram - Eigen::MatrixXd::Identity(chart.params(), chart.params())).cwiseAbs().maxCoeff() <
          1e-14);
    // Chart dimension equals sum of multiplicities times fixed dims.
    if (c.p >= 0) {
      Decomposition dec = decompose(RepId::mdd(d));
      long long expect = 0;
      for (const auto& e : dec.entries) expect += e.multiplicity * fixed_dim_young(e.lambda, d, c.p);
      CHECK(static_cast<long long>(chart.params()) == expect);
    }
  }
  FixedPointChart with_alpha = fixed_point_chart(Subgroup::delta_sdm1_s1, d, true);
  CHECK(with_alpha.params() == 7);
}

TEST_CASE("newton on the Delta S_d chart finds the global minimum") {
  int d = 5;
  KernelLoss loss{KernelSpec::relu(), Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), true};
  FixedPointChart chart = fixed_point_chart(Subgroup::delta_sd, d, true);
  // Start near (I, 1): coordinates are (diag cell, offdiag cell, alpha cell).
  Eigen::VectorXd init(3);
  init << std::sqrt(static_cast<double>(d)) * 1.05, 0.08, std::sqrt(static_cast<double>(d)) * 0.95;
  NewtonOptions opts;
  CriticalPoint cp = newton_on_chart(loss, chart, init, opts);
  CHECK(cp.converged);
  CHECK(cp.loss <= 1e-12);
  CHECK((cp.w - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(cp.isotropy == "Delta(S_5)");
}

TEST_CASE("newton on a chart for the power(2) kernel, checked by the matrix form") {
  int d = 3;
  KernelLoss loss{KernelSpec::power(2), Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), true};
  FixedPointChart chart = fixed_point_chart(Subgroup::delta_sd, d, true);
  Eigen::VectorXd init(3);
  init << 1.2, 0.4, 1.1;
  CriticalPoint cp = newton_on_chart(loss, chart, init, {});
  CHECK(cp.converged);
  // Closed-form check: L = 1/2 |M_W - M_V|_F^2 with M_W = sum alpha_i w_i w_i^T;
  // the gradient in W is 2 (M_W - M_V) W^T-contracted; criticality means
  // (M_W - M_V) w_i alpha_i = 0 for all i.
  Eigen::MatrixXd mw = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) mw += cp.alpha[i] * cp.w.row(i).transpose() * cp.w.row(i);
  Eigen::MatrixXd mv = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd res = (mw - mv) * cp.w.row(i).transpose() * cp.alpha[i];
    CHECK(res.norm() < 1e-7);
  }
}

TEST_CASE("chart criticality implies full-space criticality") {
  int d = 6;
  KernelLoss loss{KernelSpec::relu(), Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Ones(d), true};
  FixedPointChart chart = fixed_point_chart(Subgroup::delta_sdm1_s1, d, true);
  std::mt19937_64 rng(2);
  std::vector<Eigen::VectorXd> inits;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(chart.params());
  // identity-like start expressed in chart cells
  base[0] = std::sqrt(static_cast<double>(d - 1));  // diag block of size d-1
  base[4] = 1.0;                                    // (d,d) entry
  base[5] = std::sqrt(static_cast<double>(d - 1));  // alpha head
  base[6] = 1.0;                                    // alpha tail
  inits.push_back(base);
  NewtonOptions opts;
  opts.restarts = 6;
  opts.seed = 99;
  CriticalPoint cp = newton_multistart(loss, chart, inits, opts);
  CHECK(cp.converged);
  CHECK(cp.grad_norm < 1e-8 * (1.0 + std::abs(cp.loss)));
}

TEST_CASE("isotropy computation") {
  CHECK(isotropy_of(Eigen::MatrixXd::Identity(5, 5), std::nullopt).label == "Delta(S_5)");
  CHECK(isotropy_of(Eigen::MatrixXd::Identity(5, 5), std::nullopt).order == 120);

  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(5, 5);
  w(4, 4) = 2.0;
  IsotropyResult r = isotropy_of(w, std::nullopt);
  CHECK(r.order == 24);
  CHECK(r.label == "Delta(S_4 x S_1)");

  Eigen::MatrixXd rnd(4, 4);
  rnd << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16;
  IsotropyResult t = isotropy_of(rnd, std::nullopt);
  CHECK(t.order == 1);
  CHECK(t.label == "trivial");

  // Heuristic mode beyond d = 8.
  Eigen::MatrixXd big = Eigen::MatrixXd::Identity(10, 10);
  big(9, 9) = 3.0;
  IsotropyResult h = isotropy_of(big, std::nullopt);
  CHECK(h.heuristic_only);
  CHECK(h.label == "Delta(S_9 x S_1)");
  CHECK(h.order == factorial(9));

  // Alpha can break symmetry.
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(5);
  alpha[0] = 2.0;
  IsotropyResult a = isotropy_of(Eigen::MatrixXd::Identity(5, 5), alpha);
  CHECK(a.order == 24);
}

TEST_CASE("example functions") {
  ExampleFunction h = example_h();
  REQUIRE(h.critical_points.size() == 9);
  int mins = 0, maxs = 0, saddles = 0;
  double a = std::sqrt(2.0 / 3.0);
  for (const auto& cp : h.critical_points) {
    CHECK(cp.exact_certificate);
    if (cp.type == "min") {
      ++mins;
      CHECK(std::abs(std::abs(cp.x[0]) - a) < 1e-15);
      std::vector<double> pt = {cp.x[0], cp.x[1]};
      CHECK(h.poly.eval(pt) == doctest::Approx(-4.0 / 3.0));
    }
    if (cp.type == "max") ++maxs;
    if (cp.type == "saddle") ++saddles;
  }
  CHECK(mins == 4);
  CHECK(maxs == 1);
  CHECK(saddles == 4);

  ExampleFunction g3 = example_gd(3);
  CHECK(g3.critical_points.size() == 8);

  ExampleFunction h3 = example_hd(3);
  CHECK(h3.poly.degree() == 3);
  CHECK(h3.poly.coeff({{0, 1}, {1, 1}}) == Rat(1));
}

TEST_CASE("isotropy along the invariant arc is monotone") {
  // Points on the diagonal arc of h_d keep the full symmetry of the chart.
  int d = 4;
  for (double t : {0.05, 0.2, 0.5}) {
    Eigen::MatrixXd w = t * Eigen::MatrixXd::Ones(d, d);
    IsotropyResult r = isotropy_of(w, std::nullopt);
    CHECK(r.order == factorial(d));
  }
}
