#include "symtan/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "symtan/parallel.hpp"

namespace symtan {

std::vector<double> BlockSpectrum::expand() const {
  std::vector<double> out;
  for (const auto& b : blocks) {
    for (double e : b.eigenvalues) {
      for (long long r = 0; r < b.degree; ++r) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockSpectrum equivariant_spectrum(const Eigen::MatrixXd& h, const std::vector<ComponentBasis>& bases) {
  if (h.rows() != h.cols()) throw std::invalid_argument("equivariant_spectrum: square matrix required");
  int n = static_cast<int>(h.rows());

  // Group the component bases into isotypic components by partition.
  std::map<Partition, std::pair<std::vector<std::string>, std::vector<const Eigen::MatrixXd*>>> groups;
  int total_cols = 0;
  for (const auto& cb : bases) {
    if (cb.basis.rows() != n) throw std::invalid_argument("equivariant_spectrum: basis dimension mismatch");
    groups[cb.lambda].first.push_back(cb.label);
    groups[cb.lambda].second.push_back(&cb.basis);
    total_cols += static_cast<int>(cb.basis.cols());
  }
  if (total_cols != n) throw std::invalid_argument("equivariant_spectrum: bases do not span the space");

  struct Iso {
    Partition lambda;
    std::vector<std::string> labels;
    Eigen::MatrixXd basis;
  };
  std::vector<Iso> isos;
  for (auto& [lam, pair] : groups) {
    int cols = 0;
    for (const auto* b : pair.second) cols += static_cast<int>(b->cols());
    Eigen::MatrixXd basis(n, cols);
    int at = 0;
    for (const auto* b : pair.second) {
      basis.middleCols(at, static_cast<int>(b->cols())) = *b;
      at += static_cast<int>(b->cols());
    }
    isos.push_back({lam, pair.first, std::move(basis)});
  }

  double hnorm = h.norm();
  double leak_tol = 1e-8 * std::max(hnorm, 1e-30);
  for (size_t a = 0; a < isos.size(); ++a) {
    for (size_t b = a + 1; b < isos.size(); ++b) {
      double leak = (isos[a].basis.transpose() * h * isos[b].basis).norm();
      if (leak > leak_tol) {
        throw LeakageError("cross-component block norm " + std::to_string(leak) +
                           " exceeds tolerance (input is not equivariant)");
      }
    }
  }

  BlockSpectrum out;
  out.ambient_dim = n;
  for (const auto& iso : isos) {
    long long deg = irrep_degree(iso.lambda);
    Eigen::MatrixXd restr = iso.basis.transpose() * h * iso.basis;
    restr = 0.5 * (restr + restr.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restr);
    int pm = static_cast<int>(restr.rows());
    if (pm % deg != 0) throw std::logic_error("isotypic restriction size not divisible by degree");
    int p = pm / static_cast<int>(deg);
    // Eigenvalues of the restriction come in groups of size deg.
    BlockSpectrum::Block blk;
    blk.lambda = iso.lambda;
    blk.labels = iso.labels;
    blk.degree = deg;
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int g = 0; g < p; ++g) {
      double lo = es.eigenvalues()[g * deg];
      double hi = es.eigenvalues()[(g + 1) * deg - 1];
      if (hi - lo > 1e-6 * scale) {
        throw LeakageError("restriction eigenvalues do not align in degree-sized groups");
      }
      blk.eigenvalues.push_back(es.eigenvalues().segment(g * deg, deg).mean());
    }
    out.blocks.push_back(std::move(blk));
  }

  // Multiset check against the dense spectrum.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(0.5 * (h + h.transpose()));
  std::vector<double> expanded = out.expand();
  double scale = std::max(1.0, dense.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    if (std::abs(expanded[i] - dense.eigenvalues()[i]) > 1e-8 * scale) {
      throw LeakageError("block spectrum does not reproduce the dense spectrum");
    }
  }
  return out;
}

double unfolding_norm_bound(const NumSymTensor& a) {
  Eigen::MatrixXd f = a.unfolding();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(f);
  return svd.singularValues()[0];
}

double unfolding_norm_bound(const SymForm& a) { return unfolding_norm_bound(NumSymTensor::from(a)); }

double spectral_norm_estimate(const NumSymTensor& a, int starts, std::uint64_t seed) {
  int dim = a.dim();
  std::vector<double> best(starts, 0.0);
  parallel_for(starts, [&](std::int64_t s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = gauss(rng);
    if (x.norm() == 0) return;
    x.normalize();
    // Tensor power iteration toward a local max of |A x^k|.
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd y = a.apply_partial(x);
      double n = y.norm();
      if (n < 1e-300) break;
      y /= n;
      if (a.order() % 2 == 1 && a.apply_full(y) < 0) y = -y;
      if ((y - x).norm() < 1e-14) {
        x = y;
        break;
      }
      x = y;
    }
    best[s] = std::abs(a.apply_full(x));
  });
  double m = 0.0;
  for (double b : best) m = std::max(m, b);
  return m;
}

ClusterReport cluster_report(std::vector<double> eigenvalues, double tol) {
  ClusterReport rep;
  if (eigenvalues.empty()) return rep;
  std::sort(eigenvalues.begin(), eigenvalues.end());
  size_t start = 0;
  for (size_t i = 1; i <= eigenvalues.size(); ++i) {
    if (i == eigenvalues.size() || eigenvalues[i] - eigenvalues[i - 1] > tol) {
      ClusterReport::Cluster c;
      c.multiplicity = static_cast<long long>(i - start);
      c.width = eigenvalues[i - 1] - eigenvalues[start];
      double sum = 0.0;
      for (size_t j = start; j < i; ++j) sum += eigenvalues[j];
      c.center = sum / static_cast<double>(c.multiplicity);
      rep.clusters.push_back(c);
      start = i;
    }
  }
  return rep;
}

std::vector<TableConstant> relu_table_constants(int d) {
  const double pi = 3.14159265358979323846;
  double dd = d;
  std::vector<TableConstant> t;
  t.push_back({"O(d^-1/2) near zero", 0.0, d, true});
  t.push_back({"1/4 - 1/(2pi)", 0.25 - 1.0 / (2.0 * pi), static_cast<long long>(d - 1) * (d - 2) / 2, false});
  t.push_back({"1/2 - 1/pi", 0.5 - 1.0 / pi, d - 1, false});
  t.push_back({"1/4", 0.25, d - 1, false});
  t.push_back({"1/4 + 1/(2pi)", 0.25 + 1.0 / (2.0 * pi), static_cast<long long>(d) * (d - 3) / 2, false});
  t.push_back({"d/4 + 1/2", dd / 4.0 + 0.5, d - 1, false});
  t.push_back({"d/4 + (-4+pi+pi^2)/(2pi(-4+pi))", dd / 4.0 + (-4.0 + pi + pi * pi) / (2.0 * pi * (-4.0 + pi)), 1, false});
  t.push_back({"d/pi + (-10pi+8+pi^2)/(2pi(-4+pi))", dd / pi + (-10.0 * pi + 8.0 + pi * pi) / (2.0 * pi * (-4.0 + pi)), 1, false});
  return t;
}

ClusterReport cluster_report_matched(std::vector<double> eigenvalues, double tol, int d,
                                     double match_tol) {
  ClusterReport rep = cluster_report(std::move(eigenvalues), tol);
  std::vector<TableConstant> consts = relu_table_constants(d);
  for (auto& c : rep.clusters) {
    double best = match_tol;
    for (const auto& tc : consts) {
      double dist = std::abs(c.center - tc.value);
      if (dist <= best) {
        best = dist;
        c.table_match = tc.name;
      }
    }
  }
  return rep;
}

}  // namespace symtan
