#include "symtan/isotypic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace symtan {

RepId RepId::perm(int d) { return RepId{Tag::perm_rd, d, 0, nullptr}; }
RepId RepId::mdd(int d) { return RepId{Tag::mdd_diag, d, 0, nullptr}; }
RepId RepId::mdd_plus(int d) { return RepId{Tag::mdd_plus_rd, d, 0, nullptr}; }

RepId RepId::tensor_power_of(int k, const RepId& inner) {
  if (k < 1) throw std::invalid_argument("tensor power must be >= 1");
  return RepId{Tag::tensor_power, inner.d, k, std::make_shared<RepId>(inner)};
}

RepId RepId::sym_power_of(int k, const RepId& inner) {
  if (k < 1) throw std::invalid_argument("symmetric power must be >= 1");
  return RepId{Tag::sym_power, inner.d, k, std::make_shared<RepId>(inner)};
}

RepId RepId::ext_power_of(const RepId& inner) {
  return RepId{Tag::ext_power, inner.d, 2, std::make_shared<RepId>(inner)};
}

Int RepId::dimension() const { return rep_character(*this, CycleType::identity(d)); }

std::string RepId::name() const {
  switch (tag) {
    case Tag::perm_rd: return "perm-rd";
    case Tag::mdd_diag: return "mdd";
    case Tag::mdd_plus_rd: return "mdd+rd";
    case Tag::tensor_power: return "tensor" + std::to_string(power) + "(" + inner->name() + ")";
    case Tag::sym_power: return "sym" + std::to_string(power) + "(" + inner->name() + ")";
    case Tag::ext_power: return "ext2(" + inner->name() + ")";
  }
  return "?";
}

CycleType power_class(const CycleType& t, int k) {
  if (k < 1) throw std::invalid_argument("power_class: k >= 1");
  CycleType out;
  out.mult.assign(t.mult.size(), 0);
  for (size_t j = 1; j <= t.mult.size(); ++j) {
    if (t.mult[j - 1] == 0) continue;
    int g = std::gcd(static_cast<int>(j), k);
    int len = static_cast<int>(j) / g;
    out.mult[len - 1] += t.mult[j - 1] * g;
  }
  return out;
}

namespace {

// Character of Sym^k via the cycle index of S_k:
// chi_{Sym^k V}(g) = sum_{mu |- k} (1/z_mu) prod_j chi_V(g^j)^{m_j(mu)}.
Rat sym_power_char(const RepId& inner, const CycleType& t, int k) {
  Rat acc(0);
  for (const Partition& mu : enumerate_partitions(k)) {
    CycleType cm = CycleType::from_partition(mu, k);
    Int term = 1;
    Int z = 1;
    for (size_t j = 1; j <= cm.mult.size(); ++j) {
      int mj = cm.mult[j - 1];
      if (mj == 0) continue;
      Int cj = rep_character(inner, power_class(t, static_cast<int>(j)));
      for (int c = 0; c < mj; ++c) term *= cj;
      for (int c = 0; c < mj; ++c) z *= static_cast<long>(j);
      z *= factorial(mj);
    }
    acc += Rat(term) / Rat(z);
  }
  return acc;
}

}  // namespace

Int rep_character(const RepId& rep, const CycleType& t) {
  if (t.d() != rep.d) throw std::invalid_argument("rep_character: class/rep dimension mismatch");
  switch (rep.tag) {
    case RepId::Tag::perm_rd:
      return t.i(1);
    case RepId::Tag::mdd_diag: {
      Int f = t.i(1);
      return f * f;
    }
    case RepId::Tag::mdd_plus_rd: {
      Int f = t.i(1);
      return f * f + f;
    }
    case RepId::Tag::tensor_power: {
      Int c = rep_character(*rep.inner, t);
      Int out = 1;
      for (int i = 0; i < rep.power; ++i) out *= c;
      return out;
    }
    case RepId::Tag::sym_power: {
      Rat v = sym_power_char(*rep.inner, t, rep.power);
      if (v.get_den() != 1) throw std::logic_error("sym power character is not an integer");
      return v.get_num();
    }
    case RepId::Tag::ext_power: {
      Int c1 = rep_character(*rep.inner, t);
      Int c2 = rep_character(*rep.inner, power_class(t, 2));
      Int num = c1 * c1 - c2;
      if (num % 2 != 0) throw std::logic_error("ext power character is not an integer");
      return num / 2;
    }
  }
  throw std::logic_error("unreachable");
}

long long Decomposition::multiplicity_of(const Partition& lambda) const {
  for (const auto& e : entries) {
    if (e.lambda == lambda) return e.multiplicity;
  }
  return 0;
}

Decomposition decompose(const RepId& rep) {
  int d = rep.d;
  std::vector<Partition> partitions = enumerate_partitions(d);
  std::vector<CycleType> classes = enumerate_classes(d);

  std::vector<Int> rep_vals(classes.size());
  std::vector<Int> sizes(classes.size());
  for (size_t c = 0; c < classes.size(); ++c) {
    rep_vals[c] = rep_character(rep, classes[c]);
    sizes[c] = class_size(classes[c]);
  }

  Int dfact = factorial(d);
  Decomposition out;
  Int dim_check = 0;
  for (const Partition& lam : partitions) {
    Int acc = 0;
    for (size_t c = 0; c < classes.size(); ++c) {
      acc += sizes[c] * rep_vals[c] * Int(static_cast<long>(character(lam, classes[c])));
    }
    if (acc % dfact != 0) throw std::logic_error("non-integer multiplicity in decompose");
    Int mult = acc / dfact;
    if (mult < 0) throw std::logic_error("negative multiplicity in decompose");
    if (mult > 0) {
      out.entries.push_back({lam, static_cast<long long>(mult.get_si())});
      dim_check += mult * Int(static_cast<long>(irrep_degree(lam)));
    }
  }
  if (dim_check != rep.dimension()) throw std::logic_error("decomposition dimension identity failed");
  return out;
}

Eigen::VectorXd vec_rowmajor(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.rows() * m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  }
  return v;
}

Eigen::MatrixXd unvec_rowmajor(const Eigen::VectorXd& v, int d) {
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = v[i * d + j];
  }
  return m;
}

Eigen::MatrixXd perm_action_rd(const std::vector<int>& g) {
  int d = static_cast<int>(g.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) p(g[i], i) = 1.0;
  return p;
}

Eigen::MatrixXd perm_action_mdd(const std::vector<int>& g) {
  int d = static_cast<int>(g.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) p(g[i] * d + g[j], i * d + j) = 1.0;
  }
  return p;
}

namespace {

// Orthonormal basis of the sum-zero hyperplane from the fixed spanning
// sequence e_1-e_2, e_2-e_3, ...
Eigen::MatrixXd sum_zero_basis(int d) {
  Eigen::MatrixXd b(d, d - 1);
  for (int i = 0; i < d - 1; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v[i] = 1.0;
    v[i + 1] = -1.0;
    for (int j = 0; j < i; ++j) v -= b.col(j).dot(v) * b.col(j);
    b.col(i) = v / v.norm();
  }
  return b;
}

Eigen::MatrixXd gram_schmidt_columns(const std::vector<Eigen::VectorXd>& span, double drop_tol = 1e-10) {
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::VectorXd v : span) {
    for (const auto& b : basis) v -= b.dot(v) * b;
    // re-orthogonalize once for numerical hygiene
    for (const auto& b : basis) v -= b.dot(v) * b;
    double n = v.norm();
    if (n > drop_tol) basis.push_back(v / n);
  }
  Eigen::MatrixXd out(span.empty() ? 0 : span.front().size(), basis.size());
  for (size_t i = 0; i < basis.size(); ++i) out.col(i) = basis[i];
  return out;
}

std::vector<ComponentBasis> mdd_component_bases(int d) {
  if (d < 4) throw std::invalid_argument("component_bases: d >= 4 required for M(d,d)");
  std::vector<ComponentBasis> out;
  Eigen::MatrixXd h = sum_zero_basis(d);

  auto push = [&](const std::string& label, Partition lam, const Eigen::MatrixXd& basis) {
    out.push_back({label, std::move(lam), basis});
  };

  // D_{d,1}: multiples of the identity.
  {
    Eigen::MatrixXd b(d * d, 1);
    b.col(0) = vec_rowmajor(Eigen::MatrixXd::Identity(d, d)) / std::sqrt(static_cast<double>(d));
    push("D_{d,1}", Partition({d}), b);
  }
  // D_{d,2}: traceless diagonal.
  {
    Eigen::MatrixXd b(d * d, d - 1);
    for (int c = 0; c < d - 1; ++c) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      m.diagonal() = h.col(c);
      b.col(c) = vec_rowmajor(m);
    }
    push("D_{d,2}", Partition({d - 1, 1}), b);
  }
  // A_{d,1}: a_{ij} = x_i - x_j, x in the sum-zero hyperplane.
  {
    Eigen::MatrixXd b(d * d, d - 1);
    for (int c = 0; c < d - 1; ++c) {
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = h(i, c) - h(j, c);
      }
      b.col(c) = vec_rowmajor(m) / std::sqrt(2.0 * d);
    }
    push("A_{d,1}", Partition({d - 1, 1}), b);
  }
  // A_{d,2}: skew-symmetric with zero row sums; lex-ordered skew patterns
  // E_{ij}-E_{ji} projected against A_{d,1} then orthonormalized.
  {
    Eigen::MatrixXd a1(d * d, d - 1);
    for (int c = 0; c < d - 1; ++c) {
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) m(i, j) = h(i, c) - h(j, c);
      }
      a1.col(c) = vec_rowmajor(m) / std::sqrt(2.0 * d);
    }
    std::vector<Eigen::VectorXd> span;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        m(i, j) = 1.0;
        m(j, i) = -1.0;
        Eigen::VectorXd v = vec_rowmajor(m);
        v -= a1 * (a1.transpose() * v);
        span.push_back(v);
      }
    }
    Eigen::MatrixXd b = gram_schmidt_columns(span);
    if (b.cols() != (d - 1) * (d - 2) / 2) throw std::logic_error("A_{d,2} dimension mismatch");
    push("A_{d,2}", Partition({d - 2, 1, 1}), b);
  }
  // S_{d,1}: off-diagonal all-equal symmetric.
  {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(d, d) - Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd b(d * d, 1);
    b.col(0) = vec_rowmajor(m) / std::sqrt(static_cast<double>(d) * (d - 1));
    push("S_{d,1}", Partition({d}), b);
  }
  // S_{d,2}: a_{ij} = x_i + x_j off the diagonal.
  Eigen::MatrixXd s2(d * d, d - 1);
  {
    for (int c = 0; c < d - 1; ++c) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (i != j) m(i, j) = h(i, c) + h(j, c);
        }
      }
      s2.col(c) = vec_rowmajor(m) / std::sqrt(2.0 * (d - 2));
    }
    push("S_{d,2}", Partition({d - 1, 1}), s2);
  }
  // S_{d,3}: symmetric, zero diagonal, zero row sums.
  {
    Eigen::MatrixXd s1(d * d, 1);
    s1.col(0) = vec_rowmajor(Eigen::MatrixXd::Ones(d, d) - Eigen::MatrixXd::Identity(d, d)) /
                std::sqrt(static_cast<double>(d) * (d - 1));
    std::vector<Eigen::VectorXd> span;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        m(i, j) = 1.0;
        m(j, i) = 1.0;
        Eigen::VectorXd v = vec_rowmajor(m);
        v -= s1 * (s1.transpose() * v);
        v -= s2 * (s2.transpose() * v);
        span.push_back(v);
      }
    }
    Eigen::MatrixXd b = gram_schmidt_columns(span);
    if (b.cols() != d * (d - 3) / 2) throw std::logic_error("S_{d,3} dimension mismatch");
    push("S_{d,3}", Partition({d - 2, 2}), b);
  }
  return out;
}

}  // namespace

std::vector<ComponentBasis> component_bases(const RepId& rep) {
  int d = rep.d;
  switch (rep.tag) {
    case RepId::Tag::perm_rd: {
      std::vector<ComponentBasis> out;
      Eigen::MatrixXd b1(d, 1);
      b1.col(0) = Eigen::VectorXd::Ones(d) / std::sqrt(static_cast<double>(d));
      out.push_back({"R^d trivial", Partition({d}), b1});
      out.push_back({"R^d standard", Partition({d - 1, 1}), sum_zero_basis(d)});
      return out;
    }
    case RepId::Tag::mdd_diag:
      return mdd_component_bases(d);
    case RepId::Tag::mdd_plus_rd: {
      std::vector<ComponentBasis> out = mdd_component_bases(d);
      int n = d * d + d;
      for (auto& cb : out) {
        Eigen::MatrixXd ext = Eigen::MatrixXd::Zero(n, cb.basis.cols());
        ext.topRows(d * d) = cb.basis;
        cb.basis = ext;
      }
      Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(n, 1);
      b1.col(0).tail(d) = Eigen::VectorXd::Ones(d) / std::sqrt(static_cast<double>(d));
      out.push_back({"R^d trivial", Partition({d}), b1});
      Eigen::MatrixXd b2 = Eigen::MatrixXd::Zero(n, d - 1);
      b2.bottomRows(d) = sum_zero_basis(d);
      out.push_back({"R^d standard", Partition({d - 1, 1}), b2});
      return out;
    }
    default:
      throw std::invalid_argument("component_bases: explicit bases only for perm-rd, mdd, mdd+rd");
  }
}

MddSplit mdd_split(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw std::invalid_argument("mdd_split: square matrix required");
  int d = static_cast<int>(w.rows());
  MddSplit out;
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(d, d);
  diag.diagonal() = w.diagonal();
  double tr = w.trace();
  out.d1 = (tr / d) * Eigen::MatrixXd::Identity(d, d);
  out.d2 = diag - out.d1;

  Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  sym.diagonal().setZero();
  double off_mean = sym.sum() / (static_cast<double>(d) * (d - 1));
  out.s1 = off_mean * (Eigen::MatrixXd::Ones(d, d) - Eigen::MatrixXd::Identity(d, d));
  Eigen::MatrixXd srem = sym - out.s1;
  // a_{ij} = x_i + x_j with sum-zero x: row sums give (d-2) x_i.
  Eigen::VectorXd xs = srem.rowwise().sum() / (d - 2);
  out.s2 = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j) out.s2(i, j) = xs[i] + xs[j];
    }
  }
  out.s3 = srem - out.s2;

  Eigen::MatrixXd skew = 0.5 * (w - w.transpose());
  Eigen::VectorXd xa = skew.rowwise().sum() / d;
  out.a1 = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out.a1(i, j) = xa[i] - xa[j];
  }
  out.a2 = skew - out.a1;
  return out;
}

long long fixed_dim_young(const Partition& lambda, int d, int p) {
  if (p < 0 || p > d) throw std::invalid_argument("fixed_dim_young: 0 <= p <= d");
  int q = d - p;
  // (1/|H|) sum over H of chi_lambda, summed over class pairs of S_q x S_p.
  std::vector<Partition> pq = q > 0 ? enumerate_partitions(q) : std::vector<Partition>{Partition({})};
  std::vector<Partition> pp = p > 0 ? enumerate_partitions(p) : std::vector<Partition>{Partition({})};
  Int acc = 0;
  for (const Partition& a : pq) {
    Int ca = q > 0 ? class_size(CycleType::from_partition(a, q)) : Int(1);
    for (const Partition& b : pp) {
      Int cb = p > 0 ? class_size(CycleType::from_partition(b, p)) : Int(1);
      std::vector<int> lens = a.parts;
      lens.insert(lens.end(), b.parts.begin(), b.parts.end());
      std::sort(lens.rbegin(), lens.rend());
      CycleType t = CycleType::from_partition(Partition(lens), d);
      acc += ca * cb * Int(static_cast<long>(character(lambda, t)));
    }
  }
  Int order = factorial(q) * factorial(p);
  if (acc % order != 0) throw std::logic_error("fixed_dim_young: non-integer dimension");
  Int res = acc / order;
  return static_cast<long long>(res.get_si());
}

}  // namespace symtan
