#include "symtan/symgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "symtan/poly.hpp"

namespace symtan {

int Partition::d() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool Partition::valid() const {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0) return false;
    if (i > 0 && parts[i] > parts[i - 1]) return false;
  }
  return true;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i];
  }
  os << ")";
  return os.str();
}

CycleType CycleType::identity(int d) {
  CycleType t;
  t.mult.assign(d, 0);
  if (d > 0) t.mult[0] = d;
  return t;
}

CycleType CycleType::from_partition(const Partition& p, int d) {
  CycleType t;
  t.mult.assign(d, 0);
  for (int part : p.parts) {
    if (part < 1 || part > d) throw std::invalid_argument("cycle length out of range");
    t.mult[part - 1]++;
  }
  if (t.d() != d) throw std::invalid_argument("cycle type does not sum to d");
  return t;
}

int CycleType::d() const {
  int s = 0;
  for (size_t j = 0; j < mult.size(); ++j) s += static_cast<int>(j + 1) * mult[j];
  return s;
}

bool CycleType::valid() const {
  for (int m : mult) {
    if (m < 0) return false;
  }
  return d() == static_cast<int>(mult.size()) || true;
}

std::vector<int> CycleType::cycle_lengths() const {
  std::vector<int> out;
  for (int j = static_cast<int>(mult.size()); j >= 1; --j) {
    for (int c = 0; c < mult[j - 1]; ++c) out.push_back(j);
  }
  return out;
}

Partition CycleType::as_partition() const { return Partition(cycle_lengths()); }

namespace {

void enum_parts_rec(int remaining, int max_part, std::vector<int>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    enum_parts_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int d) {
  if (d < 1) throw std::invalid_argument("enumerate_partitions: d >= 1 required");
  std::vector<Partition> out;
  std::vector<int> cur;
  enum_parts_rec(d, d, cur, out);
  return out;
}

std::vector<CycleType> enumerate_classes(int d) {
  std::vector<CycleType> out;
  for (const Partition& p : enumerate_partitions(d)) out.push_back(CycleType::from_partition(p, d));
  return out;
}

Int factorial(int n) {
  Int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Int class_size(const CycleType& t) {
  int d = t.d();
  Int denom = 1;
  for (size_t j = 1; j <= t.mult.size(); ++j) {
    int ij = t.mult[j - 1];
    for (int c = 0; c < ij; ++c) denom *= static_cast<long>(j);
    denom *= factorial(ij);
  }
  Int num = factorial(d);
  Int q = num / denom;
  return q;
}

// ---------------------------------------------------------------------------
// Murnaghan-Nakayama via beta-numbers. Removing a border strip of length l
// from lambda corresponds to moving a beta number b to b-l (b-l must be free);
// the sign is (-1)^(number of beta numbers strictly between b-l and b).

namespace {

using Beta = std::vector<int>;  // strictly decreasing

Beta to_beta(const Partition& lam) {
  int m = lam.length();
  Beta b(m);
  for (int i = 0; i < m; ++i) b[i] = lam.parts[i] + (m - 1 - i);
  return b;
}

struct MNKey {
  Beta beta;
  size_t cycle_pos;
  bool operator<(const MNKey& o) const {
    if (cycle_pos != o.cycle_pos) return cycle_pos < o.cycle_pos;
    return beta < o.beta;
  }
};

long long mn_rec(const Beta& beta, const std::vector<int>& cycles, size_t pos,
                 std::map<MNKey, long long>& memo) {
  if (pos == cycles.size()) return 1;  // empty partition, empty permutation
  MNKey key{beta, pos};
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  int l = cycles[pos];
  long long total = 0;
  for (size_t i = 0; i < beta.size(); ++i) {
    int target = beta[i] - l;
    if (target < 0) continue;
    bool occupied = false;
    int between = 0;
    for (size_t j = 0; j < beta.size(); ++j) {
      if (j == i) continue;
      if (beta[j] == target) {
        occupied = true;
        break;
      }
      if (beta[j] > target && beta[j] < beta[i]) ++between;
    }
    if (occupied) continue;
    Beta nb = beta;
    nb[i] = target;
    std::sort(nb.rbegin(), nb.rend());
    long long sub = mn_rec(nb, cycles, pos + 1, memo);
    total += (between % 2 == 0 ? sub : -sub);
  }
  memo[key] = total;
  return total;
}

long long character_mn(const Partition& lambda, const CycleType& t) {
  std::vector<int> cycles = t.cycle_lengths();  // decreasing
  Beta beta = to_beta(lambda);
  std::map<MNKey, long long> memo;
  return mn_rec(beta, cycles, 0, memo);
}

// Frobenius formula: coefficient of x^(l_1,...,l_k) in
// Delta(x) prod_j p_j(x)^{i_j}, with k = len(lambda), l_j = lambda_j + k - j.
// Exponents above l are pruned during expansion.
long long character_frobenius(const Partition& lambda, const CycleType& t) {
  int k = lambda.length();
  std::vector<int> l(k);
  for (int i = 0; i < k; ++i) l[i] = lambda.parts[i] + (k - 1 - i);

  auto prune = [&](const Polynomial& p) {
    Polynomial out(k);
    for (const auto& [m, c] : p.terms()) {
      bool keep = true;
      for (const auto& [v, e] : m) {
        if (e > l[v]) {
          keep = false;
          break;
        }
      }
      if (keep) out.add_term(m, c);
    }
    return out;
  };

  // Vandermonde via expansion of the product (exact, k <= 7 intended)
  Polynomial delta = Polynomial::constant(k, 1);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      Polynomial diff = Polynomial::variable(k, a) - Polynomial::variable(k, b);
      delta = prune(delta * diff);
    }
  }
  Polynomial acc = delta;
  for (size_t j = 1; j <= t.mult.size(); ++j) {
    if (t.mult[j - 1] == 0) continue;
    Polynomial pj(k);
    for (int v = 0; v < k; ++v) pj.add_term({{v, static_cast<int>(j)}}, 1);
    for (int c = 0; c < t.mult[j - 1]; ++c) acc = prune(acc * pj);
  }
  Monomial target;
  for (int v = 0; v < k; ++v) {
    if (l[v] > 0) target.emplace_back(v, l[v]);
  }
  Rat coef = acc.coeff(target);
  if (coef.get_den() != 1) throw std::logic_error("frobenius: non-integer character");
  return static_cast<long long>(coef.get_num().get_si());
}

}  // namespace

long long character(const Partition& lambda, const CycleType& t, CharMode mode) {
  if (!lambda.valid() || lambda.parts.empty()) throw std::invalid_argument("invalid partition");
  if (lambda.d() != t.d()) throw std::invalid_argument("partition and class have different d");
  return mode == CharMode::mn ? character_mn(lambda, t) : character_frobenius(lambda, t);
}

long long irrep_degree(const Partition& lambda) {
  return character(lambda, CycleType::identity(lambda.d()));
}

Partition pad_stable(const Partition& alpha, int d) {
  int head = d - alpha.d();
  if (alpha.parts.empty()) return Partition({head});
  if (head < alpha.parts.front()) throw std::invalid_argument("d below stabilization threshold for this label");
  std::vector<int> parts;
  parts.push_back(head);
  parts.insert(parts.end(), alpha.parts.begin(), alpha.parts.end());
  return Partition(parts);
}

namespace {

const std::vector<std::vector<int>> kStableLabels = {
    {1}, {1, 1}, {2}, {2, 1}, {1, 1, 1}, {3}, {4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};

}  // namespace

bool stable_label_supported(const Partition& alpha) {
  for (const auto& l : kStableLabels) {
    if (alpha.parts == l) return true;
  }
  return false;
}

long long stable_character(const Partition& alpha, const CycleType& t) {
  if (!stable_label_supported(alpha)) throw std::invalid_argument("unsupported stable label " + alpha.to_string());
  int d = t.d();
  if (d < alpha.d() + (alpha.parts.empty() ? 0 : alpha.parts.front())) {
    throw std::invalid_argument("d below stabilization threshold");
  }
  // Exact evaluation in rationals; every polynomial below takes integer
  // values on cycle types.
  Rat i1 = t.i(1), i2 = t.i(2), i3 = t.i(3), i4 = t.i(4);
  Rat v;
  const auto& a = alpha.parts;
  if (a == std::vector<int>{1}) {
    v = i1 - 1;
  } else if (a == std::vector<int>{1, 1}) {
    v = (i1 - 1) * (i1 - 2) / 2 - i2;
  } else if (a == std::vector<int>{2}) {
    v = (i1 - 1) * (i1 - 2) / 2 + i2 - 1;
  } else if (a == std::vector<int>{3}) {
    v = i1 * (i1 - 1) * (i1 - 5) / 6 + i2 * (i1 - 1) + i3;
  } else if (a == std::vector<int>{2, 1}) {
    v = i1 * (i1 - 4) * (i1 - 2) / 3 - i3;
  } else if (a == std::vector<int>{1, 1, 1}) {
    v = -i2 * (i1 - 1) + i3 + (i1 - 1) * (i1 - 3) * (i1 - 2) / 6;
  } else if (a == std::vector<int>{4}) {
    v = i1 * i2 * (i1 - 3) / 2 + i1 * (i1 - 7) * (i1 - 2) * (i1 - 1) / 24 + i2 * (i2 - 1) / 2 +
        i3 * (i1 - 1) + i4;
  } else if (a == std::vector<int>{3, 1}) {
    v = i1 * i2 * (i1 - 3) / 2 + i1 * (i1 - 6) * (i1 - 3) * (i1 - 1) / 8 - i2 * (i2 - 3) / 2 - i4;
  } else if (a == std::vector<int>{2, 2}) {
    v = i1 * (i1 - 5) * (i1 - 4) * (i1 - 1) / 12 + i2 * (i2 - 2) - i3 * (i1 - 1);
  } else if (a == std::vector<int>{2, 1, 1}) {
    v = -i1 * i2 * (i1 - 3) / 2 + i1 * (i1 - 5) * (i1 - 3) * (i1 - 2) / 8 - i2 * (i2 - 1) / 2 + i4;
  } else {  // (1,1,1,1)
    v = -i2 * (i1 - 1) * (i1 - 2) / 2 + i2 * (i2 - 1) / 2 + i3 * (i1 - 1) - i4 +
        (i1 - 1) * (i1 - 4) * (i1 - 3) * (i1 - 2) / 24;
  }
  if (v.get_den() != 1) throw std::logic_error("stable character evaluated to a non-integer");
  return static_cast<long long>(v.get_num().get_si());
}

Rat char_inner_product(const std::function<Int(const CycleType&)>& f,
                       const std::function<Int(const CycleType&)>& g, int d) {
  Int acc = 0;
  for (const CycleType& t : enumerate_classes(d)) {
    acc += class_size(t) * f(t) * g(t);
  }
  Rat r(acc);
  r /= Rat(factorial(d));
  return r;
}

CharacterTable build_character_table(int d, CharMode mode) {
  CharacterTable tbl;
  tbl.d = d;
  tbl.partitions = enumerate_partitions(d);
  tbl.classes = enumerate_classes(d);
  tbl.values.resize(tbl.partitions.size());
  for (size_t r = 0; r < tbl.partitions.size(); ++r) {
    tbl.values[r].resize(tbl.classes.size());
    for (size_t c = 0; c < tbl.classes.size(); ++c) {
      tbl.values[r][c] = character(tbl.partitions[r], tbl.classes[c], mode);
    }
  }
  return tbl;
}

}  // namespace symtan
