#include "symtan/invariants.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace symtan {

int MddMonomial::degree() const {
  int d = 0;
  for (const auto& [ij, e] : factors) d += e;
  return d;
}

std::vector<int> MddMonomial::distinct_indices() const {
  std::set<int> s;
  for (const auto& [ij, e] : factors) {
    s.insert(ij.first);
    s.insert(ij.second);
  }
  return {s.begin(), s.end()};
}

namespace {

MddMonomial relabeled(const MddMonomial& m, const std::map<int, int>& relabel) {
  MddMonomial out;
  std::map<std::pair<int, int>, int> acc;
  for (const auto& [ij, e] : m.factors) {
    acc[{relabel.at(ij.first), relabel.at(ij.second)}] += e;
  }
  for (const auto& [ij, e] : acc) out.factors.emplace_back(ij, e);
  return out;
}

}  // namespace

MddMonomial MddMonomial::canonical() const {
  std::vector<int> idx = distinct_indices();
  std::vector<int> target(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) target[i] = static_cast<int>(i) + 1;
  std::vector<int> perm = target;
  bool have_best = false;
  MddMonomial best;
  // Try every assignment of the distinct indices to 1..m, keep the lex-least.
  std::sort(perm.begin(), perm.end());
  do {
    std::map<int, int> relabel;
    for (size_t i = 0; i < idx.size(); ++i) relabel[idx[i]] = perm[i];
    MddMonomial cand = relabeled(*this, relabel);
    if (!have_best || cand < best) {
      best = cand;
      have_best = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string MddMonomial::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [ij, e] : factors) {
    if (!first) os << "*";
    first = false;
    os << "w" << ij.first << ij.second;
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

MddMonomial parse_mdd_monomial(const std::string& s) {
  MddMonomial m;
  size_t pos = 0;
  std::map<std::pair<int, int>, int> acc;
  while (pos < s.size()) {
    if (s[pos] == '*') {
      ++pos;
      continue;
    }
    if (s[pos] != 'w' || pos + 2 >= s.size()) throw std::invalid_argument("bad mdd monomial: " + s);
    int i = s[pos + 1] - '0';
    int j = s[pos + 2] - '0';
    pos += 3;
    int e = 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      e = std::stoi(s.substr(start, pos - start));
    }
    acc[{i, j}] += e;
  }
  for (const auto& [ij, e] : acc) m.factors.emplace_back(ij, e);
  return m;
}

Polynomial monomial_symmetric(const Partition& lambda, int d) {
  if (lambda.length() > d) throw std::invalid_argument("monomial_symmetric: partition longer than d");
  std::vector<int> exps(d, 0);
  for (int i = 0; i < lambda.length(); ++i) exps[i] = lambda.parts[i];
  std::sort(exps.begin(), exps.end());
  Polynomial out(d);
  do {
    Monomial m;
    for (int v = 0; v < d; ++v) {
      if (exps[v] > 0) m.emplace_back(v, exps[v]);
    }
    out.add_term(m, 1);
  } while (std::next_permutation(exps.begin(), exps.end()));
  return out;
}

OrbitSum orbit_sum_perm(const std::vector<int>& seed_exponents, int d) {
  if (static_cast<int>(seed_exponents.size()) > d) throw std::invalid_argument("orbit seed uses too many variables");
  std::vector<int> sorted = seed_exponents;
  std::sort(sorted.rbegin(), sorted.rend());
  while (!sorted.empty() && sorted.back() == 0) sorted.pop_back();
  OrbitSum os;
  os.poly = monomial_symmetric(Partition(sorted), d);
  std::ostringstream name;
  name << "S_d";
  for (size_t i = 0; i < seed_exponents.size(); ++i) {
    if (seed_exponents[i] == 0) continue;
    name << " x" << (i + 1);
    if (seed_exponents[i] > 1) name << "^" << seed_exponents[i];
  }
  os.seed_name = name.str();
  return os;
}

namespace {

// Injective maps from 1..m into 1..d, applied to the seed; the orbit is the
// set of distinct images.
void enumerate_images(const MddMonomial& seed, int d, const std::vector<int>& idx,
                      std::vector<int>& image, std::vector<bool>& used, size_t depth,
                      std::set<std::vector<std::pair<std::pair<int, int>, int>>>& monomials) {
  if (depth == idx.size()) {
    std::map<int, int> relabel;
    for (size_t i = 0; i < idx.size(); ++i) relabel[idx[i]] = image[i];
    monomials.insert(relabeled(seed, relabel).factors);
    return;
  }
  for (int v = 1; v <= d; ++v) {
    if (used[v]) continue;
    used[v] = true;
    image[depth] = v;
    enumerate_images(seed, d, idx, image, used, depth + 1, monomials);
    used[v] = false;
  }
}

}  // namespace

OrbitSum orbit_sum_mdd(const MddMonomial& seed, int d) {
  std::vector<int> idx = seed.distinct_indices();
  if (static_cast<int>(idx.size()) > d) throw std::invalid_argument("orbit seed needs more symbols than d");
  std::set<std::vector<std::pair<std::pair<int, int>, int>>> monomials;
  std::vector<int> image(idx.size());
  std::vector<bool> used(d + 1, false);
  enumerate_images(seed, d, idx, image, used, 0, monomials);

  OrbitSum os;
  os.seed_name = "S_d " + seed.to_string();
  os.poly = Polynomial(d * d);
  for (const auto& factors : monomials) {
    Monomial m;
    for (const auto& [ij, e] : factors) {
      m.emplace_back((ij.first - 1) * d + (ij.second - 1), e);
    }
    std::sort(m.begin(), m.end());
    os.poly.add_term(m, 1);
  }
  return os;
}

namespace {

void enumerate_mdd_monomials(int degree, int max_index,
                             std::vector<std::pair<int, int>>& current, int min_var,
                             std::set<MddMonomial>& canon) {
  if (static_cast<int>(current.size()) == degree) {
    MddMonomial m;
    std::map<std::pair<int, int>, int> acc;
    for (const auto& ij : current) acc[ij]++;
    for (const auto& [ij, e] : acc) m.factors.emplace_back(ij, e);
    canon.insert(m.canonical());
    return;
  }
  int nvar = max_index * max_index;
  for (int v = min_var; v < nvar; ++v) {
    current.emplace_back(v / max_index + 1, v % max_index + 1);
    enumerate_mdd_monomials(degree, max_index, current, v, canon);
    current.pop_back();
  }
}

const std::vector<std::string> kPrintedQuadraticSeeds = {
    "w11*w23", "w12*w21", "w12^2", "w11*w21", "w11^2", "w12*w23",
    "w11*w12", "w12*w32", "w11*w22", "w12*w34", "w12*w13"};

const std::vector<std::string> kPrintedCubicSeeds = {
    "w11*w23*w45", "w11*w23*w24", "w11*w12*w33", "w12*w21*w31", "w11*w12*w22",
    "w12*w13*w42", "w11*w21*w31", "w11*w12*w13", "w12*w23*w45", "w12^2*w32",
    "w12*w13*w41", "w11*w12*w31", "w12^2*w34", "w12^2*w31", "w11*w21^2",
    "w12*w32*w45", "w12*w21*w34", "w12*w23*w42", "w11*w23*w43", "w11*w21*w34",
    "w11*w21*w32", "w11*w12*w34", "w11*w12*w32", "w11*w12^2", "w12*w23*w43",
    "w11^2*w23", "w12*w34*w56", "w12^2*w21", "w11^2*w22", "w11*w21*w23",
    "w12*w32*w42", "w11*w12*w23", "w11*w12*w21", "w11*w22*w33", "w12*w23*w31",
    "w11*w23*w34", "w11*w23*w32", "w11^3", "w12*w13*w21", "w12^2*w23",
    "w11*w23^2", "w12*w13*w23", "w12^2*w13", "w12*w23*w34", "w12^3",
    "w11^2*w21", "w12*w13*w45", "w12*w13*w24", "w11*w22*w34", "w11*w21*w33",
    "w11^2*w12", "w12*w13*w14"};

// Exact Gaussian elimination rank of a rational matrix.
int exact_rank(std::vector<std::vector<Rat>> m) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[rank][c];
      for (int cc = c; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<MddMonomial> canonical_mdd_seeds(int degree) {
  if (degree != 2 && degree != 3) throw std::invalid_argument("mdd seeds: degree 2 or 3 only");
  std::set<MddMonomial> canon;
  std::vector<std::pair<int, int>> current;
  enumerate_mdd_monomials(degree, 2 * degree, current, 0, canon);
  return {canon.begin(), canon.end()};
}

const std::vector<std::string>& printed_mdd_seeds(int degree) {
  if (degree == 2) return kPrintedQuadraticSeeds;
  if (degree == 3) return kPrintedCubicSeeds;
  throw std::invalid_argument("printed seeds: degree 2 or 3 only");
}

InvariantBasis invariant_basis(const RepId& rep, int degree) {
  if (degree != 2 && degree != 3) throw std::invalid_argument("invariant_basis: degree must be 2 or 3");
  InvariantBasis out;
  out.rep = rep;
  out.degree = degree;
  int d = rep.d;
  if (rep.tag == RepId::Tag::perm_rd) {
    if (d < 3) throw std::invalid_argument("invariant_basis(perm-rd): d >= 3 required");
    std::vector<Partition> lambdas =
        degree == 2 ? std::vector<Partition>{Partition({2}), Partition({1, 1})}
                    : std::vector<Partition>{Partition({3}), Partition({2, 1}), Partition({1, 1, 1})};
    for (const Partition& lam : lambdas) {
      std::vector<int> exps(lam.parts.begin(), lam.parts.end());
      out.elements.push_back(orbit_sum_perm(exps, d));
    }
  } else if (rep.tag == RepId::Tag::mdd_diag) {
    int threshold = degree == 2 ? 8 : 12;
    if (d < threshold) {
      throw std::invalid_argument("invariant_basis(mdd): d below stabilization threshold " +
                                  std::to_string(threshold));
    }
    for (const MddMonomial& seed : canonical_mdd_seeds(degree)) {
      out.elements.push_back(orbit_sum_mdd(seed, d));
    }
  } else {
    throw std::invalid_argument("invariant_basis: rep must be perm-rd or mdd");
  }

  // Independence certificate: restrict each orbit sum to the columns given by
  // the seed monomials of all elements, then take the exact rank. Orbits
  // partition the monomials, so this square submatrix already has full rank.
  std::vector<Monomial> seed_cols;
  for (const auto& el : out.elements) {
    seed_cols.push_back(el.poly.terms().begin()->first);
  }
  std::vector<std::vector<Rat>> m(out.elements.size(), std::vector<Rat>(seed_cols.size(), Rat(0)));
  for (size_t r = 0; r < out.elements.size(); ++r) {
    for (size_t c = 0; c < seed_cols.size(); ++c) m[r][c] = out.elements[r].poly.coeff(seed_cols[c]);
  }
  if (exact_rank(std::move(m)) != static_cast<int>(out.elements.size())) {
    throw std::logic_error("invariant_basis: elements are not linearly independent");
  }
  return out;
}

Int generator_degree_bound(const RepId& rep) {
  if (rep.tag != RepId::Tag::perm_rd && rep.tag != RepId::Tag::mdd_diag &&
      rep.tag != RepId::Tag::mdd_plus_rd) {
    throw std::invalid_argument("generator_degree_bound: permutation representations only");
  }
  Int n = rep.dimension();
  Int pairs = n * (n - 1) / 2;
  return std::max(n, pairs);
}

}  // namespace symtan
