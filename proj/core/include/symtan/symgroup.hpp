#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symtan/rational.hpp"

namespace symtan {

// Partition of d: weakly decreasing positive parts.
struct Partition {
  std::vector<int> parts;

  Partition() = default;
  Partition(std::initializer_list<int> p) : parts(p) {}
  explicit Partition(std::vector<int> p) : parts(std::move(p)) {}

  int d() const;
  int length() const { return static_cast<int>(parts.size()); }
  bool valid() const;
  bool operator==(const Partition& o) const { return parts == o.parts; }
  bool operator<(const Partition& o) const { return parts < o.parts; }
  std::string to_string() const;  // "(3,1,1)"
};

// Conjugacy class of S_d: mult[j-1] = number of j-cycles, sum j*i_j = d.
struct CycleType {
  std::vector<int> mult;

  CycleType() = default;
  explicit CycleType(std::vector<int> m) : mult(std::move(m)) {}
  static CycleType identity(int d);
  static CycleType from_partition(const Partition& p, int d);

  int d() const;
  bool valid() const;
  int i(int j) const { return (j >= 1 && j <= static_cast<int>(mult.size())) ? mult[j - 1] : 0; }
  // Cycle lengths in decreasing order.
  std::vector<int> cycle_lengths() const;
  Partition as_partition() const;
  bool operator==(const CycleType& o) const { return mult == o.mult; }
};

// All partitions of d, decreasing-lexicographic: (d), (d-1,1), ..., (1^d).
std::vector<Partition> enumerate_partitions(int d);
// Conjugacy classes in the same order as enumerate_partitions.
std::vector<CycleType> enumerate_classes(int d);

// |C| = d! / prod_j (j^{i_j} i_j!)
Int class_size(const CycleType& t);
Int factorial(int n);

enum class CharMode { mn, frobenius };

// Irreducible character chi_lambda on the class t. The default algorithm is
// the Murnaghan-Nakayama rule; frobenius mode extracts the coefficient of
// x^l in Delta(x) * prod_j p_j(x)^{i_j} as an independent cross-check
// (intended for d <= 7).
long long character(const Partition& lambda, const CycleType& t, CharMode mode = CharMode::mn);

long long irrep_degree(const Partition& lambda);

// alpha[d] = (d - |alpha|, alpha_1, ..., alpha_m); valid for d >= |alpha| + alpha_1.
Partition pad_stable(const Partition& alpha, int d);

bool stable_label_supported(const Partition& alpha);
// Stable character polynomial in the cycle multiplicities, hard-coded for the
// eleven labels (1),(1,1),(2),(2,1),(1,1,1),(3),(4),(3,1),(2,2),(2,1,1),(1,1,1,1).
long long stable_character(const Partition& alpha, const CycleType& t);

// Exact class-function inner product (1/d!) sum_C |C| f(C) g(C).
Rat char_inner_product(const std::function<Int(const CycleType&)>& f,
                       const std::function<Int(const CycleType&)>& g, int d);

struct CharacterTable {
  int d = 0;
  std::vector<Partition> partitions;
  std::vector<CycleType> classes;
  std::vector<std::vector<long long>> values;  // values[row][class]
};

CharacterTable build_character_table(int d, CharMode mode = CharMode::mn);

}  // namespace symtan
