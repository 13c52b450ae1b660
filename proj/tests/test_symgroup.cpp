#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "symtan/symgroup.hpp"

using namespace symtan;

namespace {

// Independent partition-count oracle: p(n) by the standard two-variable
// recurrence on p(n, max part k).
long long partition_count(int n) {
  std::vector<std::vector<long long>> p(n + 1, std::vector<long long>(n + 1, 0));
  for (int k = 0; k <= n; ++k) p[0][k] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= n; ++k) {
      p[m][k] = p[m][k - 1] + (m >= k ? p[m - k][k] : 0);
    }
  }
  return p[n][n];
}

// Brute-force cycle type of a permutation given as images.
CycleType cycle_type_of(const std::vector<int>& g) {
  int d = static_cast<int>(g.size());
  std::vector<bool> seen(d, false);
  CycleType t;
  t.mult.assign(d, 0);
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = g[j];
      ++len;
    }
    t.mult[len - 1]++;
  }
  return t;
}

}  // namespace

TEST_CASE("partition enumeration") {
  auto p1 = enumerate_partitions(1);
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].parts == std::vector<int>{1});

  auto p4 = enumerate_partitions(4);
  REQUIRE(p4.size() == 5);
  CHECK(p4[0].parts == std::vector<int>{4});
  CHECK(p4[1].parts == std::vector<int>{3, 1});
  CHECK(p4[2].parts == std::vector<int>{2, 2});
  CHECK(p4[3].parts == std::vector<int>{2, 1, 1});
  CHECK(p4[4].parts == std::vector<int>{1, 1, 1, 1});

  CHECK(enumerate_partitions(13).size() == static_cast<size_t>(partition_count(13)));
  for (int d = 1; d <= 10; ++d) {
    auto ps = enumerate_partitions(d);
    CHECK(ps.size() == static_cast<size_t>(partition_count(d)));
    // complete + duplicate-free: sorted strictly decreasing in lex order
    for (size_t i = 1; i < ps.size(); ++i) CHECK(ps[i - 1].parts > ps[i].parts);
  }
}

TEST_CASE("class sizes") {
  CHECK(class_size(CycleType::identity(6)) == 1);

  // d = 5, one fixed point and two 2-cycles: brute force over S_5.
  std::vector<int> perm(5);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0, total = 0;
  CycleType target(std::vector<int>{1, 2, 0, 0, 0});
  do {
    ++total;
    if (cycle_type_of(perm) == target) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(total == 120);
  CHECK(class_size(target) == count);
  CHECK(count == 15);

  CHECK(class_size(CycleType(std::vector<int>{0, 0, 1})) == 2);

  for (int d = 1; d <= 8; ++d) {
    Int sum = 0;
    for (const auto& t : enumerate_classes(d)) sum += class_size(t);
    CHECK(sum == factorial(d));
  }
}

TEST_CASE("character values") {
  // Trivial representation.
  for (const auto& t : enumerate_classes(5)) CHECK(character(Partition({5}), t) == 1);

  CHECK(character(Partition({4, 1}), CycleType::identity(5)) == 4);
  CHECK(character(Partition({3, 1, 1}), CycleType(std::vector<int>{1, 2, 0, 0, 0})) == -2);

  CHECK_THROWS(character(Partition({3, 1}), CycleType::identity(5)));
}

TEST_CASE("Murnaghan-Nakayama agrees with the Frobenius coefficient formula") {
  for (int d = 1; d <= 5; ++d) {
    auto parts = enumerate_partitions(d);
    auto classes = enumerate_classes(d);
    for (const auto& lam : parts) {
      for (const auto& t : classes) {
        CHECK(character(lam, t, CharMode::mn) == character(lam, t, CharMode::frobenius));
      }
    }
  }
}

TEST_CASE("character orthogonality") {
  for (int d = 2; d <= 6; ++d) {
    auto parts = enumerate_partitions(d);
    for (size_t a = 0; a < parts.size(); ++a) {
      for (size_t b = a; b < parts.size(); ++b) {
        Rat ip = char_inner_product(
            [&](const CycleType& t) { return Int(static_cast<long>(character(parts[a], t))); },
            [&](const CycleType& t) { return Int(static_cast<long>(character(parts[b], t))); }, d);
        CHECK(ip == (a == b ? Rat(1) : Rat(0)));
      }
    }
  }
}

TEST_CASE("inner product examples") {
  // Permutation character of (R^5, S_5) contains the standard rep once.
  Rat m = char_inner_product([](const CycleType& t) { return Int(t.i(1)); },
                             [](const CycleType& t) { return Int(static_cast<long>(character(Partition({4, 1}), t))); }, 5);
  CHECK(m == Rat(1));
  Rat z = char_inner_product(
      [](const CycleType& t) { return Int(static_cast<long>(character(Partition({3, 1, 1}), t))); },
      [](const CycleType& t) { return Int(static_cast<long>(character(Partition({2, 2, 1}), t))); }, 5);
  CHECK(z == Rat(0));
}

TEST_CASE("stable characters") {
  CHECK(stable_character(Partition({1}), CycleType::identity(6)) == 5);
  CHECK(stable_character(Partition({2}), CycleType::identity(6)) == 9);
  // i = (0,3,0,...): chi_{(d-2,1,1)} = (i1-1)(i1-2)/2 - i2 = 1 - 3 = -2.
  CHECK(stable_character(Partition({1, 1}), CycleType(std::vector<int>{0, 3, 0, 0, 0, 0})) == -2);

  CHECK_THROWS(stable_character(Partition({5}), CycleType::identity(12)));
  CHECK_THROWS(stable_character(Partition({2}), CycleType::identity(3)));

  const std::vector<Partition> labels = {Partition({1}),       Partition({1, 1}),
                                         Partition({2}),       Partition({2, 1}),
                                         Partition({1, 1, 1}), Partition({3}),
                                         Partition({4}),       Partition({3, 1}),
                                         Partition({2, 2}),    Partition({2, 1, 1}),
                                         Partition({1, 1, 1, 1})};
  for (int d : {8, 9, 10}) {
    for (const auto& alpha : labels) {
      Partition padded = pad_stable(alpha, d);
      for (const auto& t : enumerate_classes(d)) {
        CHECK(stable_character(alpha, t) == character(padded, t));
      }
    }
  }
}

TEST_CASE("character table export structure") {
  CharacterTable tbl = build_character_table(4);
  REQUIRE(tbl.partitions.size() == 5);
  REQUIRE(tbl.classes.size() == 5);
  // First row is the trivial character.
  for (long long v : tbl.values[0]) CHECK(v == 1);
  // Degrees on the identity column sum of squares = d!.
  long long sq = 0;
  for (size_t r = 0; r < tbl.partitions.size(); ++r) sq += tbl.values[r][0] * tbl.values[r][0];
  CHECK(sq == 24);
}
