#include <random>

#include "doctest.h"
#include "symtan/poly.hpp"

using namespace symtan;

namespace {

Polynomial random_homogeneous(std::mt19937_64& rng, int nvars, int deg, int terms) {
  std::uniform_int_distribution<int> var(0, nvars - 1);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  Polynomial p(nvars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> exps(nvars, 0);
    for (int i = 0; i < deg; ++i) exps[var(rng)]++;
    p.add_term(monomial_from_dense(exps), Rat(num(rng), den(rng)));
  }
  return p.homogeneous_component(deg);
}

std::vector<Rat> random_rat_vector(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  std::vector<Rat> v(n);
  for (int i = 0; i < n; ++i) v[i] = Rat(num(rng), den(rng));
  return v;
}

// Independent oracle for the polar form: expand p(l_1 x_1 + ... + l_k x_k)
// symbolically in the l-variables and read off the coefficient of l_1...l_k.
Rat polar_oracle(const Polynomial& p, const std::vector<std::vector<Rat>>& xs) {
  int k = static_cast<int>(xs.size());
  std::vector<Polynomial> subs;
  for (int v = 0; v < p.nvars(); ++v) {
    Polynomial lin(k);
    for (int slot = 0; slot < k; ++slot) lin.add_term({{slot, 1}}, xs[slot][v]);
    subs.push_back(lin);
  }
  Polynomial q = p.substitute(subs);
  Monomial target;
  for (int slot = 0; slot < k; ++slot) target.emplace_back(slot, 1);
  return q.coeff(target);
}

}  // namespace

TEST_CASE("parse and print round trip") {
  Polynomial p = Polynomial::parse("x1^4 + x1^2*x2^2 + x2^4 - 2*x1^2 - 2*x2^2", 2);
  CHECK(p.degree() == 4);
  CHECK(p.num_terms() == 5);
  Polynomial q = Polynomial::parse(p.to_string(), 2);
  CHECK(p == q);

  Polynomial r = Polynomial::parse("  1/3 * x1^3+ 2 *x2 -x1*x2 ", 2);
  CHECK(r.coeff({{0, 3}}) == Rat(1, 3));
  CHECK(r.coeff({{1, 1}}) == Rat(2));
  CHECK(r.coeff({{0, 1}, {1, 1}}) == Rat(-1));

  CHECK_THROWS(Polynomial::parse("x3", 2));
  CHECK_THROWS(Polynomial::parse("1 + + ", 2));
}

TEST_CASE("exact arithmetic") {
  Polynomial a = Polynomial::parse("1/3*x1", 1);
  Polynomial b = Polynomial::parse("1/6*x1", 1);
  CHECK((a + b).coeff({{0, 1}}) == Rat(1, 2));
  Polynomial prod = a * b;
  CHECK(prod.coeff({{0, 2}}) == Rat(1, 18));
  CHECK((a - a).is_zero());
}

TEST_CASE("polarize 1-d square") {
  Polynomial p = Polynomial::parse("x1^2", 1);
  SymForm a = polarize(p);
  CHECK(a.entry({0, 0}) == Rat(1));
  CHECK(restitute(a) == p);
}

TEST_CASE("polarize sum of off-diagonal products, d = 3") {
  Polynomial p = Polynomial::parse("x1*x2 + x1*x3 + x2*x3", 3);
  SymForm a = polarize(p);
  CHECK(a.entry({0, 1}) == Rat(1, 2));
  CHECK(a.entry({0, 2}) == Rat(1, 2));
  CHECK(a.entry({1, 2}) == Rat(1, 2));
  CHECK(a.entry({0, 0}) == Rat(0));
  // Cross-check against the lambda-derivative expansion.
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::vector<Rat>> xs = {random_rat_vector(rng, 3), random_rat_vector(rng, 3)};
    CHECK(a.apply(xs) == polar_oracle(p, xs));
  }
}

TEST_CASE("polarize cube sum") {
  Polynomial p = Polynomial::parse("1/3*x1^3 + 1/3*x2^3 + 1/3*x3^3", 3);
  SymForm a = polarize(p);
  for (int i = 0; i < 3; ++i) CHECK(a.entry({i, i, i}) == Rat(1, 3));
  CHECK(a.entry({0, 0, 1}) == Rat(0));
  CHECK(a.entry({0, 1, 2}) == Rat(0));
}

TEST_CASE("polarize matches the lambda-derivative oracle on random forms") {
  std::mt19937_64 rng(2024);
  for (int deg = 2; deg <= 4; ++deg) {
    for (int nvars = 1; nvars <= 3; ++nvars) {
      Polynomial p = random_homogeneous(rng, nvars, deg, 6);
      if (p.is_zero()) continue;
      SymForm a = polarize(p);
      std::vector<std::vector<Rat>> xs;
      for (int s = 0; s < deg; ++s) xs.push_back(random_rat_vector(rng, nvars));
      CHECK(a.apply(xs) == polar_oracle(p, xs));
    }
  }
}

TEST_CASE("restitute of polarize is the identity (degree <= 6, dim <= 8)") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    int deg = 1 + static_cast<int>(rng() % 6);
    int nvars = 1 + static_cast<int>(rng() % 8);
    Polynomial p = random_homogeneous(rng, nvars, deg, 10);
    if (p.is_zero()) continue;
    CHECK(restitute(polarize(p)) == p);
  }
}

TEST_CASE("polarize rejects non-homogeneous input") {
  Polynomial p = Polynomial::parse("x1^2 + x1", 1);
  CHECK_THROWS(polarize(p));
}

TEST_CASE("derivative tensor basics") {
  Polynomial f = Polynomial::parse("x1^2 + x2^2", 2);
  SymForm d2 = derivative_tensor(f, {Rat(0), Rat(0)}, 2);
  CHECK(d2.entry({0, 0}) == Rat(2));
  CHECK(d2.entry({1, 1}) == Rat(2));
  CHECK(d2.entry({0, 1}) == Rat(0));

  Polynomial h = Polynomial::parse("x1^4 + x1^2*x2^2 + x2^4 - 2*x1^2 - 2*x2^2", 2);
  SymForm hh = derivative_tensor(h, {Rat(0), Rat(0)}, 2);
  CHECK(hh.entry({0, 0}) == Rat(-4));
  CHECK(hh.entry({1, 1}) == Rat(-4));
  CHECK(hh.entry({0, 1}) == Rat(0));
  CHECK(derivative_tensor(h, {Rat(0), Rat(0)}, 3).is_zero());

  CHECK_THROWS(derivative_tensor(f, {Rat(0)}, 2));
}

TEST_CASE("derivative tensor vs finite differences for the gradient") {
  std::mt19937_64 rng(5);
  Polynomial f = Polynomial::parse("x1^3 - 2*x1*x2^2 + x2^4 + x1*x2", 2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Rat> c = random_rat_vector(rng, 2);
    SymForm d1 = derivative_tensor(f, c, 1);
    std::vector<double> cd = {to_double(c[0]), to_double(c[1])};
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
      std::vector<double> p = cd, m = cd;
      p[i] += h;
      m[i] -= h;
      double fd = (f.eval(p) - f.eval(m)) / (2 * h);
      double an = to_double(d1.entry({i}));
      CHECK(std::abs(fd - an) < 1e-8 * (1.0 + std::abs(an)) + 1e-8);
    }
  }
}

TEST_CASE("taylor truncation") {
  // g_d with d = 3: degree-2 jet at 0 is the isotropic quadratic.
  Polynomial g(3);
  for (int i = 0; i < 3; ++i) {
    g.add_term({{i, 2}}, Rat(1, 2));
    g.add_term({{i, 3}}, Rat(1, 3));
  }
  TaylorJet jet = taylor_truncate(g, {Rat(0), Rat(0), Rat(0)}, 2);
  Polynomial expect(3);
  for (int i = 0; i < 3; ++i) expect.add_term({{i, 2}}, Rat(1, 2));
  CHECK(jet.poly == expect);

  // r >= deg returns the function itself.
  TaylorJet full = taylor_truncate(g, {Rat(0), Rat(0), Rat(0)}, 7);
  CHECK(full.poly == g);

  // h about the saddle (1,0), r = 3: independent shift oracle.
  Polynomial h = Polynomial::parse("x1^4 + x1^2*x2^2 + x2^4 - 2*x1^2 - 2*x2^2", 2);
  TaylorJet j3 = taylor_truncate(h, {Rat(1), Rat(0)}, 3);
  Polynomial shifted = h.shift({Rat(1), Rat(0)});
  Polynomial oracle(2);
  for (const auto& [m, c] : shifted.terms()) {
    if (monomial_degree(m) <= 3) oracle.add_term(m, c);
  }
  CHECK(j3.poly == oracle);
  CHECK(j3.poly.coeff({}) == Rat(-1));
  CHECK(j3.poly.coeff({{0, 2}}) == Rat(4));
  CHECK(j3.poly.coeff({{1, 2}}) == Rat(-1));
  CHECK(j3.poly.coeff({{0, 3}}) == Rat(4));
  CHECK(j3.poly.coeff({{0, 1}, {1, 2}}) == Rat(2));
  CHECK(j3.poly.coeff({{0, 1}}) == Rat(0));

  // Truncation is idempotent.
  TaylorJet twice = taylor_truncate(j3.poly, {Rat(0), Rat(0)}, 3);
  CHECK(twice.poly == j3.poly);
}

TEST_CASE("evaluation") {
  Polynomial h = Polynomial::parse("x1^4 + x1^2*x2^2 + x2^4 - 2*x1^2 - 2*x2^2", 2);
  CHECK(h.eval(std::vector<Rat>{Rat(1), Rat(0)}) == Rat(-1));
  CHECK(h.eval(std::vector<Rat>{Rat(0), Rat(0)}) == Rat(0));

  // 3 A_3 x^2 for the cube-sum form at x = (1,2).
  Polynomial p = Polynomial::parse("1/3*x1^3 + 1/3*x2^3", 2);
  SymForm a3 = polarize(p);
  std::vector<double> x = {1.0, 2.0};
  std::vector<double> applied = a3.apply_partial({x, x});
  CHECK(3.0 * applied[0] == doctest::Approx(1.0));
  CHECK(3.0 * applied[1] == doctest::Approx(4.0));

  CHECK_THROWS(h.eval(std::vector<Rat>{Rat(1)}));
}
