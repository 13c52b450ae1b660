#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symtan/rational.hpp"

namespace symtan {

// Sparse exponent vector: (variable index, exponent) pairs, sorted by variable,
// exponents > 0. Kept sparse so that polynomials over d^2 matrix variables
// stay cheap.
using Monomial = std::vector<std::pair<int, int>>;

int monomial_degree(const Monomial& m);
Monomial monomial_from_dense(const std::vector<int>& exps);

// Multivariate polynomial with exact rational coefficients. Arithmetic is
// exact; no zero coefficients are stored. Tested envelope: degree <= 6,
// dimension <= 8 for the dense-style operations (polarization, shifts);
// orbit sums use higher variable counts but only sparse operations.
class Polynomial {
 public:
  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, const Rat& c);
  static Polynomial variable(int nvars, int var);
  static Polynomial monomial(int nvars, const Monomial& m, const Rat& c);
  // Text format: sum of `coef * x1^a1*...*xd^ad` terms, rational p/q
  // coefficients, whitespace-insensitive.
  static Polynomial parse(std::string_view text, int nvars);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial
  int num_terms() const { return static_cast<int>(terms_.size()); }
  const std::map<Monomial, Rat>& terms() const { return terms_; }
  Rat coeff(const Monomial& m) const;
  void add_term(const Monomial& m, const Rat& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rat& c) const;
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const;
  Polynomial pow(int k) const;

  bool is_homogeneous(int* deg_out = nullptr) const;
  Polynomial homogeneous_component(int k) const;

  // f(c + x) as a polynomial in x.
  Polynomial shift(const std::vector<Rat>& c) const;
  // Substitute subs[i] for variable i.
  Polynomial substitute(const std::vector<Polynomial>& subs) const;
  Polynomial partial(int var) const;
  // Relabel variables: x_i -> x_{perm[i]}.
  Polynomial permute_variables(const std::vector<int>& perm) const;

  Rat eval(const std::vector<Rat>& x) const;
  double eval(const std::vector<double>& x) const;
  std::vector<double> gradient(const std::vector<double>& x) const;

  std::string to_string() const;

 private:
  int nvars_;
  std::map<Monomial, Rat> terms_;
};

// Fully symmetric k-linear form on R^dim with exact rational entries, stored
// on sorted multi-indices only.
class SymForm {
 public:
  SymForm(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  bool is_zero() const { return entries_.empty(); }
  const std::map<std::vector<int>, Rat>& entries() const { return entries_; }

  Rat entry(std::vector<int> idx) const;        // any index order
  void set_entry(std::vector<int> idx, Rat v);  // sorts, drops zeros

  // Full application A(x_1, ..., x_k).
  Rat apply(const std::vector<std::vector<Rat>>& xs) const;
  double apply(const std::vector<std::vector<double>>& xs) const;
  // Partial application A(x_1, ..., x_{k-1}, .) as a vector.
  std::vector<double> apply_partial(const std::vector<std::vector<double>>& xs) const;

  bool operator==(const SymForm& o) const;

 private:
  int order_;
  int dim_;
  std::map<std::vector<int>, Rat> entries_;
};

// Polar form A of a homogeneous polynomial p of degree k >= 1: the unique
// symmetric k-form with A(x,...,x) = p(x). Rejects non-homogeneous input.
SymForm polarize(const Polynomial& p);

// Restitution: A |-> A(x,...,x). Round-trips with polarize.
Polynomial restitute(const SymForm& a);

// k-th derivative tensor D^k f(c) as a symmetric form (= k! times the polar
// form of the degree-k component of f shifted to c). k beyond deg f gives the
// zero form.
SymForm derivative_tensor(const Polynomial& f, const std::vector<Rat>& c, int k);

struct TaylorJet {
  std::vector<Rat> center;
  int degree = 0;
  Polynomial poly;  // in coordinates shifted to the center
};

TaylorJet taylor_truncate(const Polynomial& f, const std::vector<Rat>& c, int r);

}  // namespace symtan
