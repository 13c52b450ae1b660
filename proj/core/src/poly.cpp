#include "symtan/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace symtan {

Rat rat_from_string(std::string_view s) {
  std::string t(s);
  mpq_class q;
  if (q.set_str(t, 10) != 0) {
    throw std::invalid_argument("bad rational literal: " + t);
  }
  q.canonicalize();
  return q;
}

std::string rat_to_string(const Rat& q) { return q.get_str(); }

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

Monomial monomial_from_dense(const std::vector<int>& exps) {
  Monomial m;
  for (int i = 0; i < static_cast<int>(exps.size()); ++i) {
    if (exps[i] != 0) m.emplace_back(i, exps[i]);
  }
  return m;
}

namespace {

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else if (a[i].first > b[j].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

void check_var(int nvars, int var) {
  if (var < 0 || var >= nvars) throw std::out_of_range("variable index out of range");
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw std::invalid_argument("nvars must be >= 0");
}

Polynomial Polynomial::constant(int nvars, const Rat& c) {
  Polynomial p(nvars);
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  check_var(nvars, var);
  Polynomial p(nvars);
  p.add_term({{var, 1}}, 1);
  return p;
}

Polynomial Polynomial::monomial(int nvars, const Monomial& m, const Rat& c) {
  Polynomial p(nvars);
  for (const auto& [v, e] : m) {
    check_var(nvars, v);
    if (e <= 0) throw std::invalid_argument("monomial exponents must be positive");
  }
  p.add_term(m, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

Rat Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("nvars mismatch");
  Polynomial out(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      out.add_term(monomial_mul(ma, mb), ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::operator*(const Rat& c) const {
  Polynomial out(nvars_);
  if (c == 0) return out;
  for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
  return out;
}

Polynomial Polynomial::operator-() const { return *this * Rat(-1); }

bool Polynomial::operator==(const Polynomial& o) const {
  return nvars_ == o.nvars_ && terms_ == o.terms_;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  Polynomial out = Polynomial::constant(nvars_, 1);
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

bool Polynomial::is_homogeneous(int* deg_out) const {
  if (terms_.empty()) {
    if (deg_out) *deg_out = -1;
    return true;
  }
  int d = monomial_degree(terms_.begin()->first);
  for (const auto& [m, c] : terms_) {
    if (monomial_degree(m) != d) return false;
  }
  if (deg_out) *deg_out = d;
  return true;
}

Polynomial Polynomial::homogeneous_component(int k) const {
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (monomial_degree(m) == k) out.terms_.emplace(m, c);
  }
  return out;
}

Polynomial Polynomial::shift(const std::vector<Rat>& c) const {
  if (static_cast<int>(c.size()) != nvars_) throw std::invalid_argument("center dimension mismatch");
  std::vector<Polynomial> subs;
  subs.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    Polynomial s = Polynomial::variable(nvars_, i);
    s.add_term({}, c[i]);
    subs.push_back(std::move(s));
  }
  return substitute(subs);
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs) const {
  if (static_cast<int>(subs.size()) != nvars_) throw std::invalid_argument("substitution arity mismatch");
  int out_vars = subs.empty() ? nvars_ : subs.front().nvars();
  Polynomial out(out_vars);
  for (const auto& [m, coef] : terms_) {
    Polynomial term = Polynomial::constant(out_vars, coef);
    for (const auto& [v, e] : m) term = term * subs[v].pow(e);
    out = out + term;
  }
  return out;
}

Polynomial Polynomial::partial(int var) const {
  check_var(nvars_, var);
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i].first != var) continue;
      Monomial dm = m;
      int e = dm[i].second;
      if (e == 1) {
        dm.erase(dm.begin() + i);
      } else {
        dm[i].second = e - 1;
      }
      out.add_term(dm, c * e);
      break;
    }
  }
  return out;
}

Polynomial Polynomial::permute_variables(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != nvars_) throw std::invalid_argument("permutation size mismatch");
  Polynomial out(nvars_);
  for (const auto& [m, c] : terms_) {
    Monomial pm;
    pm.reserve(m.size());
    for (const auto& [v, e] : m) pm.emplace_back(perm[v], e);
    std::sort(pm.begin(), pm.end());
    out.add_term(pm, c);
  }
  return out;
}

Rat Polynomial::eval(const std::vector<Rat>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("eval arity mismatch");
  Rat acc(0);
  for (const auto& [m, c] : terms_) {
    Rat t = c;
    for (const auto& [v, e] : m) {
      for (int i = 0; i < e; ++i) t *= x[v];
    }
    acc += t;
  }
  return acc;
}

double Polynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("eval arity mismatch");
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (const auto& [v, e] : m) t *= std::pow(x[v], e);
    acc += t;
  }
  return acc;
}

std::vector<double> Polynomial::gradient(const std::vector<double>& x) const {
  std::vector<double> g(nvars_, 0.0);
  for (const auto& [m, c] : terms_) {
    for (size_t i = 0; i < m.size(); ++i) {
      double t = to_double(c) * m[i].second;
      for (size_t j = 0; j < m.size(); ++j) {
        int e = m[j].second - (j == i ? 1 : 0);
        if (e > 0) t *= std::pow(x[m[j].first], e);
      }
      g[m[i].first] += t;
    }
  }
  return g;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool wrote_coef = false;
    if (a != 1 || m.empty()) {
      os << rat_to_string(a);
      wrote_coef = true;
    }
    for (size_t i = 0; i < m.size(); ++i) {
      if (wrote_coef || i > 0) os << "*";
      os << "x" << (m[i].first + 1);
      if (m[i].second > 1) os << "^" << m[i].second;
    }
  }
  return os.str();
}

namespace {

// Single term: [sign] [coef] [* x<i>^<e> ...]; factors joined by '*'.
struct TermParser {
  std::string_view s;
  size_t pos = 0;

  bool eof() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }

  Rat parse_number() {
    size_t start = pos;
    while (!eof() && (std::isdigit(peek()) || peek() == '/')) ++pos;
    if (pos == start) throw std::invalid_argument("expected number in polynomial");
    return rat_from_string(s.substr(start, pos - start));
  }

  int parse_int() {
    size_t start = pos;
    while (!eof() && std::isdigit(peek())) ++pos;
    if (pos == start) throw std::invalid_argument("expected integer in polynomial");
    return std::stoi(std::string(s.substr(start, pos - start)));
  }
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text, int nvars) {
  std::string compact;
  compact.reserve(text.size());
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  }
  Polynomial out(nvars);
  TermParser tp{compact};
  while (!tp.eof()) {
    int sign = 1;
    while (!tp.eof() && (tp.peek() == '+' || tp.peek() == '-')) {
      if (tp.peek() == '-') sign = -sign;
      ++tp.pos;
    }
    if (tp.eof()) throw std::invalid_argument("trailing sign in polynomial");
    Rat coef = sign;
    Monomial mono;
    bool expect_factor = true;
    while (expect_factor) {
      if (tp.eof()) throw std::invalid_argument("dangling '*' in polynomial");
      if (std::isdigit(tp.peek())) {
        coef *= tp.parse_number();
      } else if (tp.peek() == 'x') {
        ++tp.pos;
        int var = tp.parse_int() - 1;
        if (var < 0 || var >= nvars) throw std::invalid_argument("variable index out of range in polynomial");
        int e = 1;
        if (!tp.eof() && tp.peek() == '^') {
          ++tp.pos;
          e = tp.parse_int();
        }
        bool merged = false;
        for (auto& [v, ee] : mono) {
          if (v == var) {
            ee += e;
            merged = true;
            break;
          }
        }
        if (!merged) mono.emplace_back(var, e);
      } else {
        throw std::invalid_argument(std::string("unexpected character '") + tp.peek() + "' in polynomial");
      }
      if (!tp.eof() && tp.peek() == '*') {
        ++tp.pos;
        expect_factor = true;
      } else {
        expect_factor = false;
      }
    }
    std::sort(mono.begin(), mono.end());
    out.add_term(mono, coef);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SymForm

SymForm::SymForm(int order, int dim) : order_(order), dim_(dim) {
  if (order < 1 || dim < 1) throw std::invalid_argument("SymForm needs order >= 1, dim >= 1");
}

Rat SymForm::entry(std::vector<int> idx) const {
  if (static_cast<int>(idx.size()) != order_) throw std::invalid_argument("index arity mismatch");
  std::sort(idx.begin(), idx.end());
  auto it = entries_.find(idx);
  return it == entries_.end() ? Rat(0) : it->second;
}

void SymForm::set_entry(std::vector<int> idx, Rat v) {
  if (static_cast<int>(idx.size()) != order_) throw std::invalid_argument("index arity mismatch");
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw std::out_of_range("SymForm index out of range");
  }
  std::sort(idx.begin(), idx.end());
  if (v == 0) {
    entries_.erase(idx);
  } else {
    entries_[idx] = std::move(v);
  }
}

namespace {

// Iterate the distinct permutations of a sorted index tuple.
template <typename F>
void for_each_distinct_permutation(std::vector<int> idx, F&& f) {
  do {
    f(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
}

}  // namespace

Rat SymForm::apply(const std::vector<std::vector<Rat>>& xs) const {
  if (static_cast<int>(xs.size()) != order_) throw std::invalid_argument("apply arity mismatch");
  for (const auto& x : xs) {
    if (static_cast<int>(x.size()) != dim_) throw std::invalid_argument("apply dimension mismatch");
  }
  Rat acc(0);
  for (const auto& [sorted_idx, v] : entries_) {
    Rat orbit(0);
    for_each_distinct_permutation(sorted_idx, [&](const std::vector<int>& idx) {
      Rat t(1);
      for (int slot = 0; slot < order_; ++slot) t *= xs[slot][idx[slot]];
      orbit += t;
    });
    acc += v * orbit;
  }
  return acc;
}

double SymForm::apply(const std::vector<std::vector<double>>& xs) const {
  if (static_cast<int>(xs.size()) != order_) throw std::invalid_argument("apply arity mismatch");
  double acc = 0.0;
  for (const auto& [sorted_idx, v] : entries_) {
    double orbit = 0.0;
    for_each_distinct_permutation(sorted_idx, [&](const std::vector<int>& idx) {
      double t = 1.0;
      for (int slot = 0; slot < order_; ++slot) t *= xs[slot][idx[slot]];
      orbit += t;
    });
    acc += to_double(v) * orbit;
  }
  return acc;
}

std::vector<double> SymForm::apply_partial(const std::vector<std::vector<double>>& xs) const {
  if (static_cast<int>(xs.size()) != order_ - 1) throw std::invalid_argument("partial application needs k-1 vectors");
  std::vector<double> out(dim_, 0.0);
  for (const auto& [sorted_idx, v] : entries_) {
    double cv = to_double(v);
    for_each_distinct_permutation(sorted_idx, [&](const std::vector<int>& idx) {
      double t = cv;
      for (int slot = 0; slot + 1 < order_; ++slot) t *= xs[slot][idx[slot]];
      out[idx[order_ - 1]] += t;
    });
  }
  return out;
}

bool SymForm::operator==(const SymForm& o) const {
  return order_ == o.order_ && dim_ == o.dim_ && entries_ == o.entries_;
}

SymForm polarize(const Polynomial& p) {
  int deg = 0;
  if (!p.is_homogeneous(&deg)) throw std::invalid_argument("polarize: polynomial is not homogeneous");
  if (deg < 1) throw std::invalid_argument("polarize: degree must be >= 1");
  SymForm a(deg, p.nvars());
  // Entry on sorted index J with multiplicities m_i equals
  // coeff(x^m) * prod(m_i!) / k!; this is the lambda-derivative polar form
  // evaluated on basis vectors (cross-checked against the symbolic expansion
  // in the tests).
  Rat kfact(1);
  for (int i = 2; i <= deg; ++i) kfact *= i;
  for (const auto& [m, c] : p.terms()) {
    std::vector<int> idx;
    Rat mult_fact(1);
    for (const auto& [v, e] : m) {
      for (int i = 0; i < e; ++i) idx.push_back(v);
      for (int i = 2; i <= e; ++i) mult_fact *= i;
    }
    a.set_entry(idx, c * mult_fact / kfact);
  }
  return a;
}

Polynomial restitute(const SymForm& a) {
  Polynomial p(a.dim());
  Rat kfact(1);
  for (int i = 2; i <= a.order(); ++i) kfact *= i;
  for (const auto& [idx, v] : a.entries()) {
    std::vector<int> dense(a.dim(), 0);
    for (int i : idx) dense[i]++;
    Rat mult_fact(1);
    for (int e : dense) {
      for (int i = 2; i <= e; ++i) mult_fact *= i;
    }
    p.add_term(monomial_from_dense(dense), v * kfact / mult_fact);
  }
  return p;
}

SymForm derivative_tensor(const Polynomial& f, const std::vector<Rat>& c, int k) {
  if (static_cast<int>(c.size()) != f.nvars()) throw std::invalid_argument("derivative_tensor: center dimension mismatch");
  if (k < 1) throw std::invalid_argument("derivative_tensor: k must be >= 1");
  Polynomial shifted = f.shift(c);
  Polynomial hom = shifted.homogeneous_component(k);
  Rat kfact(1);
  for (int i = 2; i <= k; ++i) kfact *= i;
  if (hom.is_zero()) return SymForm(k, f.nvars());
  SymForm a = polarize(hom);
  SymForm out(k, f.nvars());
  for (const auto& [idx, v] : a.entries()) out.set_entry(idx, v * kfact);
  return out;
}

TaylorJet taylor_truncate(const Polynomial& f, const std::vector<Rat>& c, int r) {
  if (static_cast<int>(c.size()) != f.nvars()) throw std::invalid_argument("taylor_truncate: center dimension mismatch");
  if (r < 0) throw std::invalid_argument("taylor_truncate: negative order");
  Polynomial shifted = f.shift(c);
  Polynomial trunc(f.nvars());
  for (const auto& [m, coef] : shifted.terms()) {
    if (monomial_degree(m) <= r) trunc.add_term(m, coef);
  }
  return TaylorJet{c, r, std::move(trunc)};
}

}  // namespace symtan
