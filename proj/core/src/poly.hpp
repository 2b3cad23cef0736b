#pragma once

// Normal-form engine behind simplify and all calculus operations.
//
// A canonical expression is a finite sum of rational multiples of monomials.
// A monomial is a product of kernel powers (x, p_k, log/sin/cos of a
// canonical argument, opaque antiderivatives, and negative powers of
// irreducible sums) times at most one exponential. Exponentials are merged,
// exp(a) * exp(b) -> exp(a + b), so the exponential part of a monomial is a
// single canonical argument.

#include <map>
#include <optional>
#include <vector>

#include "varmult/expr.hpp"

namespace varmult::detail {

struct Factor {
  Expr base;
  int exp = 1;
};

struct Monomial {
  std::vector<Factor> factors;  // sorted by base, distinct, exponents nonzero, no Exp bases
  Expr exp_arg;                 // canonical exponent argument, only meaningful when has_exp
  bool has_exp = false;
  VarSet vars;

  bool is_unit() const { return factors.empty() && !has_exp; }
  void refresh_vars();
};

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
 public:
  using Map = std::map<Monomial, Rational, MonoLess>;

  Poly() = default;
  static Poly constant(const Rational& c);
  static Poly single(Monomial m, const Rational& c);
  static Poly atom(const Expr& base, int exponent = 1);

  bool is_zero() const { return terms_.empty(); }
  std::optional<Rational> constant_value() const;
  std::size_t size() const { return terms_.size(); }
  const Map& terms() const { return terms_; }
  VarSet vars() const;

  void add_term(const Monomial& m, const Rational& c);
  void add(const Poly& other, const Rational& scale = Rational(1));

 private:
  Map terms_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, const Rational& c);

/// out += c * m * p
void accumulate_product(Poly& out, const Poly& p, const Monomial& m, const Rational& c);

Poly power(const Poly& p, int exponent);
Poly exp_of(const Poly& arg);
Poly log_of(const Poly& arg);
Poly sin_of(const Poly& arg);
Poly cos_of(const Poly& arg);

/// Normal form of an arbitrary expression; canonical inputs are decomposed without recursion.
Poly to_poly(const Expr& e);
/// Canonical expression of a normal form.
Expr to_expr(const Poly& p);

Poly diff(const Poly& p, Var v);
/// Definite antiderivative from 0 in v, closed form where a rule applies.
Poly integrate(const Poly& p, Var v);

/// Simultaneous substitution; keys are variables, values are canonical.
Poly substitute(const Poly& p, const std::map<Var, Expr>& bindings);

}  // namespace varmult::detail
