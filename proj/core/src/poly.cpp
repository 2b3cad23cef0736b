#include "poly.hpp"

#include <algorithm>
#include <utility>

#include "varmult/errors.hpp"

namespace varmult::detail {

namespace {

Expr canonical_unary(Kind kind, Expr arg) {
  return make_node(kind, {std::move(arg)}, 0, Rational(0), true);
}

Expr canonical_int(Expr integrand, Var v) {
  return make_node(Kind::Int, {std::move(integrand)}, v.jet_index(), Rational(0), true);
}

bool is_var(const Expr& e, Var v) {
  if (v.is_x()) return e.kind() == Kind::X;
  return e.kind() == Kind::Jet && e.jet_index() == v.jet_index();
}

Expr factor_expr(const Factor& f) {
  if (f.exp == 1) return f.base;
  return make_node(Kind::Pow, {f.base}, f.exp, Rational(0), true);
}

Monomial monomial_of(std::vector<Factor> factors) {
  Monomial m;
  m.factors = std::move(factors);
  m.refresh_vars();
  return m;
}

Monomial exp_monomial(const Expr& arg) {
  Monomial m;
  m.has_exp = true;
  m.exp_arg = arg;
  m.refresh_vars();
  return m;
}

// Product of two monomials. Canonical monomials only carry negative powers of
// sums, so merged exponents never require expansion here.
Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    auto c = a.factors[i].base <=> b.factors[j].base;
    if (c < 0) {
      out.factors.push_back(a.factors[i++]);
    } else if (c > 0) {
      out.factors.push_back(b.factors[j++]);
    } else {
      int e = a.factors[i].exp + b.factors[j].exp;
      if (e != 0) out.factors.push_back(Factor{a.factors[i].base, e});
      ++i;
      ++j;
    }
  }
  for (; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i]);
  for (; j < b.factors.size(); ++j) out.factors.push_back(b.factors[j]);

  if (a.has_exp && b.has_exp) {
    Poly sum = to_poly(a.exp_arg) + to_poly(b.exp_arg);
    if (!sum.is_zero()) {
      out.has_exp = true;
      out.exp_arg = to_expr(sum);
    }
  } else if (a.has_exp) {
    out.has_exp = true;
    out.exp_arg = a.exp_arg;
  } else if (b.has_exp) {
    out.has_exp = true;
    out.exp_arg = b.exp_arg;
  }
  out.refresh_vars();
  return out;
}

// m^k. Sum bases can come out with a positive exponent; those are expanded.
Poly monomial_power(const Monomial& m, const Rational& coeff, int k) {
  Monomial out;
  std::vector<Factor> expand;
  for (const auto& f : m.factors) {
    int e = f.exp * k;
    if (f.base.kind() == Kind::Sum && e > 0) {
      expand.push_back(Factor{f.base, e});
    } else {
      out.factors.push_back(Factor{f.base, e});
    }
  }
  if (m.has_exp) {
    Poly arg = scale(to_poly(m.exp_arg), Rational(k));
    out.has_exp = true;
    out.exp_arg = to_expr(arg);
  }
  out.refresh_vars();
  Poly result = Poly::single(std::move(out), coeff.pow(k));
  for (const auto& f : expand) result = result * power(to_poly(f.base), f.exp);
  return result;
}

bool depends(const Factor& f, Var v) { return f.base.free_vars().contains(v); }

Poly opaque_integral(const Monomial& dep, Var v) {
  Expr integrand = to_expr(Poly::single(dep, Rational(1)));
  return Poly::atom(canonical_int(integrand, v));
}

// Antiderivative of a monomial all of whose parts depend on v.
Poly integrate_dependent(const Monomial& dep, Var v) {
  int power_of_v = 0;
  std::optional<Expr> inner_integral;
  bool other = false;
  for (const auto& f : dep.factors) {
    if (is_var(f.base, v)) {
      power_of_v = f.exp;
    } else if (f.base.kind() == Kind::Int && f.base.int_var() == v && f.exp == 1 && !inner_integral) {
      inner_integral = f.base;
    } else {
      other = true;
    }
  }
  if (other || power_of_v < 0) return opaque_integral(dep, v);
  const Poly var_poly = Poly::atom(Expr::var(v));

  if (!dep.has_exp && !inner_integral) {
    // power rule
    return scale(power(var_poly, power_of_v + 1), Rational(1, power_of_v + 1));
  }

  if (dep.has_exp && !inner_integral) {
    // exp(a*v) with a independent of v, times v^j: integrate by parts down to j = 0.
    Poly arg = to_poly(dep.exp_arg);
    Poly slope;
    for (const auto& [m, c] : arg.terms()) {
      Monomial rest;
      bool linear = false;
      for (const auto& f : m.factors) {
        if (is_var(f.base, v) && f.exp == 1) {
          linear = true;
        } else {
          rest.factors.push_back(f);
        }
      }
      rest.has_exp = m.has_exp;
      rest.exp_arg = m.exp_arg;
      rest.refresh_vars();
      if (!linear || rest.vars.contains(v)) return opaque_integral(dep, v);
      slope.add_term(rest, c);
    }
    Poly inv_slope = power(slope, -1);
    Poly e = Poly::single(exp_monomial(dep.exp_arg), Rational(1));
    Poly acc = (e - Poly::constant(Rational(1))) * inv_slope;
    for (int t = 1; t <= power_of_v; ++t) {
      acc = power(var_poly, t) * e * inv_slope - scale(inv_slope * acc, Rational(t));
    }
    return acc;
  }

  if (inner_integral && !dep.has_exp) {
    // int_0^v s^j G(s) ds = v^(j+1)/(j+1) G(v) - int_0^v s^(j+1)/(j+1) G'(s) ds
    const Rational c(1, power_of_v + 1);
    Poly lifted = scale(power(var_poly, power_of_v + 1), c);
    Poly g = Poly::atom(*inner_integral);
    Poly integrand = lifted * to_poly(inner_integral->arg());
    return lifted * g - integrate(integrand, v);
  }
  return opaque_integral(dep, v);
}

Poly diff_atom(const Expr& base, Var v) {
  switch (base.kind()) {
    case Kind::X:
    case Kind::Jet:
      return is_var(base, v) ? Poly::constant(Rational(1)) : Poly();
    case Kind::Log: {
      Poly a = to_poly(base.arg());
      return diff(a, v) * power(a, -1);
    }
    case Kind::Sin: {
      Poly a = to_poly(base.arg());
      return diff(a, v) * Poly::atom(canonical_unary(Kind::Cos, base.arg()));
    }
    case Kind::Cos: {
      Poly a = to_poly(base.arg());
      return scale(diff(a, v) * Poly::atom(canonical_unary(Kind::Sin, base.arg())), Rational(-1));
    }
    case Kind::Sum:
      return diff(to_poly(base), v);
    case Kind::Int: {
      const Expr& g = base.arg();
      if (base.int_var() == v) return to_poly(g);
      return integrate(diff(to_poly(g), v), base.int_var());
    }
    default:
      throw Error("diff: unexpected kernel");
  }
}

Poly substitute_atom(const Expr& base, const std::map<Var, Expr>& bindings, const VarSet& bound) {
  switch (base.kind()) {
    case Kind::X:
    case Kind::Jet: {
      Var v = base.kind() == Kind::X ? Var::x() : Var::jet(base.jet_index());
      auto it = bindings.find(v);
      if (it == bindings.end()) return Poly::atom(base);
      return to_poly(it->second);
    }
    case Kind::Log:
      return log_of(substitute(to_poly(base.arg()), bindings));
    case Kind::Sin:
      return sin_of(substitute(to_poly(base.arg()), bindings));
    case Kind::Cos:
      return cos_of(substitute(to_poly(base.arg()), bindings));
    case Kind::Sum:
      return substitute(to_poly(base), bindings);
    case Kind::Int: {
      const Var w = base.int_var();
      if (bound.contains(w)) {
        const Expr& target = bindings.at(w);
        if (target.is_zero()) return Poly();
        throw SubstitutionError("cannot substitute for the integration variable " + w.name() +
                                " of an antiderivative");
      }
      const Expr& g = base.arg();
      std::map<Var, Expr> inner;
      for (const auto& [v, target] : bindings) {
        if (!bound.contains(v) || v == w || !g.depends_on(v)) continue;
        if (target.depends_on(w)) {
          throw SubstitutionError("substitution for " + v.name() + " would capture integration variable " +
                                  w.name());
        }
        inner.emplace(v, target);
      }
      if (inner.empty()) return Poly::atom(base);
      return integrate(substitute(to_poly(g), inner), w);
    }
    default:
      throw Error("substitute: unexpected kernel");
  }
}

}  // namespace

void Monomial::refresh_vars() {
  vars = VarSet{};
  for (const auto& f : factors) vars |= f.base.free_vars();
  if (has_exp) vars |= exp_arg.free_vars();
}

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  std::size_t n = std::min(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.factors[i].base <=> b.factors[i].base;
    if (c != 0) return c < 0;
    if (a.factors[i].exp != b.factors[i].exp) return a.factors[i].exp < b.factors[i].exp;
  }
  if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
  if (a.has_exp != b.has_exp) return !a.has_exp;
  if (!a.has_exp) return false;
  return (a.exp_arg <=> b.exp_arg) < 0;
}

Poly Poly::constant(const Rational& c) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace(Monomial{}, c);
  return p;
}

Poly Poly::single(Monomial m, const Rational& c) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace(std::move(m), c);
  return p;
}

Poly Poly::atom(const Expr& base, int exponent) {
  return single(monomial_of({Factor{base, exponent}}), Rational(1));
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_unit()) return terms_.begin()->second;
  return std::nullopt;
}

VarSet Poly::vars() const {
  VarSet out;
  for (const auto& [m, c] : terms_) out |= m.vars;
  return out;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::add(const Poly& other, const Rational& scale) {
  if (scale.is_zero()) return;
  for (const auto& [m, c] : other.terms_) add_term(m, c * scale);
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.size() < b.size()) {
    Poly out = b;
    out.add(a);
    return out;
  }
  Poly out = a;
  out.add(b);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  out.add(b, Rational(-1));
  return out;
}

Poly scale(const Poly& a, const Rational& c) {
  Poly out;
  out.add(a, c);
  return out;
}

void accumulate_product(Poly& out, const Poly& p, const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  for (const auto& [pm, pc] : p.terms()) {
    out.add_term(m.is_unit() ? pm : multiply(pm, m), pc * c);
  }
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  const Poly& outer = a.size() <= b.size() ? a : b;
  const Poly& inner = a.size() <= b.size() ? b : a;
  for (const auto& [m, c] : outer.terms()) accumulate_product(out, inner, m, c);
  return out;
}

Poly power(const Poly& p, int exponent) {
  if (exponent == 0) return Poly::constant(Rational(1));
  if (p.is_zero()) {
    if (exponent < 0) throw DomainError("division by zero");
    return Poly();
  }
  if (p.size() == 1) {
    const auto& [m, c] = *p.terms().begin();
    return monomial_power(m, c, exponent);
  }
  if (exponent > 0) {
    Poly result = Poly::constant(Rational(1));
    Poly base = p;
    unsigned e = static_cast<unsigned>(exponent);
    while (e > 0) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e > 0) base = base * base;
    }
    return result;
  }
  // Irreducible sum: keep (p / lead)^k as a kernel so the base is primitive.
  const Rational lead = p.terms().begin()->second;
  Expr base = to_expr(scale(p, lead.inverse()));
  Poly out = Poly::atom(base, exponent);
  return scale(out, lead.pow(exponent));
}

Poly exp_of(const Poly& arg) {
  if (arg.is_zero()) return Poly::constant(Rational(1));
  return Poly::single(exp_monomial(to_expr(arg)), Rational(1));
}

Poly log_of(const Poly& arg) {
  if (auto c = arg.constant_value(); c && c->is_one()) return Poly();
  if (arg.size() == 1) {
    const auto& [m, c] = *arg.terms().begin();
    if (c.is_one() && m.factors.empty() && m.has_exp) return to_poly(m.exp_arg);
  }
  return Poly::atom(canonical_unary(Kind::Log, to_expr(arg)));
}

Poly sin_of(const Poly& arg) {
  if (arg.is_zero()) return Poly();
  return Poly::atom(canonical_unary(Kind::Sin, to_expr(arg)));
}

Poly cos_of(const Poly& arg) {
  if (arg.is_zero()) return Poly::constant(Rational(1));
  return Poly::atom(canonical_unary(Kind::Cos, to_expr(arg)));
}

namespace {

void add_canonical_term(Poly& out, const Expr& term) {
  switch (term.kind()) {
    case Kind::Const:
      out.add_term(Monomial{}, term.value());
      return;
    case Kind::Exp:
      out.add_term(exp_monomial(term.arg()), Rational(1));
      return;
    case Kind::Pow:
      out.add_term(monomial_of({Factor{term.arg(), term.exponent()}}), Rational(1));
      return;
    case Kind::Prod: {
      Rational coeff(1);
      Monomial m;
      for (const auto& f : term.args()) {
        switch (f.kind()) {
          case Kind::Const:
            coeff = f.value();
            break;
          case Kind::Exp:
            m.has_exp = true;
            m.exp_arg = f.arg();
            break;
          case Kind::Pow:
            m.factors.push_back(Factor{f.arg(), f.exponent()});
            break;
          default:
            m.factors.push_back(Factor{f, 1});
        }
      }
      m.refresh_vars();
      out.add_term(m, coeff);
      return;
    }
    default:
      out.add_term(monomial_of({Factor{term, 1}}), Rational(1));
  }
}

}  // namespace

Poly to_poly(const Expr& e) {
  if (e.is_canonical()) {
    Poly out;
    if (e.kind() == Kind::Sum) {
      for (const auto& t : e.args()) add_canonical_term(out, t);
    } else {
      add_canonical_term(out, e);
    }
    return out;
  }
  switch (e.kind()) {
    case Kind::Const:
      return Poly::constant(e.value());
    case Kind::X:
    case Kind::Jet:
      return Poly::atom(e);
    case Kind::Sum: {
      Poly out;
      for (const auto& t : e.args()) out.add(to_poly(t));
      return out;
    }
    case Kind::Prod: {
      Poly out = Poly::constant(Rational(1));
      for (const auto& f : e.args()) {
        out = out * to_poly(f);
        if (out.is_zero()) break;
      }
      return out;
    }
    case Kind::Pow:
      return power(to_poly(e.arg()), e.exponent());
    case Kind::Exp:
      return exp_of(to_poly(e.arg()));
    case Kind::Log:
      return log_of(to_poly(e.arg()));
    case Kind::Sin:
      return sin_of(to_poly(e.arg()));
    case Kind::Cos:
      return cos_of(to_poly(e.arg()));
    case Kind::Int:
      return integrate(to_poly(e.arg()), e.int_var());
  }
  throw Error("to_poly: unknown node kind");
}

Expr to_expr(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  std::optional<Rational> constant;
  for (const auto& [m, c] : p.terms()) {
    if (m.is_unit()) {
      constant = c;
      continue;
    }
    std::vector<Expr> parts;
    parts.reserve(m.factors.size() + 2);
    if (!c.is_one()) parts.emplace_back(c);
    for (const auto& f : m.factors) parts.push_back(factor_expr(f));
    if (m.has_exp) parts.push_back(canonical_unary(Kind::Exp, m.exp_arg));
    if (parts.size() == 1) {
      terms.push_back(std::move(parts.front()));
    } else {
      terms.push_back(make_node(Kind::Prod, std::move(parts), 0, Rational(0), true));
    }
  }
  if (constant) terms.emplace_back(*constant);
  if (terms.empty()) return Expr();
  if (terms.size() == 1) return terms.front();
  return make_node(Kind::Sum, std::move(terms), 0, Rational(0), true);
}

Poly diff(const Poly& p, Var v) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (!m.vars.contains(v)) continue;
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      const Factor& f = m.factors[i];
      if (!depends(f, v)) continue;
      Poly dbase = diff_atom(f.base, v);
      if (dbase.is_zero()) continue;
      Monomial rest = m;
      if (f.exp == 1) {
        rest.factors.erase(rest.factors.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        rest.factors[i].exp = f.exp - 1;
      }
      rest.refresh_vars();
      accumulate_product(out, dbase, rest, c * Rational(f.exp));
    }
    if (m.has_exp && m.exp_arg.depends_on(v)) {
      accumulate_product(out, diff(to_poly(m.exp_arg), v), m, c);
    }
  }
  return out;
}

Poly integrate(const Poly& p, Var v) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (!m.vars.contains(v)) {
      Monomial lifted = multiply(m, monomial_of({Factor{Expr::var(v), 1}}));
      out.add_term(lifted, c);
      continue;
    }
    Monomial indep;
    Monomial dep;
    for (const auto& f : m.factors) (depends(f, v) ? dep : indep).factors.push_back(f);
    if (m.has_exp) {
      Poly arg = to_poly(m.exp_arg);
      Poly arg_dep;
      Poly arg_indep;
      for (const auto& [am, ac] : arg.terms()) (am.vars.contains(v) ? arg_dep : arg_indep).add_term(am, ac);
      if (!arg_dep.is_zero()) {
        dep.has_exp = true;
        dep.exp_arg = to_expr(arg_dep);
      }
      if (!arg_indep.is_zero()) {
        indep.has_exp = true;
        indep.exp_arg = to_expr(arg_indep);
      }
    }
    indep.refresh_vars();
    dep.refresh_vars();
    accumulate_product(out, integrate_dependent(dep, v), indep, c);
  }
  return out;
}

Poly substitute(const Poly& p, const std::map<Var, Expr>& bindings) {
  VarSet bound;
  for (const auto& [v, target] : bindings) {
    if (!is_var(target, v)) bound.insert(v);
  }
  if (bound.empty()) return p;
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    if (!m.vars.intersects(bound)) {
      out.add_term(m, c);
      continue;
    }
    Poly term = Poly::constant(c);
    Monomial keep;
    for (const auto& f : m.factors) {
      if (f.base.free_vars().intersects(bound)) {
        term = term * power(substitute_atom(f.base, bindings, bound), f.exp);
      } else {
        keep.factors.push_back(f);
      }
    }
    if (m.has_exp) {
      if (m.exp_arg.free_vars().intersects(bound)) {
        term = term * exp_of(substitute(to_poly(m.exp_arg), bindings));
      } else {
        keep.has_exp = true;
        keep.exp_arg = m.exp_arg;
      }
    }
    keep.refresh_vars();
    accumulate_product(out, term, keep, Rational(1));
  }
  return out;
}

}  // namespace varmult::detail
