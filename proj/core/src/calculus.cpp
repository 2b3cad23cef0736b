#include <stdexcept>

#include "poly.hpp"
#include "varmult/errors.hpp"
#include "varmult/symexpr.hpp"

namespace varmult {

using detail::Poly;
using detail::to_expr;
using detail::to_poly;

Expr simplify(const Expr& e) {
  if (e.is_canonical()) return e;
  return to_expr(to_poly(e));
}

Expr diff(const Expr& e, Var v) {
  return to_expr(detail::diff(to_poly(e), v));
}

Expr antideriv(const Expr& e, Var v, int times) {
  if (times != 1 && times != 2) throw PreconditionError("antideriv: times must be 1 or 2");
  Poly p = detail::integrate(to_poly(e), v);
  if (times == 2) p = detail::integrate(p, v);
  return to_expr(p);
}

Expr substitute(const Expr& e, const std::map<Var, Expr>& bindings) {
  std::map<Var, Expr> canonical;
  for (const auto& [v, target] : bindings) canonical.emplace(v, simplify(target));
  return to_expr(detail::substitute(to_poly(e), canonical));
}

int max_jet(const Expr& e) {
  return simplify(e).max_jet();
}

Expr operator+(const Expr& a, const Expr& b) { return to_expr(to_poly(a) + to_poly(b)); }
Expr operator-(const Expr& a, const Expr& b) { return to_expr(to_poly(a) - to_poly(b)); }
Expr operator*(const Expr& a, const Expr& b) { return to_expr(to_poly(a) * to_poly(b)); }
Expr operator/(const Expr& a, const Expr& b) {
  return to_expr(to_poly(a) * detail::power(to_poly(b), -1));
}
Expr operator-(const Expr& a) { return to_expr(detail::scale(to_poly(a), Rational(-1))); }

Expr pow(const Expr& base, int exponent) { return to_expr(detail::power(to_poly(base), exponent)); }
Expr exp(const Expr& arg) { return to_expr(detail::exp_of(to_poly(arg))); }
Expr log(const Expr& arg) { return to_expr(detail::log_of(to_poly(arg))); }
Expr sin(const Expr& arg) { return to_expr(detail::sin_of(to_poly(arg))); }
Expr cos(const Expr& arg) { return to_expr(detail::cos_of(to_poly(arg))); }

}  // namespace varmult
