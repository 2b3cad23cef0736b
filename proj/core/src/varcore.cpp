#include "varmult/varcore.hpp"

#include <string>

#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"

namespace varmult {

namespace {

void bound(const Expr& e, int limit, const std::string& name) {
  if (max_jet(e) > limit) {
    throw DependenceError(name + " may depend on at most p" + std::to_string(limit) + ", got p" +
                          std::to_string(max_jet(e)));
  }
}

Expr sign(int k) { return Expr(k % 2 == 0 ? 1 : -1); }

}  // namespace

ParamSet::ParamSet(int n, Expr R, std::vector<Expr> f_lower, Expr N, std::optional<int> m)
    : n_(n), m_(m.value_or(n)), R_(simplify(R)), N_(simplify(N)) {
  if (n_ < 2) throw PreconditionError("ParamSet: n must be at least 2");
  if (m_ < n_) throw PreconditionError("ParamSet: m must be at least n");
  if (2 * m_ > kMaxJetIndex) throw PreconditionError("ParamSet: order exceeds the jet index limit");
  if (static_cast<int>(f_lower.size()) != n_) {
    throw PreconditionError("ParamSet: expected " + std::to_string(n_) + " lower functions f_0..f_" +
                            std::to_string(n_ - 1));
  }
  bound(R_, n_, "R");
  for (int l = 0; l < n_; ++l) {
    f_lower_.push_back(simplify(f_lower[static_cast<std::size_t>(l)]));
    bound(f_lower_.back(), l, "f_" + std::to_string(l));
  }
  bound(N_, n_ - 1, "N");
}

Expr euler_lagrange(const Expr& L, int n) {
  bound(L, n, "L");
  return euler_op(2 * n, n, L);
}

VariationalTriple construct(const ParamSet& P) {
  const int n = P.n();
  const Expr& R = P.R();
  const Expr rho = exp(-R);
  const Expr eR = exp(R);
  const Var pn = Var::jet(n);
  const Expr A = antideriv(rho, pn, 2);
  const Expr F0 = antideriv(P.f(0), Var::jet(0), 1);
  const Expr gauge = total_derivative(P.m(), P.N());

  VariationalTriple t;
  t.n = n;
  t.m = P.m();
  t.rho = rho;

  if (n == 2) {
    const Expr& f1 = P.f(1);
    const Expr B = antideriv(f1, Var::jet(1), 2);
    const Expr p2 = Expr::jet(2);
    const Expr p3 = Expr::jet(3);
    t.f = diff(R, pn) * p3 * p3 + 2 * total_derivative(2, R) * p3 -
          eR * (euler_op(2, 2, A) + f1 * p2 - euler_op(1, 1, B) + P.f(0));
    t.L = A - B + F0 + gauge;
    return t;
  }

  Expr bracket = sign(n) * euler_op(2 * n - 2, n, A) + P.f(0);
  Expr L = sign(n) * A + F0 + gauge;
  for (int l = 1; l < n; ++l) {
    const Expr B = antideriv(P.f(l), Var::jet(l), 2);
    bracket += P.f(l) * Expr::jet(2 * l) + sign(l) * euler_op(2 * l - 1, l, B);
    L += sign(l) * B;
  }
  t.f = n * total_derivative(n + 1, R) * Expr::jet(2 * n - 1) - eR * bracket;
  t.L = L;
  return t;
}

Expr fels_T5(const Expr& f3) {
  bound(f3, 3, "f3");
  const Var p3 = Var::jet(3);
  return Rational(1, 6) * diff(diff(diff(f3, p3), p3), p3);
}

Expr fels_I1(const Expr& f3) {
  bound(f3, 3, "f3");
  const Var p3 = Var::jet(3);
  auto ddx = [&](const Expr& e) { return total_derivative(3, e) + f3 * diff(e, p3); };
  const Expr f3_3 = diff(f3, p3);
  const Expr f3_2 = diff(f3, Var::jet(2));
  const Expr d_f3_3 = ddx(f3_3);
  return diff(f3, Var::jet(1)) + Rational(1, 2) * ddx(d_f3_3) - ddx(f3_2) -
         Rational(3, 4) * f3_3 * d_f3_3 + Rational(1, 2) * f3_2 * f3_3 +
         Rational(1, 8) * pow(f3_3, 3);
}

Expr triple_residual(const VariationalTriple& t) {
  return euler_op(2 * t.m, t.m, t.L) - t.rho * (Expr::jet(2 * t.n) - t.f);
}

ZeroVerdict verify_triple(const VariationalTriple& t, const ZeroTestConfig& cfg) {
  return is_zero(triple_residual(t), cfg);
}

}  // namespace varmult
