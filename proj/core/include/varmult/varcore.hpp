#pragma once

#include <optional>
#include <vector>

#include "varmult/expr.hpp"
#include "varmult/symexpr.hpp"

namespace varmult {

/// Free data (R_n, f_0..f_{n-1}, N_{n-1}) of the solution family, plus the
/// Lagrangian order m >= n. Dependence bounds are checked on construction.
class ParamSet {
 public:
  /// Throws PreconditionError if n < 2, m < n or f_lower.size() != n, and
  /// DependenceError if max_jet(R) > n, max_jet(f_l) > l or max_jet(N) > n - 1.
  ParamSet(int n, Expr R, std::vector<Expr> f_lower, Expr N = Expr(), std::optional<int> m = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  const Expr& R() const { return R_; }
  /// f_0, ..., f_{n-1}.
  const std::vector<Expr>& f_lower() const { return f_lower_; }
  const Expr& f(int l) const { return f_lower_.at(static_cast<std::size_t>(l)); }
  const Expr& N() const { return N_; }

 private:
  int n_;
  int m_;
  Expr R_;
  std::vector<Expr> f_lower_;
  Expr N_;
};

/// rho * (p_{2n} - f) = E_{2m}^m L with rho = exp(-R).
struct VariationalTriple {
  Expr f;
  Expr rho;
  Expr L;
  int n = 2;
  int m = 2;
};

/// E_{2n}^n L. Throws DependenceError if max_jet(L) > n.
Expr euler_lagrange(const Expr& L, int n);

/// Right-hand side, multiplier and Lagrangian generated by the free data.
VariationalTriple construct(const ParamSet& params);

/// (1/6) d^3 f3 / dp3^3. Throws DependenceError if max_jet(f3) > 3.
Expr fels_T5(const Expr& f3);

/// The I_1 invariant of p4 = f3 with every d/dx expanded as D_3 + f3 d/dp3.
/// Throws DependenceError if max_jet(f3) > 3.
Expr fels_I1(const Expr& f3);

/// Zero test of E_{2m}^m L - rho (p_{2n} - f).
ZeroVerdict verify_triple(const VariationalTriple& t, const ZeroTestConfig& cfg = {});

/// The residual expression tested by verify_triple.
Expr triple_residual(const VariationalTriple& t);

}  // namespace varmult
