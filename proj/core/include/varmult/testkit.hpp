#pragma once

#include <cstdint>
#include <vector>

#include "varmult/expr.hpp"
#include "varmult/rational.hpp"
#include "varmult/symexpr.hpp"
#include "varmult/varcore.hpp"

namespace varmult {

struct GenConfig {
  std::uint64_t seed = 1;
  int max_degree = 3;
  int max_terms = 4;
  /// Coefficients are p/q with 1 <= |p| <= coeff_limit and 1 <= q <= coeff_limit.
  int coeff_limit = 6;
  /// With probability 1/2, add c * exp(q) for a second random polynomial q.
  bool allow_exp = false;
  /// gen_params: probability that each of R, f_l, N is nonzero; 0 gives the trivial family.
  double component_probability = 1.0;

  /// Throws PreconditionError unless max_degree, max_terms, coeff_limit >= 1
  /// and component_probability lies in [0, 1].
  void validate() const;
};

/// Random polynomial in `vars` (nonempty), deterministic in cfg.seed.
Expr gen_expr(const std::vector<Var>& vars, const GenConfig& cfg);

/// x, p_0, ..., p_k.
std::vector<Var> jet_vars(int k);

/// Random free data for the solution family. R is kept polynomial so that
/// exp(-R) is a single exponential; f_l and N honor cfg.allow_exp.
ParamSet gen_params(int n, int m, const GenConfig& cfg);

/// D_m applied k times by direct repetition of total_derivative.
Expr brute_d_pow(int m, int k, const Expr& e);

/// u(x) = sum_i coeffs[i] x^i with exact rational coefficients.
class PolynomialPath {
 public:
  explicit PolynomialPath(std::vector<Rational> coeffs);
  int degree() const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// u^(j) as a path.
  PolynomialPath derivative(int j) const;
  Rational value(const Rational& x) const;
  /// u as an expression in x.
  Expr as_expr() const;

 private:
  std::vector<Rational> coeffs_;
};

PolynomialPath gen_path(int degree, const GenConfig& cfg);

struct OraclePair {
  Rational x;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Largest intermediate magnitude seen on either side.
  double scale = 0.0;
};

/// lhs: sum_k (-1)^k (d/dx)^k [dL/dp_k evaluated along u], by substituting the
/// jet of u and differentiating in x. rhs: E_{2n}^n L evaluated at the jet of u.
/// Throws DependenceError if max_jet(L) > n and PreconditionError if deg u > 2n + 2.
std::vector<OraclePair> el_path_oracle(const Expr& L, int n, const PolynomialPath& u,
                                       const std::vector<Rational>& xs);

}  // namespace varmult
