#include <gtest/gtest.h>

#include <cmath>

#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"
#include "varmult/testkit.hpp"

namespace varmult {
namespace {

Expr P(int k) { return Expr::jet(k); }
const Expr kHalf = Expr(Rational(1, 2));

TEST(GenExpr, SmallestCaseIsScaledVariable) {
  GenConfig cfg;
  cfg.max_terms = 1;
  cfg.max_degree = 1;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    cfg.seed = s;
    const Expr e = gen_expr({Var::jet(1)}, cfg);
    ASSERT_FALSE(e.is_zero());
    EXPECT_TRUE(diff(e, Var::jet(1)).is_const()) << render(e);
    EXPECT_TRUE(substitute(e, {{Var::jet(1), Expr(0)}}).is_zero()) << render(e);
  }
}

TEST(GenExpr, DeterministicAndBounded) {
  for (std::uint64_t s = 1; s <= 20; ++s) {
    GenConfig cfg;
    cfg.seed = s;
    cfg.allow_exp = true;
    EXPECT_EQ(gen_expr(jet_vars(3), cfg), gen_expr(jet_vars(3), cfg));
    EXPECT_LE(max_jet(gen_expr(jet_vars(3), cfg)), 3);
  }
  GenConfig a, b;
  a.seed = 1;
  b.seed = 2;
  EXPECT_NE(gen_expr(jet_vars(3), a), gen_expr(jet_vars(3), b));
}

TEST(GenExpr, RejectsBadConfig) {
  GenConfig cfg;
  cfg.max_degree = 0;
  EXPECT_THROW(gen_expr(jet_vars(1), cfg), PreconditionError);
  cfg = {};
  cfg.component_probability = 1.5;
  EXPECT_THROW(gen_params(2, 2, cfg), PreconditionError);
  EXPECT_THROW(gen_expr({}, GenConfig{}), PreconditionError);
}

TEST(GenParams, TrivialFamily) {
  GenConfig cfg;
  cfg.component_probability = 0.0;
  const ParamSet ps = gen_params(2, 2, cfg);
  EXPECT_TRUE(ps.R().is_zero());
  EXPECT_TRUE(ps.f(0).is_zero());
  EXPECT_TRUE(ps.f(1).is_zero());
  EXPECT_TRUE(ps.N().is_zero());
}

TEST(GenParams, DeterministicWithinBounds) {
  for (int n = 2; n <= 4; ++n) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
      GenConfig cfg;
      cfg.seed = s;
      cfg.allow_exp = true;
      const ParamSet a = gen_params(n, n + 1, cfg);
      const ParamSet b = gen_params(n, n + 1, cfg);
      EXPECT_EQ(a.R(), b.R());
      EXPECT_EQ(a.N(), b.N());
      EXPECT_EQ(a.m(), n + 1);
      EXPECT_LE(max_jet(a.R()), n);
      EXPECT_LE(max_jet(a.N()), n - 1);
      for (int l = 0; l < n; ++l) {
        EXPECT_EQ(a.f(l), b.f(l));
        EXPECT_LE(max_jet(a.f(l)), l);
      }
    }
  }
  EXPECT_THROW(gen_params(2, 1, GenConfig{}), PreconditionError);
}

TEST(BruteDPow, Examples) {
  EXPECT_EQ(brute_d_pow(4, 2, P(2)), apply_terms(4, expand_d_pow(4, 2), P(2)));
  EXPECT_EQ(brute_d_pow(4, 2, P(2)), P(4));
  const Expr e = exp(P(1)) * P(3);
  EXPECT_EQ(brute_d_pow(3, 0, e), e);
}

TEST(BruteDPow, MatchesExpansion) {
  for (int m = 2; m <= 7; ++m) {
    for (int k = 1; k < m; ++k) {
      const auto terms = expand_d_pow(m, k);
      for (std::uint64_t s = 1; s <= 10; ++s) {
        GenConfig cfg;
        cfg.seed = s * 1000 + static_cast<std::uint64_t>(m * 10 + k);
        cfg.max_degree = 2;
        cfg.max_terms = 2;
        const Expr e = gen_expr(jet_vars(m), cfg);
        EXPECT_EQ(brute_d_pow(m, k, e), apply_terms(m, terms, e)) << m << "," << k << " " << render(e);
      }
    }
  }
}

TEST(PolynomialPath, DerivativesAndValues) {
  const PolynomialPath u({Rational(1), Rational(0), Rational(3)});  // 1 + 3x^2
  EXPECT_EQ(u.degree(), 2);
  EXPECT_EQ(u.value(Rational(2)), Rational(13));
  EXPECT_EQ(u.derivative(1).value(Rational(2)), Rational(12));
  EXPECT_EQ(u.derivative(3).degree(), -1);
  EXPECT_EQ(u.as_expr(), Expr(1) + 3 * pow(Expr::x(), 2));
}

TEST(ElPathOracle, QuarticPath) {
  const auto pairs = el_path_oracle(kHalf * pow(P(2), 2), 2, PolynomialPath({0, 0, 0, 0, 1}), {Rational(1)});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_DOUBLE_EQ(pairs[0].lhs, 24.0);
  EXPECT_DOUBLE_EQ(pairs[0].rhs, 24.0);
}

TEST(ElPathOracle, FourthPlusSecondOnParabola) {
  const Expr L = kHalf * pow(P(2), 2) - kHalf * pow(P(1), 2);
  const auto pairs = el_path_oracle(L, 2, PolynomialPath({0, 0, 1}), {Rational(0)});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_DOUBLE_EQ(pairs[0].lhs, 2.0);
  EXPECT_DOUBLE_EQ(pairs[0].rhs, 2.0);
}

TEST(ElPathOracle, TotalDerivativeIsNull) {
  const auto pairs =
      el_path_oracle(P(1), 2, PolynomialPath({1, -2, 3, 5}), {Rational(-1), Rational(0), Rational(1, 2)});
  for (const auto& pr : pairs) {
    EXPECT_EQ(pr.lhs, 0.0);
    EXPECT_EQ(pr.rhs, 0.0);
  }
}

TEST(ElPathOracle, Preconditions) {
  EXPECT_THROW(el_path_oracle(P(3), 2, PolynomialPath({1}), {Rational(0)}), DependenceError);
  EXPECT_THROW(el_path_oracle(P(2), 2, PolynomialPath(std::vector<Rational>(8, Rational(1))), {Rational(0)}),
               PreconditionError);
}

TEST(ElPathOracle, RandomAgreement) {
  // Polynomial Lagrangians: exp of a high-degree path polynomial overflows exact 64-bit rationals.
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    GenConfig cfg;
    cfg.seed = s;
    const Expr L = gen_expr(jet_vars(n), cfg);
    cfg.seed = s + 500;
    cfg.coeff_limit = 3;
    const PolynomialPath u = gen_path(2 * n + 2, cfg);
    const Rational x(static_cast<std::int64_t>(s % 5) - 2, 3);
    for (const auto& pr : el_path_oracle(L, n, u, {x})) {
      EXPECT_LE(std::abs(pr.lhs - pr.rhs), 1e-9 + 1e-8 * pr.scale) << render(L);
    }
  }
}

TEST(ElPathOracle, ExponentialLagrangian) {
  const Expr L = exp(P(1)) * kHalf * pow(P(2), 2);
  const PolynomialPath u({Rational(1), Rational(-1, 2), Rational(1, 3), Rational(0), Rational(1, 4)});
  for (const auto& pr : el_path_oracle(L, 2, u, {Rational(-1), Rational(1, 2)})) {
    EXPECT_LE(std::abs(pr.lhs - pr.rhs), 1e-9 + 1e-8 * pr.scale);
  }
}

}  // namespace
}  // namespace varmult
