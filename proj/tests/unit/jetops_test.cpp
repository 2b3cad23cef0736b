#include <gtest/gtest.h>

#include <functional>

#include "inputs.hpp"
#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"
#include "varmult/symexpr.hpp"
#include "varmult/testkit.hpp"

namespace varmult {
namespace {

using Op = std::function<Expr(const Expr&)>;

Expr P(int k) { return Expr::jet(k); }

Op D(int m) {
  return [m](const Expr& e) { return total_derivative(m, e); };
}
Op Dk(int m, int k) {
  return [m, k](const Expr& e) { return d_pow(m, k, e); };
}
Op d(int k) {
  return [k](const Expr& e) { return diff(e, Var::jet(k)); };
}
Op E(int m, int n) {
  return [m, n](const Expr& e) { return euler_op(m, n, e); };
}
Op times(Expr c) {
  return [c](const Expr& e) { return c * e; };
}
// (a * b)(e) = a(b(e)).
Op operator*(Op a, Op b) {
  return [a, b](const Expr& e) { return a(b(e)); };
}
Op operator+(Op a, Op b) {
  return [a, b](const Expr& e) { return a(e) + b(e); };
}
Op operator-(Op a, Op b) {
  return [a, b](const Expr& e) { return a(e) - b(e); };
}

Expr random_expr(std::uint64_t seed, int top_jet) { return testing::identity_input(seed, top_jet); }

::testing::AssertionResult same(const Op& lhs, const Op& rhs, const Expr& e) {
  const Expr diff_expr = lhs(e) - rhs(e);
  const ZeroVerdict v = is_zero(diff_expr);
  if (is_zero_verdict(v)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "identity fails on " << render(e) << ": residual " << render(diff_expr)
                                       << " (" << verdict_name(v) << ")";
}

constexpr int kSamples = 10;

TEST(TotalDerivative, Examples) {
  EXPECT_TRUE(total_derivative(2, P(2)).is_zero());
  EXPECT_EQ(total_derivative(4, P(3)), P(4));
  const Expr x = Expr::x();
  EXPECT_EQ(total_derivative(2, x * P(0) * P(1)), P(0) * P(1) + x * pow(P(1), 2) + x * P(0) * P(2));
  EXPECT_EQ(total_derivative(0, x * P(0)), P(0));
  EXPECT_THROW(total_derivative(-1, P(0)), PreconditionError);
}

TEST(DPow, Examples) {
  const Expr half = Expr(Rational(1, 2));
  EXPECT_EQ(d_pow(4, 2, half * pow(P(2), 2)), pow(P(3), 2) + P(2) * P(4));
  const Expr e = exp(P(1)) * Expr::x();
  EXPECT_EQ(d_pow(3, 0, e), e);
  EXPECT_TRUE(d_pow(2, 3, P(0)).is_zero());
}

TEST(EulerOp, Examples) {
  const Expr e = exp(P(3)) * P(0) * P(1);
  EXPECT_EQ(euler_op(5, 0, e), diff(e, Var::jet(0)));
  EXPECT_EQ(euler_op(4, 2, Expr(Rational(1, 2)) * pow(P(2), 2)), P(4));
  EXPECT_TRUE(euler_op(2, 2, antideriv(exp(-P(2)), Var::jet(2), 2)).is_zero());
}

TEST(MultiIndex, NormsAndAccessors) {
  // m = 4, I = (i_3, i_2, i_1, i_0) = (2, 1, 0, 1).
  const MultiIndex I({2, 1, 0, 1});
  EXPECT_EQ(I.length(), 4);
  EXPECT_EQ(I.at(3), 2);
  EXPECT_EQ(I.at(0), 1);
  EXPECT_EQ(I.slot(1), 2);
  EXPECT_EQ(I.slot(4), 1);
  EXPECT_EQ(I.abs(), 4);
  EXPECT_EQ(I.norm(), 2 * 1 + 1 * 2 + 1 * 4);
  EXPECT_EQ(I.star_norm(), Rational(2 * 24));
  EXPECT_EQ(I.factorial(), Rational(2));
  EXPECT_TRUE(I.shifted(3, -1).has_negative());
  EXPECT_EQ(I.shifted(2, 1), MultiIndex({2, 2, 0, 1}));
  EXPECT_THROW(MultiIndex({}), PreconditionError);
  EXPECT_THROW(MultiIndex({1, -1}), PreconditionError);
}

TEST(ACoeff, Examples) {
  for (int n = 3; n <= 6; ++n) {
    std::vector<int> entries(static_cast<std::size_t>(2 * n - 2), 0);
    MultiIndex I(entries);
    EXPECT_EQ(a_coeff(I.shifted(2 * n - 2 - (n - 1), 1), n), Rational(n));
  }
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(a_coeff(MultiIndex::zero(5), k), Rational(1));
  EXPECT_EQ(a_coeff(MultiIndex({0, 1, 0, 0}), 2), Rational(1));
  EXPECT_EQ(a_coeff(MultiIndex({0, 0, 1, 0}), 2), Rational(0));
}

TEST(ExpandDPow, FourthOrderSecondPower) {
  const auto terms = expand_d_pow(4, 2);
  ASSERT_EQ(terms.size(), 4u);
  const std::vector<std::tuple<Rational, int, int, MultiIndex>> expected{
      {Rational(1), 0, 2, MultiIndex({0, 0, 0, 0})},
      {Rational(2), 1, 1, MultiIndex({1, 0, 0, 0})},
      {Rational(1), 2, 0, MultiIndex({2, 0, 0, 0})},
      {Rational(1), 1, 0, MultiIndex({0, 1, 0, 0})},
  };
  for (std::size_t i = 0; i < terms.size(); ++i) {
    EXPECT_EQ(terms[i].coeff, std::get<0>(expected[i])) << i;
    EXPECT_EQ(terms[i].pm_power, std::get<1>(expected[i])) << i;
    EXPECT_EQ(terms[i].d_power, std::get<2>(expected[i])) << i;
    EXPECT_EQ(terms[i].index, std::get<3>(expected[i])) << i;
  }
}

TEST(ExpandDPow, FirstPowerSplitsTopOrder) {
  const auto terms = expand_d_pow(2, 1);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_EQ(terms[0].index, MultiIndex({0, 0}));
  EXPECT_EQ(terms[0].d_power, 1);
  EXPECT_EQ(terms[1].index, MultiIndex({1, 0}));
  EXPECT_EQ(terms[1].pm_power, 1);
  EXPECT_EQ(terms[1].d_power, 0);
}

TEST(ExpandDPow, RejectsOutOfRange) {
  EXPECT_THROW(expand_d_pow(3, 3), PreconditionError);
  EXPECT_THROW(expand_d_pow(3, 0), PreconditionError);
}

TEST(ExpandDPow, TermsArePositiveAndBounded) {
  for (int m = 2; m <= 7; ++m) {
    for (int k = 1; k < m; ++k) {
      for (const OperatorTerm& t : expand_d_pow(m, k)) {
        EXPECT_GT(t.coeff, Rational(0));
        EXPECT_GE(t.d_power, 0);
        EXPECT_EQ(t.d_power, k - t.index.norm());
        EXPECT_EQ(t.pm_power, t.index.abs());
        EXPECT_EQ(t.coeff, a_coeff(t.index, k));
      }
    }
  }
}

TEST(ExpandDPow, AgreesWithRepeatedApplication) {
  for (int m = 2; m <= 7; ++m) {
    for (int k = 1; k < m && k <= 4; ++k) {
      const auto terms = expand_d_pow(m, k);
      for (int s = 0; s < 3; ++s) {
        const Expr e = random_expr(static_cast<std::uint64_t>(100 * m + 10 * k + s), m);
        EXPECT_EQ(apply_terms(m, terms, e), d_pow(m, k, e)) << "m=" << m << " k=" << k << " e=" << render(e);
      }
    }
  }
}

TEST(ACoeff, RecurrenceHoldsExactly) {
  for (int m = 1; m <= 6; ++m) {
    // Every I of length m with ||I|| <= 4.
    std::vector<MultiIndex> indices;
    std::function<void(int, std::vector<int>&, int)> rec = [&](int j, std::vector<int>& cur, int budget) {
      if (j > m) {
        indices.emplace_back(cur);
        return;
      }
      for (int c = 0; c * j <= budget; ++c) {
        cur[static_cast<std::size_t>(j - 1)] = c;
        rec(j + 1, cur, budget - c * j);
      }
      cur[static_cast<std::size_t>(j - 1)] = 0;
    };
    std::vector<int> cur(static_cast<std::size_t>(m), 0);
    rec(1, cur, 4);
    for (const MultiIndex& I : indices) {
      for (int k = 0; k <= 5; ++k) {
        Rational rhs = a_coeff(I, k);
        for (int j = 1; j <= m; ++j) rhs += binomial(k + j - I.norm(), j - 1) * a_coeff(I.shifted(j, -1), k);
        EXPECT_EQ(a_coeff(I, k + 1), rhs) << "I=" << I.to_string() << " k=" << k;
      }
    }
  }
}

// --- operator identities over generated expressions --------------------------

class Identity : public ::testing::TestWithParam<std::uint64_t> {
 protected:
  Expr e(int top_jet = 6) const { return random_expr(GetParam(), top_jet); }
};

TEST_P(Identity, ExtractingTheMainOrder) {
  for (int m = 1; m <= 7; ++m) EXPECT_TRUE(same(D(m), D(m - 1) + times(P(m)) * d(m - 1), e())) << "m=" << m;
}

TEST_P(Identity, Commutator) {
  for (int m = 1; m <= 7; ++m) {
    for (int n = 1; n <= m; ++n) EXPECT_TRUE(same(d(n) * D(m), D(m) * d(n) + d(n - 1), e())) << m << "," << n;
  }
}

TEST_P(Identity, ReductionOfFourthOrderOperator) {
  const Expr low = random_expr(GetParam(), 2);
  const Op lhs = E(4, 2);
  const Op rhs = E(3, 2) + times(P(4)) * (times(Expr(2)) * D(3) - d(1) + times(P(4)) * d(3)) * d(3) +
                 times(P(4)) * d(2) * d(2);
  EXPECT_TRUE(same(lhs, rhs, low));
}

TEST_P(Identity, ReductionOfFourthOrderOperatorGeneralInput) {
  // For inputs that depend on p3 the D_3 and p4 d/dp3 terms act after d/dp2.
  const Op rhs = E(3, 2) - times(P(4)) * d(1) * d(3) +
                 (times(2 * P(4)) * D(3) * d(3) + times(pow(P(4), 2)) * d(3) * d(3)) * d(2) +
                 times(P(4)) * d(2) * d(2);
  EXPECT_TRUE(same(E(4, 2), rhs, e()));
}

TEST_P(Identity, ReductionOfThirdOrderOperator) {
  const Op rhs = E(2, 2) + times(2 * P(3)) * D(2) * d(2) * d(2) + times(pow(P(3), 2)) * d(2) * d(2) * d(2);
  EXPECT_TRUE(same(E(3, 2), rhs, random_expr(GetParam(), 2)));
  EXPECT_TRUE(same(E(3, 2), rhs, e()));
}

TEST_P(Identity, SecondOrderTelescoping) {
  EXPECT_TRUE(same(E(2, 1) * D(2), times(Expr(-1)) * Dk(2, 2) * d(1), e()));
}

TEST_P(Identity, BinomialCommutation) {
  for (int m = 0; m <= 6; ++m) {
    for (int n = 0; n <= m; ++n) {
      for (int k = 0; k <= 6; k += (m >= 4 ? 2 : 1)) {
        Op rhs = times(Expr(0));
        for (int j = 0; j <= std::min(n, k); ++j) rhs = rhs + times(Expr(binomial(k, j))) * Dk(m, k - j) * d(n - j);
        EXPECT_TRUE(same(d(n) * Dk(m, k), rhs, e(4))) << m << "," << n << "," << k;
      }
    }
  }
}

TEST_P(Identity, SecondDerivativeCommutation) {
  for (int m = 1; m <= 7; ++m) {
    for (int n = 1; n <= m; ++n) {
      EXPECT_TRUE(same(d(n) * d(n) * D(m), (D(m) * d(n) + times(Expr(2)) * d(n - 1)) * d(n), e())) << m << "," << n;
    }
  }
}

TEST_P(Identity, Telescoping) {
  for (int n = 1; n <= 4; ++n) {
    for (int m = n; m <= 6; ++m) {
      const Expr sign = Expr(n % 2 == 0 ? 1 : -1);
      EXPECT_TRUE(same(E(m, n) * D(m), times(sign) * Dk(m, n + 1) * d(n), e())) << m << "," << n;
    }
  }
}

TEST_P(Identity, SecondPartialOfFourthOrderOperator) {
  const Op lhs = d(2) * d(2) * E(2, 2);
  const Op rhs = (Dk(2, 2) * d(2) + times(Expr(3)) * D(2) * d(1) + times(Expr(3)) * d(0)) * d(2) * d(2);
  EXPECT_TRUE(same(lhs, rhs, e()));
}

TEST_P(Identity, FirstPartialOfSecondOrderOperator) {
  EXPECT_TRUE(same(d(1) * E(1, 1), times(Expr(-1)) * D(1) * d(1) * d(1), e()));
}

TEST_P(Identity, EulerTypeCombination) {
  const Op lhs = (D(2) * d(2) - d(1)) * E(2, 2);
  EXPECT_TRUE(same(lhs, Dk(2, 3) * d(2) * d(2), e()));
}

INSTANTIATE_TEST_SUITE_P(Seeds, Identity, ::testing::Range<std::uint64_t>(1, 1 + kSamples));

}  // namespace
}  // namespace varmult
