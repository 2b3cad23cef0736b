#include <gtest/gtest.h>

#include "varmult/checker.hpp"
#include "varmult/errors.hpp"
#include "varmult/jetops.hpp"
#include "varmult/testkit.hpp"
#include "varmult/varcore.hpp"

namespace varmult {
namespace {

Expr P(int k) { return Expr::jet(k); }

GenConfig gen(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.max_degree = 2;
  cfg.max_terms = 3;
  cfg.allow_exp = true;
  return cfg;
}

bool same_verdict(const ZeroVerdict& a, const ZeroVerdict& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<NonZero>(&a)) {
    const auto& y = std::get<NonZero>(b);
    return x->witness == y.witness && x->value == y.value;
  }
  if (const auto* x = std::get_if<ZeroNumeric>(&a)) return x->points_tested == std::get<ZeroNumeric>(b).points_tested;
  if (const auto* x = std::get_if<Inconclusive>(&a)) return x->reason == std::get<Inconclusive>(b).reason;
  return true;
}

TEST(StepId, Rendering) {
  EXPECT_EQ((StepId{StepKind::S1, 0}).to_string(), "S1");
  EXPECT_EQ((StepId{StepKind::S2, 3}).to_string(), "S2(k=3)");
  EXPECT_EQ((StepId{StepKind::S3, 0}).to_string(), "S3");
  EXPECT_EQ((StepId{StepKind::S4, 1}).to_string(), "S4(j=1)");
  EXPECT_EQ((StepId{StepKind::S5, 0}).to_string(), "S5");
}

TEST(Check, TrivialEquation) {
  const CheckReport r = check(Expr(), 2);
  ASSERT_TRUE(r.accepted());
  const auto& a = std::get<CheckAccepted>(r.outcome);
  EXPECT_TRUE(a.rho.is_one());
  EXPECT_EQ(a.L, Expr(Rational(1, 2)) * pow(P(2), 2));
  EXPECT_TRUE(std::holds_alternative<ZeroStructural>(a.residual));
  for (const TraceEntry& e : r.trace) EXPECT_TRUE(std::holds_alternative<ZeroStructural>(e.verdict)) << e.label;
}

TEST(Check, CubicThirdDerivativeRejectedInSecondStep) {
  const CheckReport r = check(pow(P(3), 3), 2);
  ASSERT_TRUE(r.rejected());
  const auto& rej = std::get<CheckRejected>(r.outcome);
  EXPECT_EQ(rej.step, (StepId{StepKind::S2, 3}));
  EXPECT_EQ(rej.witness, Expr(3));
  EXPECT_TRUE(std::holds_alternative<NonZero>(rej.verdict));
}

TEST(Check, SquaredThirdDerivativeAccepted) {
  const CheckReport r = check(pow(P(3), 2), 2);
  ASSERT_TRUE(r.accepted());
  const auto& a = std::get<CheckAccepted>(r.outcome);
  EXPECT_EQ(a.R, P(2));
  EXPECT_EQ(a.rho, exp(-P(2)));
  ASSERT_EQ(a.f_lower.size(), 2u);
  EXPECT_TRUE(a.f_lower[0].is_zero());
  EXPECT_TRUE(a.f_lower[1].is_zero());
  EXPECT_EQ(a.L, P(2) - Expr(1) + exp(-P(2)));
  EXPECT_TRUE(is_zero_verdict(a.residual));
}

TEST(Check, SixthOrderNonlinearTopRejectedInFirstStep) {
  const CheckReport r = check(pow(P(5), 2), 3);
  ASSERT_TRUE(r.rejected());
  const auto& rej = std::get<CheckRejected>(r.outcome);
  EXPECT_EQ(rej.step, (StepId{StepKind::S1, 0}));
  EXPECT_EQ(rej.witness, Expr(2));
}

TEST(Check, FirstDerivativeRejectedInLastStep) {
  // u'''' = u' reaches S5 with h_0 = -p1.
  const CheckReport r = check(P(1), 2);
  ASSERT_TRUE(r.rejected());
  EXPECT_EQ(std::get<CheckRejected>(r.outcome).step, (StepId{StepKind::S5, 0}));
}

TEST(Check, Preconditions) {
  EXPECT_THROW(check(Expr(), 1), PreconditionError);
  EXPECT_THROW(check(P(4), 2), PreconditionError);
  EXPECT_THROW(check(P(6), 3), PreconditionError);
}

TEST(Check, InconclusiveWhenTheBoxLeavesTheDomain) {
  ZeroTestConfig cfg;
  cfg.box = {-2.0, -1.0};
  cfg.max_retries_per_point = 3;
  // exp(log(p1)) - p1 vanishes where defined but is not structurally zero.
  const Expr f = pow(P(3), 3) * (exp(log(P(1))) - P(1));
  const CheckReport r = check(f, 2, cfg);
  ASSERT_TRUE(r.inconclusive());
  EXPECT_EQ(std::get<CheckInconclusive>(r.outcome).step, (StepId{StepKind::S2, 3}));
}

TEST(Check, ExpectedCheckCount) {
  EXPECT_EQ(expected_check_count(2), 7);
  EXPECT_EQ(expected_check_count(3), 12);
  EXPECT_EQ(expected_check_count(4), 18);
}

TEST(Check, TraceFollowsStepOrder) {
  const CheckReport r = check(construct(gen_params(3, 3, gen(7))).f, 3);
  ASSERT_TRUE(r.accepted());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const StepId& a = r.trace[i - 1].step;
    const StepId& b = r.trace[i].step;
    ASSERT_LE(static_cast<int>(a.kind), static_cast<int>(b.kind));
    if (a.kind == b.kind && a.kind == StepKind::S2) {
      EXPECT_GE(a.index, b.index);
    }
    if (a.kind == b.kind && a.kind == StepKind::S4) {
      EXPECT_LE(a.index, b.index);
    }
  }
}

class RandomEquation : public ::testing::TestWithParam<std::tuple<int, std::uint64_t>> {
 protected:
  int n() const { return std::get<0>(GetParam()); }
  ParamSet params() const { return gen_params(n(), n(), gen(std::get<1>(GetParam()))); }
};

TEST_P(RandomEquation, ConstructedEquationIsAcceptedAndVerified) {
  const ParamSet ps = params();
  const auto t = construct(ps);
  const CheckReport r = check(t.f, n());
  ASSERT_TRUE(r.accepted()) << render(t.f);
  const auto& a = std::get<CheckAccepted>(r.outcome);
  EXPECT_TRUE(is_zero_verdict(a.residual));
  for (const TraceEntry& e : r.trace) EXPECT_TRUE(is_zero_verdict(e.verdict)) << e.label;
  EXPECT_TRUE(is_zero_verdict(is_zero(total_derivative(n() + 1, a.R - ps.R()))));
  EXPECT_EQ(r.check_count(), expected_check_count(n()));
}

TEST_P(RandomEquation, CubicTopPerturbationRejected) {
  const Expr f = construct(params()).f + pow(P(2 * n() - 1), 3);
  const CheckReport r = check(f, n());
  ASSERT_TRUE(r.rejected());
  const StepId expected = n() == 2 ? StepId{StepKind::S2, 3} : StepId{StepKind::S1, 0};
  EXPECT_EQ(std::get<CheckRejected>(r.outcome).step, expected);
}

TEST_P(RandomEquation, ReportsAreDeterministic) {
  const Expr f = construct(params()).f + P(1);
  const CheckReport a = check(f, n());
  const CheckReport b = check(f, n());
  ASSERT_EQ(a.outcome.index(), b.outcome.index());
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].step, b.trace[i].step);
    EXPECT_EQ(a.trace[i].label, b.trace[i].label);
    EXPECT_EQ(a.trace[i].checked, b.trace[i].checked);
    EXPECT_TRUE(same_verdict(a.trace[i].verdict, b.trace[i].verdict));
  }
  ASSERT_EQ(a.notes.size(), b.notes.size());
  for (std::size_t i = 0; i < a.notes.size(); ++i) EXPECT_EQ(a.notes[i].text, b.notes[i].text);
}

INSTANTIATE_TEST_SUITE_P(Orders, RandomEquation,
                         ::testing::Combine(::testing::Values(2, 3), ::testing::Range<std::uint64_t>(1, 6)));

}  // namespace
}  // namespace varmult
