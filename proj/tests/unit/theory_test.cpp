#include <gtest/gtest.h>

#include <cmath>

#include "adazero/common/error.hpp"
#include "adazero/theory/theory.hpp"

using namespace adazero;
using namespace adazero::theory;

namespace {

// Independent two-action entropy: p = sigmoid(q1 - q2).
double two_action_entropy(double q1, double q2) {
  const double p = 1.0 / (1.0 + std::exp(-(q1 - q2)));
  return -(p * std::log(p) + (1.0 - p) * std::log(1.0 - p));
}

}  // namespace

TEST(Lemma1Condition, Examples) {
  EXPECT_TRUE(lemma1_condition(QSpec{{1, 0}, {0, 1}}));
  EXPECT_FALSE(lemma1_condition(QSpec{{1, 0}, {0, 3}}));
  EXPECT_TRUE(lemma1_condition(QSpec{{0, 0}, {0, 0}}));
  EXPECT_TRUE(lemma1_condition(QSpec{{1, 0}, {0, 2}}));
}

TEST(VerifyLemma1, HandExample) {
  const Lemma1Result r = verify_lemma1(QSpec{{1, 0}, {0, 1}});
  EXPECT_NEAR(r.h_ext, two_action_entropy(1, 0), 1e-14);
  EXPECT_NEAR(r.h_ext, 0.5822, 1e-4);
  EXPECT_NEAR(r.h_total, std::log(2.0), 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(VerifyLemma1, EqualBonusesAreShiftInvariant) {
  for (double c : {-4.0, 0.0, 0.3, 2.5}) {
    const Lemma1Result r = verify_lemma1(QSpec{{1.7, -0.4}, {c, c}});
    EXPECT_EQ(r.h_total, r.h_ext) << c;
    EXPECT_TRUE(r.holds);
  }
}

TEST(VerifyLemma1, RejectsInputsOutsideTheRegion) {
  EXPECT_THROW(verify_lemma1(QSpec{{1, 0}, {0, 3}}), ContractViolation);
  EXPECT_THROW(verify_lemma1(QSpec{{0, 1}, {0, 0}}), ContractViolation);
  EXPECT_THROW(verify_lemma1(QSpec{{1, 0}, {1, 0}}), ContractViolation);
}

TEST(Sweep, NoCounterexampleInsideAndFlipsOutside) {
  const Lemma1SweepReport report = sweep_lemma1(100000, 7);
  EXPECT_EQ(report.in_region, 100000u);
  EXPECT_EQ(report.holds, report.in_region);
  EXPECT_LE(report.max_violation, kEntropyTolerance);
  EXPECT_TRUE(report.counterexamples_inside.empty());
  EXPECT_GT(report.outside_flips, 0u);
  EXPECT_GT(report.outside_pi_total_a2_above_half, 0u);
  EXPECT_EQ(report.rejected_by_precondition, report.outside_region);
  ASSERT_FALSE(report.flips_outside.empty());
  const QSpec& flip = report.flips_outside.front().spec;
  EXPECT_GT(flip.delta[1] - flip.delta[0], 2.0 * (flip.q_ext[0] - flip.q_ext[1]));
  EXPECT_LT(report.seconds, 10.0);
  EXPECT_TRUE(report.passed());
}

TEST(Theorem2, CaseOneExample) {
  const CaseReport r = classify_theorem2(QSpec{{1, 0}, {0, 1}}, {0.0, 0.0});
  EXPECT_EQ(r.case_label, CaseLabel::ExplorationDominant);
  EXPECT_EQ(r.relation, Relation::LessOrEqual);
  EXPECT_EQ(r.adaptive.delta_hat, (std::array<double, 2>{0.0, 1.0}));
}

TEST(Theorem2, CaseThreeIsExactEquality) {
  for (const QSpec& spec : {QSpec{{1, 0}, {0, 1}}, QSpec{{3.3, -2.1}, {-1.7, 4.9}}, QSpec{{0, 0}, {0, 0}}}) {
    const CaseReport r = classify_theorem2(spec, {1.0, 1.0});
    EXPECT_EQ(r.case_label, CaseLabel::ExploitationDominant);
    EXPECT_EQ(r.pi_total, r.pi_ext);
    EXPECT_EQ(r.h_total, r.h_ext);
    EXPECT_EQ(r.relation, Relation::Equal);
  }
}

TEST(Theorem2, ConstructedCaseTwoDecreasesEntropy) {
  const CaseReport r = evaluate_adaptive(AdaptiveQSpec{{1, 0}, {0.5, 0}});
  EXPECT_EQ(r.case_label, CaseLabel::AdaptiveMixed);
  EXPECT_TRUE(r.case_two_pattern);
  EXPECT_EQ(r.relation, Relation::Greater);
  EXPECT_NEAR(r.h_total, two_action_entropy(1.5, 0), 1e-14);
  EXPECT_GT(r.pi_total[0], r.pi_ext[0]);
}

TEST(Theorem2, MixedMasteryShrinksBonusesElementwise) {
  const QSpec spec{{2, 1}, {0.5, 1.5}};
  const CaseReport r = classify_theorem2(spec, {0.25, 0.75});
  EXPECT_EQ(r.case_label, CaseLabel::AdaptiveMixed);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_GE(r.adaptive.delta_hat[a], 0.0);
    EXPECT_LE(r.adaptive.delta_hat[a], spec.delta[a]);
  }
  EXPECT_THROW(classify_theorem2(spec, {1.5, 0.0}), ContractViolation);
}

TEST(Theorem2, SuitePasses) {
  const Theorem2SuiteReport report = theorem2_suite(20000, 3);
  EXPECT_EQ(report.case_one_le, report.case_one_specs);
  EXPECT_EQ(report.case_three_max_policy_diff, 0.0);
  EXPECT_EQ(report.case_three_entropy_equal, report.case_three_specs);
  EXPECT_EQ(report.case_two_strict_decrease, report.case_two_specs);
  EXPECT_TRUE(report.passed());
}

TEST(Monotonicity, GridScan) {
  const MonotonicityReport report = entropy_monotonicity_scan(999);
  EXPECT_EQ(report.increasing_violations, 0);
  EXPECT_EQ(report.decreasing_violations, 0);
  EXPECT_EQ(report.argmax_p, 0.5);
  EXPECT_LT(report.max_deviation_from_ln2, 1e-12);
  EXPECT_LT(report.max_asymmetry, 1e-15);
  EXPECT_TRUE(report.passed());
  EXPECT_THROW(entropy_monotonicity_scan(2), ContractViolation);
}

TEST(Monotonicity, SymmetryAndPeak) {
  const MonotonicityReport small = entropy_monotonicity_scan(9);
  EXPECT_EQ(small.argmax_p, 0.5);
  EXPECT_TRUE(small.passed());
}

TEST(Report, JsonCarriesCounts) {
  const auto sweep = to_json(sweep_lemma1(1000, 1));
  EXPECT_EQ(sweep["in_region"].get<std::size_t>(), 1000u);
  EXPECT_TRUE(sweep["passed"].get<bool>());
  const auto mono = to_json(entropy_monotonicity_scan(99));
  EXPECT_EQ(mono["grid_points"].get<int>(), 99);
  const auto c = to_json(classify_theorem2(QSpec{{1, 0}, {0, 1}}, {0.0, 0.0}));
  EXPECT_EQ(c["case"].get<std::string>(), "ExplorationDominant");
  EXPECT_EQ(c["relation"].get<std::string>(), "<=");
}
