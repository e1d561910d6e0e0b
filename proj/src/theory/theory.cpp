#include "adazero/theory/theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "adazero/common/error.hpp"
#include "adazero/nn/distribution.hpp"

namespace adazero::theory {

namespace {

constexpr std::size_t kMaxExamples = 5;

// Two-action softmax evaluated on the logit gap, so a bonus shared by both
// actions cancels exactly.
std::array<double, 2> policy_of(const std::array<double, 2>& q, const std::array<double, 2>& bonus) {
  const std::array<double, 2> logits{(q[0] - q[1]) + (bonus[0] - bonus[1]), 0.0};
  const nn::PolicyDistribution p = nn::softmax(logits);
  return {p[0], p[1]};
}

constexpr std::array<double, 2> kNoBonus{0.0, 0.0};

double entropy_of(const std::array<double, 2>& p) { return nn::entropy(p); }

CaseReport evaluate(const AdaptiveQSpec& spec, CaseLabel label) {
  CaseReport report;
  report.case_label = label;
  report.adaptive = spec;
  report.pi_ext = policy_of(spec.q_ext, kNoBonus);
  report.pi_total = policy_of(spec.q_ext, spec.delta_hat);
  report.h_ext = entropy_of(report.pi_ext);
  report.h_total = entropy_of(report.pi_total);
  report.relation = entropy_relation(report.h_ext, report.h_total);
  report.case_two_pattern = spec.delta_hat[0] > 0.0 && spec.delta_hat[1] == 0.0;
  return report;
}

QSpec draw_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  QSpec spec;
  spec.q_ext = {u(rng), u(rng)};
  spec.delta = {u(rng), u(rng)};
  if (spec.q_ext[0] < spec.q_ext[1]) std::swap(spec.q_ext[0], spec.q_ext[1]);
  if (spec.delta[0] > spec.delta[1]) std::swap(spec.delta[0], spec.delta[1]);
  return spec;
}

QSpec draw_conditioned_spec(std::mt19937_64& rng) {
  for (;;) {
    const QSpec spec = draw_spec(rng);
    if (lemma1_condition(spec)) return spec;
  }
}

SpecExample example_of(const QSpec& spec) {
  SpecExample ex;
  ex.spec = spec;
  const auto pi_ext = policy_of(spec.q_ext, kNoBonus);
  const auto pi_total = policy_of(spec.q_ext, spec.delta);
  ex.h_ext = entropy_of(pi_ext);
  ex.h_total = entropy_of(pi_total);
  ex.pi_total_a2 = pi_total[1];
  return ex;
}

nlohmann::json examples_json(const std::vector<SpecExample>& examples) {
  nlohmann::json out = nlohmann::json::array();
  for (const SpecExample& ex : examples) {
    out.push_back({{"spec", to_json(ex.spec)},
                   {"h_ext", ex.h_ext},
                   {"h_total", ex.h_total},
                   {"pi_total_a2", ex.pi_total_a2}});
  }
  return out;
}

}  // namespace

void QSpec::validate() const {
  for (double v : {q_ext[0], q_ext[1], delta[0], delta[1]}) require(std::isfinite(v), "QSpec values must be finite");
  require(q_ext[0] >= q_ext[1], "QSpec: a1 must be the optimal action");
  require(delta[0] <= delta[1], "QSpec: delta(a1) must not exceed delta(a2)");
}

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::ExplorationDominant: return "ExplorationDominant";
    case CaseLabel::AdaptiveMixed: return "AdaptiveMixed";
    case CaseLabel::ExploitationDominant: return "ExploitationDominant";
  }
  return "?";
}

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::LessOrEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::Equal: return "=";
  }
  return "?";
}

Relation entropy_relation(double h_ext, double h_total) {
  if (std::abs(h_ext - h_total) <= kEntropyTolerance) return Relation::Equal;
  return h_ext < h_total ? Relation::LessOrEqual : Relation::Greater;
}

bool lemma1_condition(const QSpec& spec) {
  const double delta_gap = spec.delta[1] - spec.delta[0];
  return 0.0 <= delta_gap && delta_gap <= 2.0 * (spec.q_ext[0] - spec.q_ext[1]);
}

Lemma1Result verify_lemma1(const QSpec& spec) {
  spec.validate();
  require(lemma1_condition(spec), "verify_lemma1: spec is outside the lemma's condition region");
  const double h_ext = entropy_of(policy_of(spec.q_ext, kNoBonus));
  const double h_total = entropy_of(policy_of(spec.q_ext, spec.delta));
  return Lemma1Result{h_ext, h_total, h_ext <= h_total + kEntropyTolerance};
}

CaseReport classify_theorem2(const QSpec& spec, std::array<double, 2> alpha) {
  spec.validate();
  for (double a : alpha) require(a >= 0.0 && a <= 1.0, "classify_theorem2: alpha outside [0, 1]");
  AdaptiveQSpec adaptive;
  adaptive.q_ext = spec.q_ext;
  for (std::size_t i = 0; i < 2; ++i) adaptive.delta_hat[i] = (1.0 - alpha[i]) * spec.delta[i];
  CaseLabel label = CaseLabel::AdaptiveMixed;
  if (alpha[0] == 0.0 && alpha[1] == 0.0) label = CaseLabel::ExplorationDominant;
  if (alpha[0] == 1.0 && alpha[1] == 1.0) label = CaseLabel::ExploitationDominant;
  return evaluate(adaptive, label);
}

CaseReport evaluate_adaptive(const AdaptiveQSpec& spec) {
  const bool zero = spec.delta_hat[0] == 0.0 && spec.delta_hat[1] == 0.0;
  return evaluate(spec, zero ? CaseLabel::ExploitationDominant : CaseLabel::AdaptiveMixed);
}

bool MonotonicityReport::passed() const {
  return increasing_violations == 0 && decreasing_violations == 0 && max_deviation_from_ln2 < 1e-12 &&
         argmax_p == 0.5;
}

MonotonicityReport entropy_monotonicity_scan(int grid_points) {
  require(grid_points >= 3, "entropy_monotonicity_scan needs at least 3 grid points");
  MonotonicityReport report;
  report.grid_points = grid_points;
  const double denom = static_cast<double>(grid_points) + 1.0;
  std::vector<double> p(static_cast<std::size_t>(grid_points));
  std::vector<double> h(p.size());
  for (int i = 0; i < grid_points; ++i) {
    p[static_cast<std::size_t>(i)] = (i + 1) / denom;
    h[static_cast<std::size_t>(i)] = nn::binary_entropy(p[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i + 1] <= 0.5 && !(h[i + 1] > h[i])) ++report.increasing_violations;
    if (p[i] >= 0.5 && !(h[i + 1] < h[i])) ++report.decreasing_violations;
  }
  const auto best = std::max_element(h.begin(), h.end());
  report.argmax_p = p[static_cast<std::size_t>(best - h.begin())];
  report.max_entropy = *best;
  report.max_deviation_from_ln2 = std::abs(nn::binary_entropy(0.5) - std::log(2.0));
  report.max_deviation_from_ln2 = std::max(report.max_deviation_from_ln2, std::abs(report.max_entropy - std::log(2.0)));
  for (std::size_t i = 0; i < p.size(); ++i) {
    report.max_asymmetry = std::max(report.max_asymmetry, std::abs(h[i] - nn::binary_entropy(1.0 - p[i])));
  }
  return report;
}

bool Lemma1SweepReport::passed() const {
  return in_region > 0 && holds == in_region && outside_upper_bound_broken > 0 &&
         (outside_flips > 0 || outside_pi_total_a2_above_half > 0);
}

Lemma1SweepReport sweep_lemma1(std::size_t in_region_target, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  Lemma1SweepReport report;
  report.seed = seed;
  report.max_violation = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  while (report.in_region < in_region_target) {
    const QSpec spec = draw_spec(rng);
    ++report.drawn;
    if (!lemma1_condition(spec)) {
      ++report.outside_region;
      try {
        verify_lemma1(spec);
      } catch (const ContractViolation&) {
        ++report.rejected_by_precondition;
      }
      const SpecExample ex = example_of(spec);
      if (spec.delta[1] - spec.delta[0] > 2.0 * (spec.q_ext[0] - spec.q_ext[1])) ++report.outside_upper_bound_broken;
      if (ex.h_ext > ex.h_total + kEntropyTolerance) {
        ++report.outside_flips;
        if (report.flips_outside.size() < kMaxExamples) report.flips_outside.push_back(ex);
      }
      if (ex.pi_total_a2 > 0.5) ++report.outside_pi_total_a2_above_half;
      continue;
    }
    ++report.in_region;
    const Lemma1Result r = verify_lemma1(spec);
    report.max_violation = std::max(report.max_violation, r.h_ext - r.h_total);
    if (r.holds) {
      ++report.holds;
    } else if (report.counterexamples_inside.size() < kMaxExamples) {
      report.counterexamples_inside.push_back(example_of(spec));
    }
    const auto pi_ext = policy_of(spec.q_ext, kNoBonus);
    const SpecExample ex = example_of(spec);
    if (std::abs(ex.pi_total_a2 - pi_ext[0]) <= 1e-9) {
      ++report.tight_proof_step;
      if (report.tight_examples.size() < kMaxExamples) report.tight_examples.push_back(ex);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

bool Theorem2SuiteReport::passed() const {
  return case_one_specs > 0 && case_one_le == case_one_specs && case_three_max_policy_diff == 0.0 &&
         case_three_entropy_equal == case_three_specs && case_two_specs > 0 &&
         case_two_strict_decrease == case_two_specs;
}

Theorem2SuiteReport theorem2_suite(std::size_t specs, std::uint64_t seed) {
  Theorem2SuiteReport report;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> bonus(0.1, 5.0);
  for (std::size_t i = 0; i < specs; ++i) {
    const QSpec spec = draw_conditioned_spec(rng);

    const CaseReport one = classify_theorem2(spec, {0.0, 0.0});
    ++report.case_one_specs;
    if (one.relation != Relation::Greater) ++report.case_one_le;

    const CaseReport three = classify_theorem2(spec, {1.0, 1.0});
    ++report.case_three_specs;
    for (std::size_t a = 0; a < 2; ++a) {
      report.case_three_max_policy_diff =
          std::max(report.case_three_max_policy_diff, std::abs(three.pi_total[a] - three.pi_ext[a]));
    }
    if (three.h_total == three.h_ext) ++report.case_three_entropy_equal;

    AdaptiveQSpec constructed;
    constructed.q_ext = spec.q_ext;
    constructed.delta_hat = {bonus(rng), 0.0};
    const CaseReport two = evaluate_adaptive(constructed);
    ++report.case_two_specs;
    if (two.case_two_pattern && two.relation == Relation::Greater) ++report.case_two_strict_decrease;

    const CaseReport mixed = classify_theorem2(spec, {unit(rng), unit(rng)});
    ++report.mixed_specs;
    if (mixed.relation == Relation::Greater) ++report.mixed_decrease;
    if (mixed.relation == Relation::LessOrEqual) ++report.mixed_increase;
  }
  return report;
}

nlohmann::json to_json(const QSpec& spec) {
  return {{"q_ext", spec.q_ext}, {"delta", spec.delta}};
}

nlohmann::json to_json(const CaseReport& report) {
  return {{"case", to_string(report.case_label)},
          {"h_ext", report.h_ext},
          {"h_total", report.h_total},
          {"relation", to_string(report.relation)},
          {"case_two_pattern", report.case_two_pattern},
          {"q_ext", report.adaptive.q_ext},
          {"delta_hat", report.adaptive.delta_hat}};
}

nlohmann::json to_json(const MonotonicityReport& report) {
  return {{"grid_points", report.grid_points},
          {"increasing_violations", report.increasing_violations},
          {"decreasing_violations", report.decreasing_violations},
          {"argmax_p", report.argmax_p},
          {"max_entropy", report.max_entropy},
          {"max_deviation_from_ln2", report.max_deviation_from_ln2},
          {"max_asymmetry", report.max_asymmetry},
          {"passed", report.passed()}};
}

nlohmann::json to_json(const Lemma1SweepReport& report) {
  return {{"seed", report.seed},
          {"drawn", report.drawn},
          {"in_region", report.in_region},
          {"holds", report.holds},
          {"max_violation", report.max_violation},
          {"outside_region", report.outside_region},
          {"outside_flips", report.outside_flips},
          {"outside_pi_total_a2_above_half", report.outside_pi_total_a2_above_half},
          {"outside_upper_bound_broken", report.outside_upper_bound_broken},
          {"rejected_by_precondition", report.rejected_by_precondition},
          {"tight_proof_step", report.tight_proof_step},
          {"counterexamples_inside", examples_json(report.counterexamples_inside)},
          {"flips_outside", examples_json(report.flips_outside)},
          {"tight_examples", examples_json(report.tight_examples)},
          {"seconds", report.seconds},
          {"passed", report.passed()}};
}

nlohmann::json to_json(const Theorem2SuiteReport& report) {
  return {{"case_one_specs", report.case_one_specs},
          {"case_one_le", report.case_one_le},
          {"case_three_specs", report.case_three_specs},
          {"case_three_max_policy_diff", report.case_three_max_policy_diff},
          {"case_three_entropy_equal", report.case_three_entropy_equal},
          {"case_two_specs", report.case_two_specs},
          {"case_two_strict_decrease", report.case_two_strict_decrease},
          {"mixed_specs", report.mixed_specs},
          {"mixed_decrease", report.mixed_decrease},
          {"mixed_increase", report.mixed_increase},
          {"passed", report.passed()}};
}

}  // namespace adazero::theory
