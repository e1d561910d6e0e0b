#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace adazero::theory {

inline constexpr double kEntropyTolerance = 1e-12;

/// Two-action specification: extrinsic Q values and intrinsic bonuses, with
/// a1 the optimal action and delta(a1) <= delta(a2).
struct QSpec {
  std::array<double, 2> q_ext{0.0, 0.0};
  std::array<double, 2> delta{0.0, 0.0};

  /// Throws ContractViolation on non-finite values or a broken ordering.
  void validate() const;
};

/// Same, with mastery-weighted bonuses delta_hat.
struct AdaptiveQSpec {
  std::array<double, 2> q_ext{0.0, 0.0};
  std::array<double, 2> delta_hat{0.0, 0.0};
};

enum class CaseLabel { ExplorationDominant, AdaptiveMixed, ExploitationDominant };
enum class Relation { LessOrEqual, Greater, Equal };

const char* to_string(CaseLabel label);
const char* to_string(Relation relation);

/// Equal when |h_ext - h_total| <= kEntropyTolerance, otherwise the sign.
Relation entropy_relation(double h_ext, double h_total);

struct CaseReport {
  CaseLabel case_label{CaseLabel::AdaptiveMixed};
  double h_ext{0.0};
  double h_total{0.0};
  Relation relation{Relation::Equal};
  bool case_two_pattern{false};  // delta_hat(a1) > 0 and delta_hat(a2) == 0
  AdaptiveQSpec adaptive;
  std::array<double, 2> pi_ext{};
  std::array<double, 2> pi_total{};
};

/// 0 <= delta(a2) - delta(a1) <= 2 (Q_ext(a1) - Q_ext(a2)).
bool lemma1_condition(const QSpec& spec);

struct Lemma1Result {
  double h_ext{0.0};
  double h_total{0.0};
  bool holds{false};
};

/// Entropy of softmax(q_ext) against softmax(q_ext + delta). Rejects specs
/// outside the condition region with ContractViolation.
Lemma1Result verify_lemma1(const QSpec& spec);

/// delta_hat(a) = (1 - alpha(a)) delta(a), alpha(a) in [0, 1] being the mean
/// mastery along the path that follows a. All zeros is exploration dominant,
/// all ones exploitation dominant, anything else adaptive.
CaseReport classify_theorem2(const QSpec& spec, std::array<double, 2> alpha);

/// Evaluates a directly constructed delta_hat; labelled adaptive unless it
/// is identically zero.
CaseReport evaluate_adaptive(const AdaptiveQSpec& spec);

struct MonotonicityReport {
  int grid_points{0};
  int increasing_violations{0};
  int decreasing_violations{0};
  double argmax_p{0.0};
  double max_entropy{0.0};
  double max_deviation_from_ln2{0.0};
  double max_asymmetry{0.0};  // max |H(p) - H(1 - p)|
  bool passed() const;
};

/// Binary entropy on p_i = i / (n + 1), i = 1..n.
MonotonicityReport entropy_monotonicity_scan(int grid_points);

struct SpecExample {
  QSpec spec;
  double h_ext{0.0};
  double h_total{0.0};
  double pi_total_a2{0.0};
};

struct Lemma1SweepReport {
  std::uint64_t seed{0};
  std::size_t drawn{0};
  std::size_t in_region{0};
  std::size_t holds{0};
  double max_violation{0.0};  // max over in-region specs of h_ext - h_total
  std::size_t outside_region{0};
  std::size_t outside_flips{0};              // h_ext > h_total + tol
  std::size_t outside_pi_total_a2_above_half{0};
  std::size_t outside_upper_bound_broken{0};  // delta gap > 2 * q gap
  std::size_t tight_proof_step{0};  // |pi_total(a2) - pi_ext(a1)| <= 1e-9 in region
  std::size_t rejected_by_precondition{0};
  std::vector<SpecExample> counterexamples_inside;
  std::vector<SpecExample> flips_outside;
  std::vector<SpecExample> tight_examples;
  double seconds{0.0};
  bool passed() const;
};

/// Draws q_ext and delta from U[-5, 5] (a1 made optimal, deltas ordered)
/// until `in_region_target` specs satisfy the condition, checking each.
Lemma1SweepReport sweep_lemma1(std::size_t in_region_target, std::uint64_t seed);

struct Theorem2SuiteReport {
  std::size_t case_one_specs{0};
  std::size_t case_one_le{0};          // relation <= or =
  std::size_t case_three_specs{0};
  double case_three_max_policy_diff{0.0};
  std::size_t case_three_entropy_equal{0};
  std::size_t case_two_specs{0};
  std::size_t case_two_strict_decrease{0};
  std::size_t mixed_specs{0};
  std::size_t mixed_decrease{0};
  std::size_t mixed_increase{0};
  bool passed() const;
};

/// Case I and III over conditioned random specs, Case II over constructed
/// delta_hat = (x, 0) specs, plus random mastery vectors for context.
Theorem2SuiteReport theorem2_suite(std::size_t specs, std::uint64_t seed);

nlohmann::json to_json(const QSpec& spec);
nlohmann::json to_json(const CaseReport& report);
nlohmann::json to_json(const MonotonicityReport& report);
nlohmann::json to_json(const Lemma1SweepReport& report);
nlohmann::json to_json(const Theorem2SuiteReport& report);

}  // namespace adazero::theory
