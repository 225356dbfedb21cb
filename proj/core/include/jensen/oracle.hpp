#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jensen/instance.hpp"
#include "jensen/report.hpp"
#include "jensen/uniform_convex.hpp"

namespace jensen {

enum class WeightMode {
  NonnegSimplex,    // p on the simplex, occasionally with a zero entry
  SignedPrefix,     // p signed, sorted prefix sums in [0, 1]
  BoundedPositive,  // p with every entry at least the positive floor
};

[[nodiscard]] std::string_view to_string(WeightMode mode);
[[nodiscard]] std::optional<WeightMode> parse_weight_mode(std::string_view name);

/// One predicate family checked by the campaign. Tags are the strings
/// accepted on the command line.
enum class Check {
  RatioSandwich,        // thm1
  PrefixRatioSandwich,  // thm2 (plus m <= m* <= 1 <= M* <= M)
  InteriorRefinement,   // rem1
  AdjacentChain,        // thm3
  Endpoint,             // thm4
  TwoPointSandwich,     // thm5
  UniformReference,     // thm6
  BarycentricModulus,   // eq32
  LowerRatio,           // thm7-lower
  UpperRatio,           // thm7-upper (both scalings)
  MergedChain,          // thm8
  TwoPointChain,        // thm9
};

[[nodiscard]] std::string_view tag(Check c);
[[nodiscard]] std::optional<Check> parse_check(std::string_view tag);
[[nodiscard]] std::vector<Check> all_checks();

/// A function with the interval its instances are drawn from.
struct CatalogEntry {
  FunctionSpec f;
  Interval interval;
};

[[nodiscard]] std::vector<CatalogEntry> default_catalog();

struct FuzzConfig {
  std::uint64_t seed = 0x5eed;
  std::size_t trials = 10000;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  WeightMode mode = WeightMode::NonnegSimplex;
  std::vector<CatalogEntry> functions = default_catalog();
  std::vector<Real> modulus_exponents{2};
  Tolerance tolerance;
  unsigned threads = 1;

  /// Throws InputError when trials == 0 or the n range leaves [2, 32].
  void validate() const;
};

/// Per-trial generator: a 64-bit Mersenne twister keyed on (seed, index)
/// through std::seed_seq, so each trial is independent of evaluation order.
/// Uniform reals use the top 53 bits, which keeps draws identical across
/// standard libraries.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t index);
  [[nodiscard]] Real uniform();                           // [0, 1)
  [[nodiscard]] Real uniform(Real lo, Real hi);           // [lo, hi)
  [[nodiscard]] std::size_t below(std::size_t n);         // {0, ..., n-1}
  [[nodiscard]] std::vector<Real> simplex(std::size_t n); // flat Dirichlet

 private:
  std::mt19937_64 engine_;
};

/// Smallest entry of a bounded-positive draw of length n: 0.05, lowered to
/// 1/(2n) when n > 10 so that the floor stays feasible.
[[nodiscard]] Real positive_floor(std::size_t n);

/// Everything a trial needs: the instance (q always bounded-positive, p
/// per weight mode, no modulus attached) and the two-point parameters.
struct TrialCase {
  Instance instance;
  std::size_t catalog_index = 0;
  std::size_t exponent_index = 0;
  Real two_point_p1 = 0.5;
  Real two_point_q1 = 0.5;
};

[[nodiscard]] TrialCase random_trial(const FuzzConfig& cfg, std::size_t index);
[[nodiscard]] Instance random_instance(const FuzzConfig& cfg, std::size_t index);

struct CheckStats {
  Check check = Check::RatioSandwich;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  Real min_relative_slack = 0;
  Real median_relative_slack = 0;
  Real worst_slack = 0;
  std::size_t worst_index = 0;
};

struct Violation {
  Check check = Check::RatioSandwich;
  std::size_t index = 0;
  Real slack = 0;
  Real bound = 0;
  std::string detail;
};

struct CampaignSummary {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  WeightMode mode = WeightMode::NonnegSimplex;
  std::vector<CheckStats> checks;
  std::vector<Violation> violations;

  [[nodiscard]] std::size_t total_violations() const { return violations.size(); }
  [[nodiscard]] const CheckStats& stats(Check c) const;
};

/// A certified modulus for one catalog entry and exponent, or none.
struct PreparedModulus {
  std::optional<ModulusSpec> phi;
  std::optional<Certificate> certificate;
};

/// Moduli for every (catalog entry, exponent): the analytic strong-convexity
/// modulus for exponent 2 when one exists, otherwise half the grid estimate;
/// each is then certified on the default grid.
[[nodiscard]] std::vector<std::vector<PreparedModulus>> prepare_moduli(const FuzzConfig& cfg);

[[nodiscard]] CampaignSummary run_campaign(const FuzzConfig& cfg, const std::vector<Check>& checks);

/// Residuals of the equality cases for f = x^2 with Phi(d) = d^2.
struct WitnessReport {
  std::size_t trials = 0;
  Real lower_ratio_max = 0;       // max |slack| / scale
  Real upper_normalized_max = 0;
  Real barycentric_max = 0;
  Real two_point_specials_max = 0;
  Real two_point_chain_max = 0;
  Real adjacent_chain_n2_max = 0;
  Real merged_chain_n2_max = 0;
  Real merged_chain_n3_slack = 0;    // fixed witness, expected strictly positive
  Real adjacent_chain_n3_slack = 0;  // fixed witness, expected 4/9
  Tolerance tolerance;
  bool passed = false;
};

[[nodiscard]] WitnessReport equality_witness_suite(std::size_t trials = 1000, std::uint64_t seed = 0x5eed,
                                                   const Tolerance& tol = {});

struct RankedRefinement {
  std::string tag;
  Real rhs = 0;      // refinement value
  Real offset = 0;   // m J(q) for ratio-based refinements, else 0
  Real implied = 0;  // lower bound on J(p): offset + rhs
  std::size_t rank = 0;
};

struct TightnessRanking {
  Real jp = 0;
  std::vector<RankedRefinement> entries;  // sorted by implied, descending
  std::vector<std::string> skipped;

  [[nodiscard]] const RankedRefinement& entry(std::string_view tag) const;
};

/// Evaluates every applicable lower refinement of J(p) on one instance and
/// ranks them by the lower bound they imply; entries within tolerance share
/// a rank.
[[nodiscard]] TightnessRanking tightness_ranking(const Instance& inst, const Certificate& cert,
                                                 const Tolerance& tol = {});

}  // namespace jensen
