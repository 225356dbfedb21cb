#include <algorithm>

#include "support.hpp"

#include "jensen/oracle.hpp"

using namespace jensen;
using jensen::testing::square_instance;

namespace {

bool same_instance(const Instance& a, const Instance& b) {
  return std::equal(a.x().begin(), a.x().end(), b.x().begin(), b.x().end()) && a.p() == b.p() && a.q() == b.q() &&
         a.f() == b.f() && a.interval() == b.interval();
}

bool same_summary(const CampaignSummary& a, const CampaignSummary& b) {
  if (a.checks.size() != b.checks.size() || a.violations.size() != b.violations.size()) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const auto &x = a.checks[i], &y = b.checks[i];
    if (x.check != y.check || x.evaluated != y.evaluated || x.skipped != y.skipped || x.violations != y.violations ||
        x.min_relative_slack != y.min_relative_slack || x.median_relative_slack != y.median_relative_slack ||
        x.worst_slack != y.worst_slack || x.worst_index != y.worst_index) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("trial generation is a function of (seed, index)") {
  FuzzConfig cfg;
  CHECK(same_instance(random_instance(cfg, 17), random_instance(cfg, 17)));
  CHECK_FALSE(same_instance(random_instance(cfg, 17), random_instance(cfg, 18)));
  FuzzConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK_FALSE(same_instance(random_instance(cfg, 17), random_instance(other, 17)));

  TrialRng a(7, 3), b(7, 3);
  for (int i = 0; i < 10; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("weight modes satisfy their constructions") {
  FuzzConfig cfg;
  cfg.trials = 2000;
  for (auto mode : {WeightMode::NonnegSimplex, WeightMode::SignedPrefix, WeightMode::BoundedPositive}) {
    cfg.mode = mode;
    std::size_t negative = 0;
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      const auto tc = random_trial(cfg, i);
      const auto& inst = tc.instance;
      CHECK(inst.size() >= cfg.n_min);
      CHECK(inst.size() <= cfg.n_max);
      for (Real q : inst.q()) CHECK(q >= 0.05L - 1e-15L);
      CHECK(tc.two_point_p1 / tc.two_point_q1 <= (1 - tc.two_point_p1) / (1 - tc.two_point_q1));
      switch (mode) {
        case WeightMode::NonnegSimplex:
          CHECK(inst.p().nonnegative());
          CHECK(validate_instance(inst, TheoremMode::PointwiseRatio).empty());
          break;
        case WeightMode::SignedPrefix:
          CHECK(validate_instance(inst, TheoremMode::PrefixRatio).empty());
          if (!inst.p().nonnegative()) ++negative;
          break;
        case WeightMode::BoundedPositive:
          for (Real p : inst.p()) CHECK(p >= 0.05L - 1e-15L);
          break;
      }
    }
    if (mode == WeightMode::SignedPrefix) CHECK(negative > cfg.trials / 4);
  }
}

TEST_CASE("positive floor stays feasible") {
  CHECK(positive_floor(8) == 0.05L);
  CHECK(positive_floor(32) * 32 < 1);
}

TEST_CASE("config validation") {
  FuzzConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.trials = 1;
  cfg.n_max = 33;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.n_max = 8;
  cfg.n_min = 1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK_THROWS_AS((void)run_campaign(FuzzConfig{}, {}), InputError);
}

TEST_CASE("check tags round-trip") {
  for (auto c : all_checks()) CHECK(parse_check(tag(c)) == c);
  CHECK_FALSE(parse_check("thm10").has_value());
  CHECK(parse_weight_mode("signed") == WeightMode::SignedPrefix);
}

TEST_CASE("small campaigns find no violations") {
  FuzzConfig cfg;
  cfg.trials = 1000;
  for (auto mode : {WeightMode::NonnegSimplex, WeightMode::SignedPrefix, WeightMode::BoundedPositive}) {
    cfg.mode = mode;
    const auto s = run_campaign(cfg, all_checks());
    CHECK(s.total_violations() == 0);
    CHECK(s.stats(Check::PrefixRatioSandwich).evaluated == cfg.trials);
    CHECK(s.stats(Check::Endpoint).evaluated == cfg.trials);
  }
}

TEST_CASE("campaign summaries do not depend on the thread count") {
  FuzzConfig cfg;
  cfg.trials = 600;
  cfg.mode = WeightMode::SignedPrefix;
  const auto one = run_campaign(cfg, all_checks());
  cfg.threads = 3;
  const auto three = run_campaign(cfg, all_checks());
  cfg.threads = 7;
  const auto seven = run_campaign(cfg, all_checks());
  CHECK(same_summary(one, three));
  CHECK(same_summary(one, seven));
}

TEST_CASE("moduli are certified before use") {
  const auto moduli = prepare_moduli(FuzzConfig{});
  const auto catalog = default_catalog();
  REQUIRE(moduli.size() == catalog.size());
  for (std::size_t e = 0; e < catalog.size(); ++e) {
    for (const auto& pm : moduli[e]) {
      REQUIRE(pm.phi.has_value());
      CHECK(pm.certificate->passed);
    }
  }
}

TEST_CASE("equality witness suite") {
  const auto w = equality_witness_suite(300);
  CHECK(w.passed);
  CHECK(w.lower_ratio_max <= 1e-10L);
  CHECK(w.upper_normalized_max <= 1e-10L);
  CHECK_NEAR(w.merged_chain_n3_slack, 0.6L, 1e-15L);
  CHECK_NEAR(w.adjacent_chain_n3_slack, Real{4} / 9, 1e-15L);
}

TEST_CASE("tightness ranking on the midpoint case") {
  const Interval iv{0, 1};
  const auto inst = square_instance({0, 1}, WeightVector{0.25L, 0.75L}, WeightVector{0.5L, 0.5L}, iv, ModulusSpec(1, 2));
  const auto cert = certify_uniform_convexity(FunctionSpec::square(), ModulusSpec(1, 2), iv);
  const auto r = tightness_ranking(inst, cert);
  CHECK_NEAR(r.jp, 0.1875L, 1e-17L);
  CHECK_NEAR(r.entry("thm7-lower").rhs, 0.0625L, 1e-17L);
  CHECK_NEAR(r.entry("thm9").rhs, 0.0625L, 1e-17L);
  CHECK(r.entry("thm7-lower").rank == r.entry("thm9").rank);
  CHECK(r.entries.size() == 5);
}

TEST_CASE("tightness ranking with a quartic modulus") {
  const Interval iv{0, 1};
  const auto f = FunctionSpec::abs_power(4);
  const ModulusSpec phi(0.125L, 4);
  const auto cert = certify_uniform_convexity(f, phi, iv);
  REQUIRE(cert.passed);
  const Instance inst({0, 1}, WeightVector{0.25L, 0.75L}, WeightVector{0.5L, 0.5L}, f, iv, phi);
  const auto r = tightness_ranking(inst, cert);
  CHECK_NEAR(r.entry("thm7-lower").rhs, 1.0L / 2048, 1e-18L);
  CHECK_NEAR(r.entry("thm9").rhs, 1.0L / 512, 1e-18L);
  CHECK(r.entry("thm9").rank < r.entry("thm7-lower").rank);

  const auto mirrored = tightness_ranking(inst.with_p(WeightVector{0.75L, 0.25L}), cert);
  CHECK_NEAR(mirrored.entry("thm9").rhs, 1.0L / 512, 1e-18L);
}

TEST_CASE("tightness ranking with p = q") {
  const Interval iv{0, 2};
  const auto inst = square_instance({0, 1, 2}, WeightVector::uniform(3), WeightVector::uniform(3), iv, ModulusSpec(1, 2));
  const auto cert = certify_uniform_convexity(FunctionSpec::square(), ModulusSpec(1, 2), iv);
  const auto r = tightness_ranking(inst, cert);
  CHECK_NEAR(r.entry("thm7-lower").rhs, 0, 1e-18L);
  CHECK_NEAR(r.entry("thm8").rhs, 0, 1e-18L);
  CHECK_FALSE(r.skipped.empty());
}
