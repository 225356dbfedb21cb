#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "jensen/classic_bounds.hpp"
#include "jensen/oracle.hpp"
#include "jensen/refined_bounds.hpp"
#include "jensen/uniform_convex.hpp"

using namespace jensen;

namespace {

constexpr Real kResidual = 1e-10L;
constexpr Real kWorked = 1e-12L;
constexpr Real kWitness = 1e-9L;
constexpr Real kCertSlack = 1e-12L;
constexpr Real kEstimate = 1e-6L;
constexpr double kCampaignSeconds = 5.0;
constexpr std::size_t kLarge = 10000;
constexpr std::size_t kSmall = 1000;
constexpr std::size_t kInteriorPopulation = 500;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(Real v) { return format_real(v); }

std::size_t violations(const CampaignSummary& s, Check c) { return s.stats(c).violations; }

CampaignSummary campaign(WeightMode mode, std::size_t trials, std::vector<Check> checks) {
  FuzzConfig cfg;
  cfg.trials = trials;
  cfg.mode = mode;
  return run_campaign(cfg, checks);
}

const ModulusSpec kD2(1, 2);

Instance square_instance(std::vector<Real> x, WeightVector p, WeightVector q, Interval iv) {
  return Instance(std::move(x), std::move(p), std::move(q), FunctionSpec::square(), iv, kD2);
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const auto s = campaign(WeightMode::NonnegSimplex, kLarge, {Check::RatioSandwich});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& st = s.stats(Check::RatioSandwich);
  Outcome o;
  o.pass = st.evaluated == kLarge && st.violations == 0 && seconds < kCampaignSeconds;
  o.detail = "thm1 on " + std::to_string(st.evaluated) + " nonneg instances, " + std::to_string(st.violations) +
             " violations, " + std::to_string(seconds) + " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t evaluated = 0, bad = 0, invariant_failures = 0;
  const Tolerance tol;
  for (auto mode : {WeightMode::SignedPrefix, WeightMode::NonnegSimplex}) {
    const auto s = campaign(mode, kLarge, {Check::PrefixRatioSandwich});
    evaluated += s.stats(Check::PrefixRatioSandwich).evaluated;
    bad += violations(s, Check::PrefixRatioSandwich);

    FuzzConfig cfg;
    cfg.mode = mode;
    cfg.trials = kLarge;
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      const auto inst = random_instance(cfg, i);
      const auto r = prefix_suffix_ratios(increasing_rearrangement(inst));
      if (r.prefix.back() != 1 || r.suffix.front() != 1) ++invariant_failures;
      if (!inst.q().strictly_positive()) continue;
      const auto c = ratio_extremes(inst.p(), inst.q());
      const Real band = tol.bound(std::max({std::fabs(c.m), std::fabs(c.M), Real{1}}));
      if (c.m > r.m_star + band || r.m_star > 1 || r.M_star < 1 || r.M_star > c.M + band) ++invariant_failures;
    }
  }
  o.pass = evaluated == 2 * kLarge && bad == 0 && invariant_failures == 0;
  o.detail = "thm2 on " + std::to_string(evaluated) + " signed+nonneg instances, " + std::to_string(bad) +
             " violations, " + std::to_string(invariant_failures) + " ordering/endpoint-ratio failures";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Tolerance tol;
  FuzzConfig cfg;
  cfg.n_min = 3;
  std::size_t population = 0, refined = 0;
  Real smallest = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < kLarge; ++i) {
    const auto inst = random_instance(cfg, i);
    const auto r = interior_refinement(inst, tol);
    if (!r.min_interior_only) continue;
    ++population;
    smallest = std::min(smallest, r.m_star - r.m);
    if (r.m_star - r.m > tol.bound(std::max(std::fabs(r.m_star), Real{1}))) ++refined;
  }

  cfg.n_min = cfg.n_max = 2;
  std::size_t two_point_mismatch = 0;
  for (std::size_t i = 0; i < kSmall; ++i) {
    const auto r = interior_refinement(random_instance(cfg, i), tol);
    if (r.m_star != r.m || r.M_star != r.M) ++two_point_mismatch;
  }
  o.pass = population >= kInteriorPopulation && refined == population && two_point_mismatch == 0;
  o.detail = "interior-min population " + std::to_string(population) + ", refined " + std::to_string(refined) +
             ", min m*-m " + fmt(smallest) + ", n=2 mismatches " + std::to_string(two_point_mismatch);
  return o;
}

Outcome criterion4(const WitnessReport& w) {
  Outcome o;
  const Real expected = Real{4} / 9;
  o.pass = w.adjacent_chain_n2_max <= kResidual && std::fabs(w.adjacent_chain_n3_slack - expected) <= kWitness;
  o.detail = "thm3 n=2 max |slack|/scale " + fmt(w.adjacent_chain_n2_max) + " over " + std::to_string(w.trials) +
             ", n=3 witness slack " + fmt(w.adjacent_chain_n3_slack) + " (expected 4/9)";
  return o;
}

Outcome criterion5(const WitnessReport& w) {
  Outcome o;
  o.pass = w.lower_ratio_max <= kResidual && w.upper_normalized_max <= kResidual;
  o.detail = "thm7 lower max |slack|/scale " + fmt(w.lower_ratio_max) + ", normalized upper " +
             fmt(w.upper_normalized_max) + " over " + std::to_string(w.trials);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Tolerance tol;
  const auto cert = certify_uniform_convexity(FunctionSpec::square(), kD2, {0, 2});
  const auto two = merged_chain_refinement(
      square_instance({0, 1}, WeightVector{0.2L, 0.8L}, WeightVector{0.5L, 0.5L}, {0, 2}), cert, tol);
  const auto three = merged_chain_refinement(
      square_instance({0, 1, 2}, WeightVector{0.4L, 0.1L, 0.5L}, WeightVector::uniform(3), {0, 2}), cert, tol);
  const bool worked = std::fabs(two.gap.value - 0.06L) <= kWorked && std::fabs(two.total() - 0.06L) <= kWorked;
  const bool strict = three.slack > 10 * tol.bound(three.scale);
  o.pass = cert.passed && worked && strict;
  o.detail = "thm8 n=2 gap " + fmt(two.gap.value) + " term " + fmt(two.total()) + ", n=3 slack " + fmt(three.slack) +
             " vs 10*tol " + fmt(10 * tol.bound(three.scale));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const Real quarter_phi = kD2(0.5L);
  Real best = -1, arg = 0, best_chain = 0;
  for (int k = 1; k <= 5000; ++k) {
    const Real p1 = k * 1e-4L;
    const auto c = compare_midpoint_refinements(kD2, 0, 1, p1);
    const Real factor = c.chain / quarter_phi;
    if (factor > best) {
      best = factor;
      arg = p1;
      best_chain = c.best_chain;
    }
  }
  const bool peak = std::fabs(arg - 0.25L) <= 1e-12L && std::fabs(best - 0.25L) <= kWorked &&
                    std::fabs(best_chain / quarter_phi - 0.25L) <= kWorked;

  std::size_t evaluated = 0, bad = 0;
  Real worst = std::numeric_limits<Real>::infinity();
  for (auto mode : {WeightMode::NonnegSimplex, WeightMode::BoundedPositive}) {
    const auto s = campaign(mode, kSmall, {Check::TwoPointChain});
    const auto& st = s.stats(Check::TwoPointChain);
    evaluated += st.evaluated;
    bad += st.violations;
    worst = std::min(worst, st.worst_slack);
  }
  o.pass = peak && evaluated == 2 * kSmall && bad == 0;
  o.detail = "2p1(1-2p1) peaks at p1=" + fmt(arg) + " with value " + fmt(best) + " (coefficient 1/4); thm9 on " +
             std::to_string(evaluated) + " two-point instances, " + std::to_string(bad) + " violations, worst slack " +
             fmt(worst);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto sq = compare_midpoint_refinements(kD2, 0, 1, 0.25L);
  const auto quartic = compare_midpoint_refinements(ModulusSpec(0.125L, 4), 0, 1, 0.25L);
  const Real ratio = quartic.chain / quartic.chord;
  o.pass = std::fabs(sq.chord - sq.chain) <= kWorked && std::fabs(sq.chain - 0.0625L) <= kWorked &&
           std::fabs(ratio - 4) <= kWorked;
  o.detail = "d^2: chord " + fmt(sq.chord) + " chain " + fmt(sq.chain) + "; d^4/8: chain/chord " + fmt(ratio);
  return o;
}

Outcome criterion9() {
  Outcome o;
  FuzzConfig cfg;
  cfg.trials = kSmall;
  std::size_t evaluated = 0, bad = 0;
  Real off_two = 0;
  Real lo = std::numeric_limits<Real>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto inst = random_instance(cfg, i);
    const auto& iv = inst.interval();
    const auto r = endpoint_bound(inst.f(), iv.lo, iv.hi, inst.x(), inst.p());
    ++evaluated;
    if (!r.verified()) ++bad;
    for (const auto& d : r.details) {
      if (d.name != "M*") continue;
      lo = std::min(lo, d.value);
      hi = std::max(hi, d.value);
      off_two = std::max(off_two, std::fabs(d.value - 2));
    }
  }
  o.pass = evaluated == kSmall && bad == 0;
  o.detail = "thm4 on " + std::to_string(evaluated) + " instances, " + std::to_string(bad) + " violations; M* in [" +
             fmt(lo) + ", " + fmt(hi) + "], max |M*-2| " + fmt(off_two) + " (reported only)";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto s = campaign(WeightMode::NonnegSimplex, kSmall, {Check::UniformReference});
  const auto& st = s.stats(Check::UniformReference);

  const Tolerance tol;
  FuzzConfig cfg;
  cfg.trials = kSmall;
  std::size_t five_term = 0, bracket_failures = 0;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto inst = random_instance(cfg, i);
    const auto r = uniform_reference_bounds(inst.f(), inst.x(), inst.p());
    if (r.chain.size() == 5 && r.verified()) ++five_term;
    const Real n = static_cast<Real>(inst.size());
    const auto u = prefix_suffix_ratios(increasing_rearrangement(inst.x(), inst.p(), WeightVector::uniform(inst.size())));
    if (u.m_star < n * inst.p().min() - tol.bound(1) || u.M_star > n * inst.p().max() + tol.bound(n)) {
      ++bracket_failures;
    }
  }
  o.pass = st.evaluated == kSmall && st.violations == 0 && five_term == kSmall && bracket_failures == 0;
  o.detail = "thm6 on " + std::to_string(st.evaluated) + " nonneg instances, " + std::to_string(st.violations) +
             " violations, " + std::to_string(five_term) + " full five-term chains, " +
             std::to_string(bracket_failures) + " n*min/n*max bracket failures";
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto sq = FunctionSpec::square();
  const Interval iv{-1, 2};
  const CertGrid grid;
  const auto exact = certify_uniform_convexity(sq, kD2, iv, grid);
  const auto over = certify_uniform_convexity(sq, ModulusSpec(1 + 1e-6L, 2), iv, grid);
  const Real est = estimate_modulus_coefficient(sq, 2, iv, grid);
  o.pass = grid.x_points == 64 && grid.y_points == 64 && grid.t_points == 17 && exact.passed &&
           std::fabs(exact.worst_slack) <= kCertSlack && !over.passed && std::fabs(est - 1) <= kEstimate;
  o.detail = "square/d^2 worst slack " + fmt(exact.worst_slack) + " on " + std::to_string(exact.cells) +
             " cells; coefficient 1+1e-6 " + (over.passed ? "passes" : "fails") + "; estimate " + fmt(est);
  return o;
}

std::string fuzz_json(const std::string& threads) {
  std::ostringstream out, err;
  const int code = cli::run({"fuzz", "--seed", "20231", "--threads", threads, "--format", "json"}, out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome criterion12() {
  Outcome o;
  const auto first = fuzz_json("1");
  const auto second = fuzz_json("1");
  const auto threaded = fuzz_json("4");
  o.pass = first == second && first == threaded && first.rfind("0\n", 0) == 0;
  o.detail = "fuzz summary " + std::to_string(first.size()) + " bytes; repeat " +
             (first == second ? "identical" : "differs") + ", 4 threads " +
             (first == threaded ? "identical" : "differs");
  return o;
}

Outcome guarded(const std::function<Outcome()>& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  const auto witness = equality_witness_suite(kSmall);
  const std::vector<std::function<Outcome()>> criteria{
      criterion1,
      criterion2,
      criterion3,
      [&] { return criterion4(witness); },
      [&] { return criterion5(witness); },
      criterion6,
      criterion7,
      criterion8,
      criterion9,
      criterion10,
      criterion11,
      criterion12,
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto o = guarded(criteria[i]);
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
