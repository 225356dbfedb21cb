#include "jensen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "jensen/classic_bounds.hpp"
#include "jensen/refined_bounds.hpp"

namespace jensen {

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::NonnegSimplex: return "nonneg";
    case WeightMode::SignedPrefix: return "signed";
    case WeightMode::BoundedPositive: return "positive";
  }
  return "?";
}

std::optional<WeightMode> parse_weight_mode(std::string_view name) {
  for (auto m : {WeightMode::NonnegSimplex, WeightMode::SignedPrefix, WeightMode::BoundedPositive}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view tag(Check c) {
  switch (c) {
    case Check::RatioSandwich: return "thm1";
    case Check::PrefixRatioSandwich: return "thm2";
    case Check::InteriorRefinement: return "rem1";
    case Check::AdjacentChain: return "thm3";
    case Check::Endpoint: return "thm4";
    case Check::TwoPointSandwich: return "thm5";
    case Check::UniformReference: return "thm6";
    case Check::BarycentricModulus: return "eq32";
    case Check::LowerRatio: return "thm7-lower";
    case Check::UpperRatio: return "thm7-upper";
    case Check::MergedChain: return "thm8";
    case Check::TwoPointChain: return "thm9";
  }
  return "?";
}

std::vector<Check> all_checks() {
  return {Check::RatioSandwich,      Check::PrefixRatioSandwich, Check::InteriorRefinement, Check::AdjacentChain,
          Check::Endpoint,           Check::TwoPointSandwich,    Check::UniformReference,   Check::BarycentricModulus,
          Check::LowerRatio,         Check::UpperRatio,          Check::MergedChain,        Check::TwoPointChain};
}

std::optional<Check> parse_check(std::string_view name) {
  for (auto c : all_checks()) {
    if (tag(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<CatalogEntry> default_catalog() {
  return {
      {FunctionSpec::square(), {-1, 2}},
      {FunctionSpec::exp(), {0, 1.5L}},
      {FunctionSpec::power(3), {0.25L, 2}},
      {FunctionSpec::power(1.5L), {0.25L, 2}},
      {FunctionSpec::xlogx(), {0.2L, 3}},
      {FunctionSpec::abs_power(4), {-1, 1.5L}},
  };
}

void FuzzConfig::validate() const {
  if (trials < 1) throw InputError("trials must be at least 1");
  if (n_min < 2 || n_max > 32 || n_min > n_max) {
    throw InputError("n range [" + std::to_string(n_min) + ", " + std::to_string(n_max) + "] must lie within [2, 32]");
  }
  if (functions.empty()) throw InputError("function set is empty");
  if (modulus_exponents.empty()) throw InputError("modulus exponent set is empty");
  for (Real r : modulus_exponents) {
    if (!(r >= 2)) throw InputError("modulus exponents must be >= 2");
  }
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

Real TrialRng::uniform() {
  return static_cast<Real>(engine_() >> 11) * static_cast<Real>(0x1.0p-53);
}

Real TrialRng::uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

std::size_t TrialRng::below(std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<Real>(n)));
}

std::vector<Real> TrialRng::simplex(std::size_t n) {
  std::vector<Real> v(n);
  Real sum = 0;
  for (auto& e : v) {
    e = -std::log1p(-uniform());
    sum += e;
  }
  if (!(sum > 0)) {
    std::fill(v.begin(), v.end(), Real{1} / static_cast<Real>(n));
    return v;
  }
  for (auto& e : v) e /= sum;
  return v;
}

Real positive_floor(std::size_t n) {
  return std::min(Real{0.05L}, Real{1} / (2 * static_cast<Real>(n)));
}

namespace {

std::vector<Real> bounded_positive(TrialRng& rng, std::size_t n) {
  const Real floor = positive_floor(n);
  auto s = rng.simplex(n);
  for (auto& e : s) e = floor + (1 - static_cast<Real>(n) * floor) * e;
  return s;
}

std::vector<Real> signed_prefix(TrialRng& rng, std::span<const Real> x) {
  const std::size_t n = x.size();
  std::vector<Real> prefix(n);
  for (std::size_t i = 0; i + 1 < n; ++i) prefix[i] = rng.uniform();
  prefix[n - 1] = 1;
  const auto order = increasing_rearrangement(x, WeightVector::uniform(n), WeightVector::uniform(n)).perm;
  std::vector<Real> p(n);
  Real prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    p[order[i]] = prefix[i] - prev;
    prev = prefix[i];
  }
  return p;
}

}  // namespace

TrialCase random_trial(const FuzzConfig& cfg, std::size_t index) {
  cfg.validate();
  TrialRng rng(cfg.seed, index);
  const std::size_t n = cfg.n_min + rng.below(cfg.n_max - cfg.n_min + 1);
  const std::size_t entry = rng.below(cfg.functions.size());
  const std::size_t exponent = rng.below(cfg.modulus_exponents.size());
  const auto& cat = cfg.functions[entry];

  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.below(8) == 0) {
      x[i] = x[rng.below(i)];  // tie
    } else {
      x[i] = rng.uniform(cat.interval.lo, cat.interval.hi);
    }
  }

  std::vector<Real> q = bounded_positive(rng, n);
  std::vector<Real> p;
  switch (cfg.mode) {
    case WeightMode::NonnegSimplex:
      p = rng.simplex(n);
      if (rng.below(4) == 0) {
        p[rng.below(n)] = 0;
        Real sum = 0;
        for (Real v : p) sum += v;
        if (sum > 0) {
          for (auto& v : p) v /= sum;
        } else {
          p = rng.simplex(n);
        }
      }
      break;
    case WeightMode::SignedPrefix: p = signed_prefix(rng, x); break;
    case WeightMode::BoundedPositive: p = bounded_positive(rng, n); break;
  }

  Real p1 = rng.uniform(0.01L, 0.99L);
  Real q1 = rng.uniform(0.05L, 0.95L);
  if (p1 / q1 > (1 - p1) / (1 - q1)) {
    p1 = 1 - p1;
    q1 = 1 - q1;
  }

  return TrialCase{Instance(std::move(x), WeightVector(std::move(p)), WeightVector(std::move(q)), cat.f, cat.interval),
                   entry, exponent, p1, q1};
}

Instance random_instance(const FuzzConfig& cfg, std::size_t index) { return random_trial(cfg, index).instance; }

const CheckStats& CampaignSummary::stats(Check c) const {
  auto it = std::find_if(checks.begin(), checks.end(), [c](const CheckStats& s) { return s.check == c; });
  if (it == checks.end()) throw std::out_of_range("check not part of this campaign: " + std::string(tag(c)));
  return *it;
}

std::vector<std::vector<PreparedModulus>> prepare_moduli(const FuzzConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<PreparedModulus>> out(cfg.functions.size());
  for (std::size_t e = 0; e < cfg.functions.size(); ++e) {
    const auto& cat = cfg.functions[e];
    for (Real r : cfg.modulus_exponents) {
      PreparedModulus pm;
      std::optional<ModulusSpec> phi;
      if (r == 2) phi = strong_convexity_modulus(cat.f, cat.interval);
      if (!phi) {
        const Real c = estimate_modulus_coefficient(cat.f, r, cat.interval) / 2;
        if (c > 0 && std::isfinite(c)) phi = ModulusSpec(c, r);
      }
      if (phi) {
        auto cert = certify_uniform_convexity(cat.f, *phi, cat.interval);
        if (cert.passed) {
          pm.phi = phi;
          pm.certificate = std::move(cert);
        }
      }
      out[e].push_back(std::move(pm));
    }
  }
  return out;
}

namespace {

struct Outcome {
  bool evaluated = false;
  bool violated = false;
  Real slack = 0;
  Real scale = 0;
  std::string detail;
};

Outcome from_report(const BoundReport& r) {
  return {true, !r.verified(), r.min_slack(), r.scale, r.verified() ? "" : r.tag + " chain violated"};
}

Outcome from_terms(const RefinementTerms& r) {
  return {true, !r.verified(), r.slack, r.scale, r.verified() ? "" : r.tag + " refinement violated"};
}

Outcome skipped() { return {}; }

Outcome evaluate(Check check, const TrialCase& tc, const PreparedModulus& pm, const Tolerance& tol) {
  const Instance& inst = tc.instance;
  const auto& iv = inst.interval();
  const bool needs_modulus = check == Check::AdjacentChain || check == Check::BarycentricModulus ||
                             check == Check::LowerRatio || check == Check::UpperRatio ||
                             check == Check::MergedChain || check == Check::TwoPointChain;
  if (needs_modulus && !pm.phi) return skipped();
  const Instance with_phi = needs_modulus ? inst.with_phi(pm.phi) : inst;

  switch (check) {
    case Check::RatioSandwich:
      if (!validate_instance(inst, TheoremMode::PointwiseRatio).empty()) return skipped();
      return from_report(ratio_sandwich(inst, tol));

    case Check::PrefixRatioSandwich: {
      if (!validate_instance(inst, TheoremMode::PrefixRatio).empty()) return skipped();
      auto out = from_report(prefix_ratio_sandwich(inst, tol));
      const auto s = prefix_suffix_ratios(increasing_rearrangement(inst));
      if (s.prefix.back() != 1 || s.suffix.front() != 1) {
        out.violated = true;
        out.detail = "m_n or suffix_1 differs from 1";
      }
      if (inst.q().strictly_positive()) {
        const auto c = ratio_extremes(inst.p(), inst.q());
        const Real scale = std::max({std::fabs(c.m), std::fabs(c.M), std::fabs(s.m_star), std::fabs(s.M_star)});
        const Real band = tol.bound(scale);
        const Real worst = std::min({s.m_star - c.m, 1 - s.m_star, s.M_star - 1, c.M - s.M_star});
        if (worst < -band) {
          out.violated = true;
          out.detail = "m <= m* <= 1 <= M* <= M fails by " + format_real(worst);
        }
      }
      return out;
    }

    case Check::InteriorRefinement: {
      if (!inst.q().strictly_positive() || !inst.p().nonnegative()) return skipped();
      const auto r = interior_refinement(inst, tol);
      Outcome out{true, false, 0, std::max(std::fabs(r.M), Real{1}), ""};
      if (inst.size() == 2) {
        out.slack = 0;
        if (r.m_star != r.m || r.M_star != r.M) {
          out.violated = true;
          out.detail = "n = 2 but prefix/suffix extremes differ from pointwise extremes";
        }
        return out;
      }
      if (!r.min_interior_only && !r.max_interior_only) return skipped();
      out.slack = std::numeric_limits<Real>::infinity();
      if (r.min_interior_only) {
        out.slack = std::min(out.slack, r.m_star - r.m);
        if (!r.refined_below) {
          out.violated = true;
          out.detail = "interior minimum but m* - m <= tol";
        }
      }
      if (r.max_interior_only) {
        out.slack = std::min(out.slack, r.M - r.M_star);
        if (!r.refined_above) {
          out.violated = true;
          out.detail = "interior maximum but M - M* <= tol";
        }
      }
      return out;
    }

    case Check::AdjacentChain:
      if (!inst.p().nonnegative()) return skipped();
      return from_terms(adjacent_chain_bound(with_phi, *pm.certificate, tol));

    case Check::Endpoint:
      if (!validate_instance(inst, TheoremMode::Endpoint).empty()) return skipped();
      return from_report(endpoint_bound(inst.f(), iv.lo, iv.hi, inst.x(), inst.p(), tol));

    case Check::TwoPointSandwich:
      return from_report(two_point_sandwich(inst.f(), iv.lo, iv.hi, tc.two_point_p1, tol));

    case Check::UniformReference:
      if (!validate_instance(inst, TheoremMode::UniformReference).empty()) return skipped();
      return from_report(uniform_reference_bounds(inst.f(), inst.x(), inst.p(), tol));

    case Check::BarycentricModulus:
      if (!inst.p().nonnegative()) return skipped();
      return from_terms(barycentric_modulus_bound(with_phi, *pm.certificate, tol));

    case Check::LowerRatio:
      if (!validate_instance(inst, TheoremMode::PointwiseRatio).empty()) return skipped();
      return from_terms(lower_ratio_refinement(with_phi, *pm.certificate, tol));

    case Check::UpperRatio: {
      if (!validate_instance(inst, TheoremMode::PointwiseRatio).empty()) return skipped();
      auto out = from_terms(upper_ratio_refinement(with_phi, *pm.certificate, tol));
      const auto normalized = upper_ratio_refinement_normalized(with_phi, *pm.certificate, tol);
      if (!normalized.verified()) {
        out.violated = true;
        out.detail = "normalized upper chain violated";
      }
      return out;
    }

    case Check::MergedChain:
      if (!validate_instance(inst, TheoremMode::PointwiseRatio).empty()) return skipped();
      return from_terms(merged_chain_refinement(with_phi.sorted(), *pm.certificate, tol));

    case Check::TwoPointChain:
      return from_terms(
          two_point_chain_refinement(inst.f(), *pm.certificate, iv.lo, iv.hi, tc.two_point_p1, tc.two_point_q1, tol));
  }
  return skipped();
}

Outcome evaluate_guarded(Check check, const TrialCase& tc, const PreparedModulus& pm, const Tolerance& tol) {
  try {
    return evaluate(check, tc, pm, tol);
  } catch (const PreconditionError&) {
    return skipped();
  } catch (const std::exception& e) {
    return {true, true, -std::numeric_limits<Real>::infinity(), 0, std::string("error: ") + e.what()};
  }
}

}  // namespace

CampaignSummary run_campaign(const FuzzConfig& cfg, const std::vector<Check>& checks) {
  cfg.validate();
  if (checks.empty()) throw InputError("theorem set is empty");
  const auto moduli = prepare_moduli(cfg);

  std::vector<std::vector<Outcome>> results(cfg.trials);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto tc = random_trial(cfg, i);
      const auto& pm = moduli[tc.catalog_index][tc.exponent_index];
      auto& row = results[i];
      row.reserve(checks.size());
      for (auto c : checks) row.push_back(evaluate_guarded(c, tc, pm, cfg.tolerance));
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cfg.trials);
  if (threads == 1) {
    work(0, cfg.trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (cfg.trials + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(cfg.trials, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  // Reduction in index order; independent of the thread layout.
  CampaignSummary summary;
  summary.seed = cfg.seed;
  summary.trials = cfg.trials;
  summary.mode = cfg.mode;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    CheckStats st;
    st.check = checks[k];
    std::vector<Real> rel;
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      const auto& o = results[i][k];
      if (!o.evaluated) {
        ++st.skipped;
        continue;
      }
      ++st.evaluated;
      rel.push_back(relative_slack(o.slack, o.scale, cfg.tolerance));
      if (st.evaluated == 1 || o.slack < st.worst_slack) {
        st.worst_slack = o.slack;
        st.worst_index = i;
      }
      if (o.violated) {
        ++st.violations;
        summary.violations.push_back({checks[k], i, o.slack, cfg.tolerance.bound(o.scale), o.detail});
      }
    }
    if (!rel.empty()) {
      st.min_relative_slack = *std::min_element(rel.begin(), rel.end());
      auto mid = rel.begin() + static_cast<std::ptrdiff_t>(rel.size() / 2);
      std::nth_element(rel.begin(), mid, rel.end());
      st.median_relative_slack = *mid;
    }
    summary.checks.push_back(st);
  }
  return summary;
}

namespace {

Real abs_relative(const RefinementTerms& r, const Tolerance& tol) {
  return std::fabs(relative_slack(r.slack, r.scale, tol));
}

// A point-mass p or a single distinct point makes every term exactly zero,
// so the relative residual would only measure round-off. Such draws are
// passed over.
TrialCase nondegenerate_trial(const FuzzConfig& cfg, std::size_t& cursor) {
  for (;;) {
    auto tc = random_trial(cfg, cursor++);
    const auto x = tc.instance.x();
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo < *hi) return tc;
  }
}

}  // namespace

WitnessReport equality_witness_suite(std::size_t trials, std::uint64_t seed, const Tolerance& tol) {
  const auto f = FunctionSpec::square();
  const ModulusSpec phi(1, 2);
  const Interval iv{-1, 2};
  const auto cert = certify_uniform_convexity(f, phi, iv);

  FuzzConfig cfg;
  cfg.seed = seed;
  cfg.trials = std::max<std::size_t>(trials, 1);
  cfg.functions = {{f, iv}};
  cfg.mode = WeightMode::BoundedPositive;
  FuzzConfig cfg2 = cfg;
  cfg2.n_min = cfg2.n_max = 2;

  WitnessReport w;
  w.trials = cfg.trials;
  w.tolerance = tol;
  std::size_t cursor = 0, cursor2 = 0;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const auto tc = nondegenerate_trial(cfg, cursor);
    const auto inst = tc.instance.with_phi(phi);
    w.lower_ratio_max = std::max(w.lower_ratio_max, abs_relative(lower_ratio_refinement(inst, cert, tol), tol));
    w.upper_normalized_max =
        std::max(w.upper_normalized_max, abs_relative(upper_ratio_refinement_normalized(inst, cert, tol), tol));
    w.barycentric_max = std::max(w.barycentric_max, abs_relative(barycentric_modulus_bound(inst, cert, tol), tol));

    const auto sp = two_point_ratio_refinements(f, cert, iv.lo, iv.hi, tc.two_point_p1, tc.two_point_q1, tol);
    for (const auto* r : {&sp.lower, &sp.upper, &sp.midpoint_lower, &sp.midpoint_upper}) {
      w.two_point_specials_max = std::max(w.two_point_specials_max, abs_relative(*r, tol));
    }
    w.two_point_chain_max = std::max(
        w.two_point_chain_max,
        abs_relative(two_point_chain_refinement(f, cert, iv.lo, iv.hi, tc.two_point_p1, tc.two_point_q1, tol), tol));

    const auto pair = nondegenerate_trial(cfg2, cursor2).instance.with_phi(phi);
    w.adjacent_chain_n2_max = std::max(w.adjacent_chain_n2_max, abs_relative(adjacent_chain_bound(pair, cert, tol), tol));
    const auto merged = merged_chain_refinement(pair.sorted(), cert, tol);
    w.merged_chain_n2_max = std::max(w.merged_chain_n2_max, std::fabs(merged.slack) / tol.bound(merged.scale));
  }

  const Instance witness({0, 1, 2}, WeightVector{0.4L, 0.1L, 0.5L}, WeightVector::uniform(3), f, iv, phi);
  const auto merged3 = merged_chain_refinement(witness, cert, tol);
  w.merged_chain_n3_slack = merged3.slack;
  const auto chain3 = adjacent_chain_bound(witness.with_p(WeightVector::uniform(3)), cert, tol);
  w.adjacent_chain_n3_slack = chain3.slack;

  constexpr Real kEquality = 1e-10L;
  w.passed = w.lower_ratio_max <= kEquality && w.upper_normalized_max <= kEquality &&
             w.barycentric_max <= kEquality && w.two_point_specials_max <= kEquality &&
             w.two_point_chain_max <= kEquality && w.adjacent_chain_n2_max <= kEquality &&
             w.merged_chain_n2_max <= 1 && merged3.slack > 10 * tol.bound(merged3.scale) &&
             std::fabs(chain3.slack - Real{4} / 9) <= 1e-9L;
  return w;
}

const RankedRefinement& TightnessRanking::entry(std::string_view t) const {
  auto it = std::find_if(entries.begin(), entries.end(), [&](const RankedRefinement& e) { return e.tag == t; });
  if (it == entries.end()) throw std::out_of_range("no ranked refinement tagged '" + std::string(t) + "'");
  return *it;
}

TightnessRanking tightness_ranking(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  TightnessRanking out;
  out.jp = jensen_functional(inst.f(), inst.x(), inst.p());

  auto attempt = [&](std::string_view name, auto&& fn) {
    try {
      out.entries.push_back(fn());
    } catch (const PreconditionError& e) {
      out.skipped.push_back(std::string(name) + ": " + e.what());
    }
  };
  auto plain = [](const RefinementTerms& r) { return RankedRefinement{r.tag, r.total(), 0, r.total(), 0}; };
  auto offset = [](const RefinementTerms& r, Real m, Real jq) {
    return RankedRefinement{r.tag, r.total(), m * jq, m * jq + r.total(), 0};
  };

  attempt("eq32", [&] { return plain(barycentric_modulus_bound(inst, cert, tol)); });
  attempt("thm3", [&] { return plain(adjacent_chain_bound(inst, cert, tol)); });
  attempt("thm7-lower", [&] {
    const auto r = lower_ratio_refinement(inst, cert, tol);
    return offset(r, r.detail("m").value, r.detail("J(q)").value);
  });
  attempt("thm8", [&] {
    const auto sorted = inst.sorted();
    const auto r = merged_chain_refinement(sorted, cert, tol);
    return offset(r, r.detail("m").value, jensen_functional(inst.f(), inst.x(), inst.q()));
  });
  attempt("thm9", [&] {
    if (inst.size() != 2) throw PreconditionError("needs exactly two points");
    require_admissible(inst, TheoremMode::RatioModulus);
    const auto s = inst.sorted();
    const Real a = s.x()[0], b = s.x()[1];
    if (!(a < b)) throw PreconditionError("needs two distinct points");
    const Real p1 = s.p()[0], q1 = s.q()[0];
    const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());
    if (p1 / q1 <= s.p()[1] / s.q()[1]) {
      const auto r = two_point_chain_refinement(inst.f(), cert, a, b, p1, q1, tol);
      return offset(r, r.detail("m").value, jq);
    }
    // Smallest ratio at the right point: the same argument with the roles
    // of the two points exchanged.
    const Real m = s.p()[1] / s.q()[1];
    const Real rhs = m * (1 - m) * (*inst.phi())(s.q()[1] * (b - a));
    return RankedRefinement{"thm9", rhs, m * jq, m * jq + rhs, 0};
  });

  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const RankedRefinement& l, const RankedRefinement& r) { return l.implied > r.implied; });
  std::size_t leader = 0;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& e = out.entries[i];
    const Real lead = out.entries[leader].implied;
    const Real band = tol.bound(std::max(std::fabs(lead), std::fabs(e.implied)));
    if (i == 0 || lead - e.implied > band) {
      leader = i;
      e.rank = i + 1;
    } else {
      e.rank = out.entries[leader].rank;
    }
  }
  return out;
}

}  // namespace jensen
