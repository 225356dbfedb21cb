#include "jensen/refined_bounds.hpp"

#include <algorithm>
#include <sstream>

namespace jensen {

namespace {

std::vector<std::string> p_prefix_violations(std::span<const Real> p_bar) {
  std::vector<std::string> out;
  Real s = 0;
  for (std::size_t i = 0; i < p_bar.size(); ++i) {
    s += p_bar[i];
    if (s < -kPrefixTolerance || s > 1 + kPrefixTolerance) {
      out.push_back("prefix sum " + format_real(s) + " ∉ [0,1] at sorted index " + std::to_string(i + 1));
    }
  }
  return out;
}

void throw_if_any(const std::vector<std::string>& violations, std::string_view what) {
  if (violations.empty()) return;
  std::ostringstream os;
  os << what << ": ";
  for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i];
  throw PreconditionError(os.str());
}

}  // namespace

RatioSummary prefix_suffix_ratios(const Rearrangement& r) {
  const std::size_t n = r.size();
  if (n < 2) throw InputError("prefix/suffix ratios need n >= 2");

  RatioSummary s;
  s.prefix.resize(n);
  s.suffix.resize(n);

  Real pp = 0, qp = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    pp += r.p_bar[i];
    qp += r.q_bar[i];
    if (!(qp > 0 && qp < 1)) {
      throw PreconditionError("q prefix sum " + format_real(qp) + " ∉ (0,1) at sorted index " +
                              std::to_string(i + 1));
    }
    s.prefix[i] = pp / qp;
  }
  s.prefix[n - 1] = 1;

  Real ps = 0, qs = 0;
  for (std::size_t i = n; i-- > 1;) {
    ps += r.p_bar[i];
    qs += r.q_bar[i];
    s.suffix[i] = ps / qs;
  }
  s.suffix[0] = 1;

  s.m_star = s.prefix[0];
  s.M_star = s.prefix[0];
  s.min_at = s.max_at = {RatioFamily::Prefix, 0};
  auto visit = [&](RatioFamily fam, const std::vector<Real>& v) {
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] < s.m_star) {
        s.m_star = v[i];
        s.min_at = {fam, i};
      }
      if (v[i] > s.M_star) {
        s.M_star = v[i];
        s.max_at = {fam, i};
      }
    }
  };
  visit(RatioFamily::Prefix, s.prefix);
  visit(RatioFamily::Suffix, s.suffix);
  return s;
}

BoundReport prefix_ratio_sandwich(const Instance& inst, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::PrefixRatio);
  const auto r = increasing_rearrangement(inst);
  const auto s = prefix_suffix_ratios(r);
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());

  auto report = BoundReport::make("thm2", {{"M*J(q)", s.M_star * jq}, {"J(p)", jp}, {"m*J(q)", s.m_star * jq}}, tol);
  report.details = {{"m*", s.m_star}, {"M*", s.M_star}, {"J(q)", jq}};
  if (inst.p() == inst.q()) report.notes.push_back("p equals q: the sandwich degenerates to equality");
  return report;
}

RatioRefinement interior_refinement(const Instance& inst, const Tolerance& tol) {
  const auto r = increasing_rearrangement(inst);
  const auto sorted_p = inst.p().permuted(r.perm);
  const auto sorted_q = inst.q().permuted(r.perm);
  const auto pointwise = ratio_extremes(sorted_p, sorted_q);
  const auto s = prefix_suffix_ratios(r);
  const std::size_t last = inst.size() - 1;
  auto interior_only = [last](const std::vector<std::size_t>& idx) {
    return std::none_of(idx.begin(), idx.end(), [last](std::size_t i) { return i == 0 || i == last; });
  };

  RatioRefinement out;
  out.m = pointwise.m;
  out.M = pointwise.M;
  out.m_star = s.m_star;
  out.M_star = s.M_star;
  const Real scale = std::max({std::fabs(out.m), std::fabs(out.M), std::fabs(out.m_star), std::fabs(out.M_star)});
  out.refined_below = out.m_star > out.m + tol.bound(scale);
  out.refined_above = out.M_star < out.M - tol.bound(scale);
  out.min_interior_only = interior_only(pointwise.argmin);
  out.max_interior_only = interior_only(pointwise.argmax);
  return out;
}

BoundReport endpoint_bound(const FunctionSpec& f, Real a, Real b, std::span<const Real> x, const WeightVector& p,
                           const Tolerance& tol) {
  if (!(a < b)) throw PreconditionError("endpoint bound needs a < b");
  if (x.size() != p.size()) throw InputError("endpoint bound: length mismatch");
  if (x.size() < 2) throw InputError("endpoint bound needs n >= 2");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < a || x[i] > b) {
      throw PreconditionError("x_" + std::to_string(i + 1) + " = " + format_real(x[i]) + " lies outside [a, b]");
    }
  }
  const auto r = increasing_rearrangement(x, p, WeightVector::uniform(x.size()));
  throw_if_any(p_prefix_violations(r.p_bar), "endpoint bound is inadmissible");

  // a first and b last, even when some x_i ties an endpoint.
  std::vector<Real> xe{a}, pe{0}, qe{Real{1} / 2};
  for (std::size_t i = 0; i < r.size(); ++i) {
    xe.push_back(r.sorted[i]);
    pe.push_back(r.p_bar[i]);
    qe.push_back(0);
  }
  xe.push_back(b);
  pe.push_back(0);
  qe.push_back(Real{1} / 2);
  const auto extended = Rearrangement::from_ordered(std::move(xe), std::move(pe), std::move(qe));
  throw_if_any(p_prefix_violations(extended.p_bar), "extended endpoint configuration is inadmissible");
  const auto s = prefix_suffix_ratios(extended);

  const Real hh = midpoint_gap(f, a, b);
  const Real jp = jensen_functional(f, x, p);
  auto report = BoundReport::make("thm4", {{"M*H", s.M_star * hh}, {"J(p)", jp}, {"0", 0}}, tol);
  report.details = {{"M*", s.M_star}, {"m*", s.m_star}, {"H", hh}, {"2H", 2 * hh}};
  if (s.M_star < 2) {
    report.notes.push_back("M* < 2: the endpoint bound is strictly below 2H");
  } else {
    report.notes.push_back("M* = " + format_real(s.M_star) + ": the endpoint bound coincides with 2H");
  }
  return report;
}

BoundReport uniform_reference_bounds(const FunctionSpec& f, std::span<const Real> x, const WeightVector& p,
                                     const Tolerance& tol) {
  const std::size_t n = x.size();
  if (p.size() != n) throw InputError("uniform reference bound: length mismatch");
  if (n < 2) throw InputError("uniform reference bound needs n >= 2");
  const auto u = WeightVector::uniform(n);
  const auto r = increasing_rearrangement(x, p, u);
  throw_if_any(p_prefix_violations(r.p_bar), "uniform reference bound is inadmissible");
  const auto s = prefix_suffix_ratios(r);

  const Real ju = jensen_functional(f, x, u);
  const Real jp = jensen_functional(f, x, p);
  const Real nr = static_cast<Real>(n);

  std::vector<Term> chain;
  const bool nonneg = p.nonnegative();
  if (nonneg) chain.push_back({"n*max(p)*J(u)", nr * p.max() * ju});
  chain.push_back({"M*J(u)", s.M_star * ju});
  chain.push_back({"J(p)", jp});
  chain.push_back({"m*J(u)", s.m_star * ju});
  if (nonneg) chain.push_back({"n*min(p)*J(u)", nr * p.min() * ju});

  auto report = BoundReport::make("thm6", std::move(chain), tol);
  report.details = {{"m*", s.m_star}, {"M*", s.M_star}, {"J(u)", ju}};
  if (!nonneg) report.notes.push_back("p has negative entries: outer min/max links omitted");
  return report;
}

}  // namespace jensen
