#include "jensen/uniform_convex.hpp"

#include <algorithm>
#include <cmath>

#include "jensen/classic_bounds.hpp"

namespace jensen {

namespace {

std::vector<Real> equispaced(Real lo, Real hi, std::size_t n) {
  std::vector<Real> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<Real>(i) / static_cast<Real>(n - 1);
  }
  v.back() = hi;
  return v;
}

void require_certified(const FunctionSpec& f, const std::optional<ModulusSpec>& phi, const Interval& iv,
                       const Certificate& cert) {
  if (!phi) throw PreconditionError("a modulus phi is required");
  if (!cert.usable()) {
    throw PreconditionError("uncertified (f, phi) pair: " + f.describe() + " with " + phi->describe() +
                            " failed certification (worst slack " + format_real(cert.worst_slack) + ")");
  }
  if (!(cert.f == f) || !(cert.phi == *phi)) {
    throw PreconditionError("certificate was issued for " + cert.f.describe() + " with " + cert.phi.describe() +
                            ", not " + f.describe() + " with " + phi->describe());
  }
  if (!cert.interval.contains(iv)) {
    throw PreconditionError("certificate interval does not cover [" + format_real(iv.lo) + ", " +
                            format_real(iv.hi) + "]");
  }
}

void require_certified(const Instance& inst, const Certificate& cert) {
  require_certified(inst.f(), inst.phi(), inst.interval(), cert);
}

Real weighted_modulus_sum(const ModulusSpec& phi, std::span<const Real> x, std::span<const Real> w, Real center) {
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] != 0) s += w[i] * phi(std::fabs(x[i] - center));
  }
  return s;
}

}  // namespace

void CertGrid::validate() const {
  if (x_points < 3 || y_points < 3 || t_points < 3) {
    throw InputError("certification grid needs at least 3 points per axis");
  }
  if (t_points % 2 == 0) throw InputError("t grid must have an odd point count so that t = 1/2 is included");
}

std::vector<Real> CertGrid::xs(const Interval& iv) const { return equispaced(iv.lo, iv.hi, x_points); }
std::vector<Real> CertGrid::ys(const Interval& iv) const { return equispaced(iv.lo, iv.hi, y_points); }
std::vector<Real> CertGrid::ts() const { return equispaced(0, 1, t_points); }

Certificate Certificate::assumed(const FunctionSpec& f, const ModulusSpec& phi, const Interval& iv) {
  return Certificate{f, phi, iv, CertGrid{}, CertificateKind::Assumed, false, 0, 0, 0, 0, 0};
}

Certificate certify_uniform_convexity(const FunctionSpec& f, const ModulusSpec& phi, const Interval& iv,
                                      const CertGrid& grid) {
  grid.validate();
  if (!f.domain().contains(iv)) throw DomainError("certification interval is outside the domain of " + f.describe());
  const auto xs = grid.xs(iv);
  const auto ys = grid.ys(iv);
  const auto ts = grid.ts();
  const auto& tol = grid.tolerance;

  Certificate c{f, phi, iv, grid, CertificateKind::Definition, true, 0, 0, 0, 0, 0};
  bool first = true;
  for (Real x : xs) {
    const Real fx = f(x);
    for (Real y : ys) {
      const Real fy = f(y);
      const Real mod = phi(std::fabs(x - y));
      for (Real t : ts) {
        const Real lhs = t * fx + (1 - t) * fy;
        const Real rhs = f(t * x + (1 - t) * y) + t * (1 - t) * mod;
        const Real slack = lhs - rhs;
        ++c.cells;
        if (!tol.accepts(slack, std::max(std::fabs(lhs), std::fabs(rhs)))) c.passed = false;
        if (first || slack < c.worst_slack) {
          first = false;
          c.worst_slack = slack;
          c.worst_x = x;
          c.worst_y = y;
          c.worst_t = t;
        }
      }
    }
  }
  return c;
}

Real estimate_modulus_coefficient(const FunctionSpec& f, Real exponent, const Interval& iv, const CertGrid& grid) {
  if (!(exponent >= 2)) throw InputError("modulus exponent must satisfy r >= 2");
  grid.validate();
  if (!f.domain().contains(iv)) throw DomainError("estimation interval is outside the domain of " + f.describe());
  const auto xs = grid.xs(iv);
  const auto ys = grid.ys(iv);
  const auto ts = grid.ts();

  bool any = false;
  Real best = std::numeric_limits<Real>::infinity();
  for (Real x : xs) {
    for (Real y : ys) {
      if (x == y) continue;
      const Real dist = std::pow(std::fabs(x - y), exponent);
      for (Real t : ts) {
        if (t <= 0 || t >= 1) continue;
        const Real gap = t * f(x) + (1 - t) * f(y) - f(t * x + (1 - t) * y);
        best = std::min(best, gap / (t * (1 - t) * dist));
        any = true;
      }
    }
  }
  if (!any) throw InputError("estimation grid has no cells with x != y and 0 < t < 1");
  return best;
}

Certificate gradient_inequality_check(const FunctionSpec& f, const ModulusSpec& phi, const Interval& iv,
                                      const CertGrid& grid) {
  grid.validate();
  if (!f.domain().contains(iv)) throw DomainError("check interval is outside the domain of " + f.describe());
  const auto xs = grid.xs(iv);
  const auto ys = grid.ys(iv);
  const auto& tol = grid.tolerance;

  Certificate c{f, phi, iv, grid, CertificateKind::Gradient, true, 0, 0, 0, 0, 0};
  bool first = true;
  for (Real x : xs) {
    const Real fx = f(x);
    const Real dfx = f.derivative(x);
    for (Real y : ys) {
      const Real lhs = f(y) - fx;
      const Real rhs = dfx * (y - x) + phi(std::fabs(y - x));
      const Real slack = lhs - rhs;
      ++c.cells;
      if (!tol.accepts(slack, std::max(std::fabs(lhs), std::fabs(rhs)))) c.passed = false;
      if (first || slack < c.worst_slack) {
        first = false;
        c.worst_slack = slack;
        c.worst_x = x;
        c.worst_y = y;
      }
    }
  }
  return c;
}

RefinementTerms barycentric_modulus_bound(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::Modulus);
  require_certified(inst, cert);
  const auto& phi = *inst.phi();
  const Real xp = barycenter(inst.x(), inst.p());
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  auto r = RefinementTerms::make(
      "eq32", {"J(p)", jp}, {{"sum p_i*Phi(|x_i-xp|)", weighted_modulus_sum(phi, inst.x(), inst.p().values(), xp)}},
      tol);
  r.details = {{"xp", xp}};
  return r;
}

RefinementTerms adjacent_chain_bound(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::Modulus);
  require_certified(inst, cert);
  const auto& phi = *inst.phi();
  const auto r = increasing_rearrangement(inst);
  Real chain = 0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    chain += r.p_bar[k] * r.p_bar[k + 1] * phi(r.sorted[k + 1] - r.sorted[k]);
  }
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  return RefinementTerms::make("thm3", {"J(p)", jp}, {{"sum p_(k)*p_(k+1)*Phi(x_(k+1)-x_(k))", chain}}, tol);
}

RefinementTerms lower_ratio_refinement(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::RatioModulus);
  require_certified(inst, cert);
  const auto& phi = *inst.phi();
  const Real m = ratio_extremes(inst.p(), inst.q()).m;
  const Real xp = barycenter(inst.x(), inst.p());
  const Real xq = barycenter(inst.x(), inst.q());
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());

  std::vector<Real> d(inst.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = inst.p()[i] - m * inst.q()[i];

  auto r = RefinementTerms::make("thm7-lower", {"J(p)-m*J(q)", jp - m * jq},
                                 {{"m*Phi(|xq-xp|)", m * phi(std::fabs(xq - xp))},
                                  {"sum (p_i-m*q_i)*Phi(|x_i-xp|)", weighted_modulus_sum(phi, inst.x(), d, xp)}},
                                 tol);
  r.details = {{"m", m}, {"J(p)", jp}, {"J(q)", jq}, {"xp", xp}, {"xq", xq}};
  return r;
}

RefinementTerms upper_ratio_refinement_normalized(const Instance& inst, const Certificate& cert,
                                                  const Tolerance& tol) {
  require_admissible(inst, TheoremMode::RatioModulus);
  require_certified(inst, cert);
  const auto& phi = *inst.phi();
  const Real M = ratio_extremes(inst.p(), inst.q()).M;
  const Real xp = barycenter(inst.x(), inst.p());
  const Real xq = barycenter(inst.x(), inst.q());
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());

  std::vector<Real> r_weights(inst.size());
  for (std::size_t i = 0; i < r_weights.size(); ++i) r_weights[i] = inst.q()[i] - inst.p()[i] / M;

  auto r = RefinementTerms::make("thm7-upper-normalized", {"J(q)-J(p)/M", jq - jp / M},
                                 {{"sum (q_i-p_i/M)*Phi(|x_i-xq|)", weighted_modulus_sum(phi, inst.x(), r_weights, xq)},
                                  {"(1/M)*Phi(|xq-xp|)", phi(std::fabs(xq - xp)) / M}},
                                 tol);
  r.details = {{"M", M}, {"J(p)", jp}, {"J(q)", jq}, {"xp", xp}, {"xq", xq}};
  return r;
}

RefinementTerms upper_ratio_refinement(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  const auto normalized = upper_ratio_refinement_normalized(inst, cert, tol);
  const Real M = normalized.detail("M").value;
  const Real jp = normalized.detail("J(p)").value;
  const Real jq = normalized.detail("J(q)").value;

  auto r = RefinementTerms::make("thm7-upper", {"M*J(q)-J(p)", M * jq - jp},
                                 {{"sum (M*q_i-p_i)*Phi(|x_i-xq|)", M * normalized.terms[0].value},
                                  {"Phi(|xq-xp|)", M * normalized.terms[1].value}},
                                 tol);
  r.details = normalized.details;
  r.details.push_back({"normalized gap", normalized.gap.value});
  r.details.push_back({"normalized sum", normalized.total()});
  r.details.push_back({"normalized slack", normalized.slack});
  return r;
}

TwoPointRefinements two_point_ratio_refinements(const FunctionSpec& f, const Certificate& cert, Real x1, Real x2,
                                                Real p1, Real q1, const Tolerance& tol) {
  if (x1 == x2) throw PreconditionError("two-point refinements need distinct points");
  if (!(p1 >= 0 && p1 <= 1)) throw PreconditionError("p1 must lie in [0, 1]");
  if (!(q1 > 0 && q1 < 1)) throw PreconditionError("q1 must lie in (0, 1)");
  require_certified(f, cert.phi, Interval{std::min(x1, x2), std::max(x1, x2)}, cert);
  const auto& phi = cert.phi;

  TwoPointRefinements out;

  // General q: orient so that m = p1/q1 is the smaller ratio.
  {
    Real a = x1, b = x2, pa = p1, qa = q1;
    if (pa / qa > (1 - pa) / (1 - qa)) {
      std::swap(a, b);
      pa = 1 - pa;
      qa = 1 - qa;
      out.swapped = true;
    }
    const Real pb = 1 - pa, qb = 1 - qa;
    const Real m = pa / qa;
    const Real M = pb / qb;
    const Real xp = pa * a + pb * b;
    const Real xq = qa * a + qb * b;
    const Real jp = pa * f(a) + pb * f(b) - f(xp);
    const Real jq = qa * f(a) + qb * f(b) - f(xq);
    const Real span = std::fabs(b - a);

    out.lower = RefinementTerms::make("thm7-lower-n2", {"J(p)-m*J(q)", jp - m * jq},
                                      {{"m*Phi(|xq-xp|)", m * phi(std::fabs(xq - xp))},
                                       {"sum (p_i-m*q_i)*Phi(|x_i-xp|)", (pb - m * qb) * phi(pa * span)}},
                                      tol);
    out.lower.details = {{"m", m}};
    out.upper = RefinementTerms::make("thm7-upper-n2", {"M*J(q)-J(p)", M * jq - jp},
                                      {{"sum (M*q_i-p_i)*Phi(|x_i-xq|)", (M * qa - pa) * phi(qb * span)},
                                       {"Phi(|xq-xp|)", phi(std::fabs(xq - xp))}},
                                      tol);
    out.upper.details = {{"M", M}};
    if (out.swapped) {
      out.lower.notes.push_back("points exchanged so that p1/q1 <= p2/q2");
      out.upper.notes.push_back("points exchanged so that p1/q1 <= p2/q2");
    }
  }

  // q = (1/2, 1/2): orient so that p1 <= 1/2.
  {
    Real a = x1, b = x2, pa = p1;
    if (pa > Real{1} / 2) {
      std::swap(a, b);
      pa = 1 - pa;
      out.midpoint_swapped = true;
    }
    const Real pb = 1 - pa;
    const Real mid = (a + b) / 2;
    const Real xp = pa * a + pb * b;
    const Real jp = pa * f(a) + pb * f(b) - f(xp);
    const Real h = midpoint_gap(f, a, b);
    const Real span = std::fabs(b - a);

    out.midpoint_lower = RefinementTerms::make("thm7-lower-midpoint", {"J(p)-2p1*H", jp - 2 * pa * h},
                                               {{"m*Phi(|xq-xp|)", 2 * pa * phi(std::fabs(mid - xp))},
                                                {"sum (p_i-m*q_i)*Phi(|x_i-xp|)", (1 - 2 * pa) * phi(pa * span)}},
                                               tol);
    out.midpoint_upper = RefinementTerms::make("thm7-upper-midpoint", {"2p2*H-J(p)", 2 * pb * h - jp},
                                               {{"sum (M*q_i-p_i)*Phi(|x_i-xq|)", (pb - pa) * phi(span / 2)},
                                                {"Phi(|xq-xp|)", phi(std::fabs(mid - xp))}},
                                               tol);
    out.midpoint_lower.details = {{"H", h}};
    out.midpoint_upper.details = {{"H", h}};
    if (out.midpoint_swapped) {
      out.midpoint_lower.notes.push_back("points exchanged so that p1 <= 1/2");
      out.midpoint_upper.notes.push_back("points exchanged so that p1 <= 1/2");
    }
  }
  return out;
}

MergedConfiguration merged_configuration(const Instance& inst) {
  const auto x = inst.x();
  if (!std::is_sorted(x.begin(), x.end())) {
    throw PreconditionError("merged chain refinement needs x sorted increasingly; rearrange first");
  }
  require_admissible(inst, TheoremMode::PointwiseRatio);
  MergedConfiguration mc;
  mc.m = ratio_extremes(inst.p(), inst.q()).m;
  mc.xbar_q = barycenter(x, inst.q());
  mc.inserted = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), mc.xbar_q) - x.begin());

  const std::size_t n = inst.size();
  mc.y.reserve(n + 1);
  mc.d.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    if (i == mc.inserted) {
      mc.y.push_back(mc.xbar_q);
      mc.d.push_back(mc.m);
    }
    if (i < n) {
      mc.y.push_back(x[i]);
      mc.d.push_back(inst.p()[i] - mc.m * inst.q()[i]);
    }
  }
  return mc;
}

RefinementTerms merged_chain_refinement(const Instance& inst, const Certificate& cert, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::RatioModulus);
  require_certified(inst, cert);
  const auto& phi = *inst.phi();
  const auto mc = merged_configuration(inst);

  Real chain = 0;
  for (std::size_t i = 0; i + 1 < mc.y.size(); ++i) {
    chain += mc.d[i] * mc.d[i + 1] * phi(mc.y[i + 1] - mc.y[i]);
  }
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());

  auto r = RefinementTerms::make("thm8", {"J(p)-m*J(q)", jp - mc.m * jq},
                                 {{"sum d_i*d_(i+1)*Phi(y_(i+1)-y_i)", chain}}, tol);
  Real dsum = 0;
  for (Real v : mc.d) dsum += v;
  r.details = {{"m", mc.m},
               {"xq", mc.xbar_q},
               {"insertion index", static_cast<Real>(mc.inserted + 1)},
               {"min d", *std::min_element(mc.d.begin(), mc.d.end())},
               {"sum d", dsum}};
  return r;
}

RefinementTerms two_point_chain_refinement(const FunctionSpec& f, const Certificate& cert, Real a, Real b, Real p1,
                                           Real q1, const Tolerance& tol) {
  if (!(a < b)) throw PreconditionError("two-point chain refinement needs a < b");
  if (!(p1 >= 0 && p1 <= 1)) throw PreconditionError("p1 must lie in [0, 1]");
  if (!(q1 > 0 && q1 < 1)) throw PreconditionError("q1 must lie in (0, 1)");
  const Real p2 = 1 - p1, q2 = 1 - q1;
  const Real m = p1 / q1;
  if (!(m <= p2 / q2)) {
    throw PreconditionError("two-point chain refinement needs p1/q1 <= p2/q2, got " + format_real(m) + " > " +
                            format_real(p2 / q2));
  }
  require_certified(f, cert.phi, Interval{a, b}, cert);
  const auto& phi = cert.phi;

  const Real jp = p1 * f(a) + p2 * f(b) - f(p1 * a + p2 * b);
  const Real jq = q1 * f(a) + q2 * f(b) - f(q1 * a + q2 * b);
  auto r = RefinementTerms::make("thm9", {"J(p)-m*J(q)", jp - m * jq},
                                 {{"m(1-m)*Phi(q1(b-a))", m * (1 - m) * phi(q1 * (b - a))}}, tol);
  r.details = {{"m", m}};
  if (q1 == Real{1} / 2) {
    r.details.push_back({"2p1(1-2p1)", 2 * p1 * (1 - 2 * p1)});
    r.details.push_back({"(1/4)*Phi((b-a)/2)", phi((b - a) / 2) / 4});
  }
  return r;
}

MidpointComparison compare_midpoint_refinements(const ModulusSpec& phi, Real a, Real b, Real p1,
                                                const Tolerance& tol) {
  if (!(a < b)) throw PreconditionError("comparison needs a < b");
  if (!(p1 > 0 && p1 <= Real{1} / 2)) throw PreconditionError("comparison needs p1 in (0, 1/2]");
  const Real p2 = 1 - p1;
  const Real span = b - a;
  const Real xp = p1 * a + p2 * b;

  MidpointComparison c;
  c.chord = 2 * p1 * phi(std::fabs((a + b) / 2 - xp)) + (1 - 2 * p1) * phi(p1 * span);
  c.chain = 2 * p1 * (1 - 2 * p1) * phi(span / 2);
  c.best_chain = phi(span / 2) / 4;
  const Real band = tol.bound(std::max(std::fabs(c.chord), std::fabs(c.chain)));
  if (c.chain > c.chord + band) {
    c.winner = RefinementWinner::Chain;
  } else if (c.chord > c.chain + band) {
    c.winner = RefinementWinner::Chord;
  } else {
    c.winner = RefinementWinner::Tie;
  }
  return c;
}

std::string_view to_string(RefinementWinner w) {
  switch (w) {
    case RefinementWinner::Chord: return "chord";
    case RefinementWinner::Chain: return "chain";
    case RefinementWinner::Tie: return "tie";
  }
  return "?";
}

}  // namespace jensen
