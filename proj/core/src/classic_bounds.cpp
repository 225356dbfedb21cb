#include "jensen/classic_bounds.hpp"

#include <algorithm>

namespace jensen {

ClassicRatios ratio_extremes(const WeightVector& p, const WeightVector& q) {
  if (p.size() != q.size()) throw InputError("ratio_extremes: length mismatch");
  std::vector<Real> ratio(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(q[i] > 0)) {
      throw PreconditionError("q_i > 0 fails at i=" + std::to_string(i + 1));
    }
    ratio[i] = p[i] / q[i];
  }
  ClassicRatios r;
  r.m = *std::min_element(ratio.begin(), ratio.end());
  r.M = *std::max_element(ratio.begin(), ratio.end());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (ratio[i] == r.m) r.argmin.push_back(i);
    if (ratio[i] == r.M) r.argmax.push_back(i);
  }
  return r;
}

BoundReport ratio_sandwich(const Instance& inst, const Tolerance& tol) {
  require_admissible(inst, TheoremMode::PointwiseRatio);
  const auto ratios = ratio_extremes(inst.p(), inst.q());
  const Real jp = jensen_functional(inst.f(), inst.x(), inst.p());
  const Real jq = jensen_functional(inst.f(), inst.x(), inst.q());

  auto report = BoundReport::make("thm1",
                                  {{"M*J(q)", ratios.M * jq}, {"J(p)", jp}, {"m*J(q)", ratios.m * jq}}, tol);
  report.details = {{"m", ratios.m}, {"M", ratios.M}, {"J(q)", jq}};
  return report;
}

BoundReport two_point_sandwich(const FunctionSpec& f, Real a, Real b, Real p, const Tolerance& tol) {
  if (!(a < b)) throw PreconditionError("two-point bound needs a < b");
  if (!(p > 0 && p < 1)) throw PreconditionError("two-point bound needs 0 < p < 1, got " + format_real(p));
  if (!f.domain().contains(Interval{a, b})) {
    throw DomainError("[" + format_real(a) + ", " + format_real(b) + "] is outside the domain of " + f.describe());
  }
  const Real q = 1 - p;
  const Real doubled_gap = f(a) + f(b) - 2 * f((a + b) / 2);
  const Real middle = p * f(a) + q * f(b) - f(p * a + q * b);

  auto report = BoundReport::make("thm5",
                                  {{"max(p,q)*D", std::max(p, q) * doubled_gap},
                                   {"J(p)", middle},
                                   {"min(p,q)*D", std::min(p, q) * doubled_gap}},
                                  tol);
  report.details = {{"D", doubled_gap}, {"p", p}, {"q", q}};
  return report;
}

}  // namespace jensen
