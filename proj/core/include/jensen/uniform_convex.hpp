#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jensen/instance.hpp"
#include "jensen/report.hpp"

namespace jensen {

/// Discretization of the quantifiers "for all x, y in [a,b] and t in [0,1]".
/// Points are equally spaced and include both ends; `t_points` must be odd
/// so that t = 1/2 is on the grid.
struct CertGrid {
  std::size_t x_points = 64;
  std::size_t y_points = 64;
  std::size_t t_points = 17;
  Tolerance tolerance;

  void validate() const;
  [[nodiscard]] std::vector<Real> xs(const Interval& iv) const;
  [[nodiscard]] std::vector<Real> ys(const Interval& iv) const;
  [[nodiscard]] std::vector<Real> ts() const;
};

enum class CertificateKind { Definition, Gradient, Assumed };

/// Outcome of a grid check of a (function, modulus, interval) triple.
struct Certificate {
  FunctionSpec f;
  ModulusSpec phi;
  Interval interval;
  CertGrid grid;
  CertificateKind kind = CertificateKind::Definition;
  bool passed = false;
  Real worst_slack = 0;
  Real worst_x = 0;
  Real worst_y = 0;
  Real worst_t = 0;
  std::size_t cells = 0;

  /// A certificate that trusts the caller (no grid evaluation).
  static Certificate assumed(const FunctionSpec& f, const ModulusSpec& phi, const Interval& iv);
  [[nodiscard]] bool usable() const { return passed || kind == CertificateKind::Assumed; }
};

/// Checks t f(x) + (1-t) f(y) >= f(tx + (1-t)y) + t(1-t) Phi(|x-y|) on every
/// grid cell. The worst cell is the first one (x-major, then y, then t) that
/// attains the minimum slack.
[[nodiscard]] Certificate certify_uniform_convexity(const FunctionSpec& f, const ModulusSpec& phi,
                                                    const Interval& iv, const CertGrid& grid = {});

/// Largest c for which c * d^r passes certification on this grid:
/// the infimum of the chord gap divided by t(1-t)|x-y|^r over cells with
/// x != y and 0 < t < 1.
[[nodiscard]] Real estimate_modulus_coefficient(const FunctionSpec& f, Real exponent, const Interval& iv,
                                                const CertGrid& grid = {});

/// Checks f(y) - f(x) >= f'(x)(y - x) + Phi(|y - x|) on the (x, y) grid.
[[nodiscard]] Certificate gradient_inequality_check(const FunctionSpec& f, const ModulusSpec& phi,
                                                    const Interval& iv, const CertGrid& grid = {});

/// J(f,x,p) >= sum p_i Phi(|x_i - xbar_p|).
[[nodiscard]] RefinementTerms barycentric_modulus_bound(const Instance& inst, const Certificate& cert,
                                                        const Tolerance& tol = {});

/// J(f,x,p) >= sum_k p_(k) p_(k+1) Phi(x_(k+1) - x_(k)) over the sorted points.
[[nodiscard]] RefinementTerms adjacent_chain_bound(const Instance& inst, const Certificate& cert,
                                                   const Tolerance& tol = {});

/// J(p) - m J(q) >= m Phi(|xbar_q - xbar_p|) + sum (p_i - m q_i) Phi(|x_i - xbar_p|).
[[nodiscard]] RefinementTerms lower_ratio_refinement(const Instance& inst, const Certificate& cert,
                                                     const Tolerance& tol = {});

/// Normalized upper chain, a convex combination with weights q_i - p_i/M and 1/M:
///   J(q) - J(p)/M >= sum (q_i - p_i/M) Phi(|x_i - xbar_q|) + (1/M) Phi(|xbar_q - xbar_p|).
[[nodiscard]] RefinementTerms upper_ratio_refinement_normalized(const Instance& inst, const Certificate& cert,
                                                                const Tolerance& tol = {});

/// The normalized upper chain multiplied by M:
///   M J(q) - J(p) >= sum (M q_i - p_i) Phi(|x_i - xbar_q|) + Phi(|xbar_q - xbar_p|).
/// The normalized gap and terms are kept in `details`.
[[nodiscard]] RefinementTerms upper_ratio_refinement(const Instance& inst, const Certificate& cert,
                                                     const Tolerance& tol = {});

/// Closed-form two-point refinements. `lower`/`upper` use the given q;
/// the `midpoint_*` pair uses q = (1/2, 1/2).
struct TwoPointRefinements {
  RefinementTerms lower;
  RefinementTerms upper;
  RefinementTerms midpoint_lower;
  RefinementTerms midpoint_upper;
  bool swapped = false;           // roles of the two points exchanged so p1/q1 <= p2/q2
  bool midpoint_swapped = false;  // roles exchanged so p1 <= 1/2
};

[[nodiscard]] TwoPointRefinements two_point_ratio_refinements(const FunctionSpec& f, const Certificate& cert,
                                                              Real x1, Real x2, Real p1, Real q1,
                                                              const Tolerance& tol = {});

/// Sorted points with the q-barycenter inserted and the matching weights
/// d = (p - m q) with m at the inserted slot.
struct MergedConfiguration {
  std::vector<Real> y;
  std::vector<Real> d;
  std::size_t inserted = 0;  // 0-based position of xbar_q in y
  Real m = 1;
  Real xbar_q = 0;
};

/// Requires x sorted increasingly, p >= 0 and q > 0.
[[nodiscard]] MergedConfiguration merged_configuration(const Instance& inst);

/// J(p) - m J(q) >= sum_i d_i d_(i+1) Phi(y_(i+1) - y_i) on the merged
/// configuration.
[[nodiscard]] RefinementTerms merged_chain_refinement(const Instance& inst, const Certificate& cert,
                                                      const Tolerance& tol = {});

/// With m = p1/q1 <= p2/q2 on the points a < b:
///   [J_2(p) - m J_2(q)] >= m (1 - m) Phi(q1 (b - a)).
[[nodiscard]] RefinementTerms two_point_chain_refinement(const FunctionSpec& f, const Certificate& cert, Real a,
                                                         Real b, Real p1, Real q1, const Tolerance& tol = {});

enum class RefinementWinner { Chord, Chain, Tie };

/// For q = (1/2, 1/2) and p1 in (0, 1/2], the two lower refinements of
/// p1 f(a) + p2 f(b) - f(p1 a + p2 b) - 2 p1 H:
///   chord: 2 p1 Phi(|(a+b)/2 - xbar_p|) + (1 - 2 p1) Phi(p1 (b - a))
///   chain: 2 p1 (1 - 2 p1) Phi((b - a) / 2)
/// and the chain value at its maximizer p1 = 1/4, (1/4) Phi((b - a) / 2).
struct MidpointComparison {
  Real chord = 0;
  Real chain = 0;
  Real best_chain = 0;
  RefinementWinner winner = RefinementWinner::Tie;
};

[[nodiscard]] MidpointComparison compare_midpoint_refinements(const ModulusSpec& phi, Real a, Real b, Real p1,
                                                              const Tolerance& tol = {});

[[nodiscard]] std::string_view to_string(RefinementWinner w);

}  // namespace jensen
