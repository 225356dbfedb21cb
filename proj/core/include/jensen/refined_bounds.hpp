#pragma once

#include <vector>

#include "jensen/classic_bounds.hpp"
#include "jensen/instance.hpp"
#include "jensen/report.hpp"

namespace jensen {

enum class RatioFamily { Prefix, Suffix };

struct RatioAttainment {
  RatioFamily family = RatioFamily::Prefix;
  std::size_t index = 0;  // 0-based position in the rearranged order
};

/// Cumulative-mass ratios of a rearranged configuration:
///   prefix[i] = (p_bar_0 + ... + p_bar_i) / (q_bar_0 + ... + q_bar_i)
///   suffix[i] = (p_bar_i + ... + p_bar_{n-1}) / (q_bar_i + ... + q_bar_{n-1})
/// with prefix[n-1] = suffix[0] = 1 exactly, and m_star / M_star the
/// extremes over both families.
struct RatioSummary {
  std::vector<Real> prefix;
  std::vector<Real> suffix;
  Real m_star = 1;
  Real M_star = 1;
  RatioAttainment min_at;
  RatioAttainment max_at;
};

/// Throws PreconditionError when a q prefix sum before the last index is
/// not strictly inside (0, 1).
[[nodiscard]] RatioSummary prefix_suffix_ratios(const Rearrangement& r);

/// M* J(f,x,q) >= J(f,x,p) >= m* J(f,x,q); p may be signed as long as its
/// sorted prefix sums stay in [0, 1].
[[nodiscard]] BoundReport prefix_ratio_sandwich(const Instance& inst, const Tolerance& tol = {});

/// How the prefix/suffix extremes compare with the pointwise ones.
struct RatioRefinement {
  Real m = 1;
  Real m_star = 1;
  Real M_star = 1;
  Real M = 1;
  bool refined_below = false;  // m_star > m + tol
  bool refined_above = false;  // M_star < M - tol
  bool min_interior_only = false;  // every argmin of p_i/q_i is an interior sorted index
  bool max_interior_only = false;
};

/// Requires q > 0 (so the pointwise ratios exist).
[[nodiscard]] RatioRefinement interior_refinement(const Instance& inst, const Tolerance& tol = {});

/// Bound by the endpoint midpoint gap: 0 <= J(f,x,p) <= M* H, where
/// H = (f(a)+f(b))/2 - f((a+b)/2) and M* comes from the configuration
/// (a, x_sorted, b) with p = (0, p_bar, 0) and q = (1/2, 0, ..., 0, 1/2).
/// The report also carries 2H for comparison.
[[nodiscard]] BoundReport endpoint_bound(const FunctionSpec& f, Real a, Real b, std::span<const Real> x,
                                         const WeightVector& p, const Tolerance& tol = {});

/// Chain against the uniform-weight functional J(u) = J(f, x, 1/n):
///   n max(p) J(u) >= M* J(u) >= J(p) >= m* J(u) >= n min(p) J(u),
/// the outer links only when p is nonnegative.
[[nodiscard]] BoundReport uniform_reference_bounds(const FunctionSpec& f, std::span<const Real> x,
                                                   const WeightVector& p, const Tolerance& tol = {});

}  // namespace jensen
