#pragma once

#include <vector>

#include "jensen/instance.hpp"
#include "jensen/report.hpp"

namespace jensen {

/// Extremes of the pointwise ratios p_i / q_i with every attaining index
/// (0-based). Attainment is exact float equality against the extreme.
struct ClassicRatios {
  Real m = 1;
  Real M = 1;
  std::vector<std::size_t> argmin;
  std::vector<std::size_t> argmax;
};

/// Throws PreconditionError unless every q_i > 0.
[[nodiscard]] ClassicRatios ratio_extremes(const WeightVector& p, const WeightVector& q);

/// M J(f,x,q) >= J(f,x,p) >= m J(f,x,q) for nonnegative p and positive q.
[[nodiscard]] BoundReport ratio_sandwich(const Instance& inst, const Tolerance& tol = {});

/// Two-point case with q = (1/2, 1/2):
///   max{p,1-p} D >= p f(a) + (1-p) f(b) - f(pa + (1-p)b) >= min{p,1-p} D,
/// where D = f(a) + f(b) - 2 f((a+b)/2). Requires a < b and 0 < p < 1.
[[nodiscard]] BoundReport two_point_sandwich(const FunctionSpec& f, Real a, Real b, Real p,
                                             const Tolerance& tol = {});

}  // namespace jensen
