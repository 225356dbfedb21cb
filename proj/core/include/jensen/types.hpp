#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jensen {

/// Working precision for every computed quantity. On x86-64 this is the
/// 80-bit extended format; inputs arrive as double and are widened once.
using Real = long double;

inline constexpr const char* kVersion = "0.3.0";

/// Malformed input: wrong lengths, weights that do not sum to one, NaNs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point (or barycenter) falls outside the domain of the function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The instance is well formed but does not satisfy a bound's hypotheses.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Slack tolerance: a link `lhs >= rhs` is accepted when
/// `lhs - rhs >= -(abs + rel * scale)`, scale being the largest absolute
/// term of the chain the link belongs to.
struct Tolerance {
  Real abs = 1e-10L;
  Real rel = 1e-9L;

  [[nodiscard]] Real bound(Real scale) const { return abs + rel * scale; }
  [[nodiscard]] bool accepts(Real slack, Real scale) const {
    return slack >= -bound(scale);
  }
};

/// Slack divided by the chain scale, so slacks of different functions are
/// comparable. Scales below `abs` are clamped to keep the ratio finite.
[[nodiscard]] inline Real relative_slack(Real slack, Real scale, const Tolerance& tol = {}) {
  return slack / std::max(scale, tol.abs);
}

/// Closed interval [lo, hi] with lo < hi.
struct Interval {
  Real lo = 0;
  Real hi = 1;

  [[nodiscard]] Real length() const { return hi - lo; }
  [[nodiscard]] bool contains(Real x) const { return x >= lo && x <= hi; }
  [[nodiscard]] bool contains(const Interval& other) const {
    return other.lo >= lo && other.hi <= hi;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

[[nodiscard]] std::string format_real(Real value);

}  // namespace jensen
