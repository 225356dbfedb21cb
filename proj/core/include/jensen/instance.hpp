#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jensen/function.hpp"
#include "jensen/weights.hpp"

namespace jensen {

/// Points, two weight tuples, the function, an optional modulus and the
/// ambient interval. Construction checks only the structural invariants
/// (matching lengths, n >= 2, points inside [a,b] inside dom f); the
/// hypotheses of individual bounds are checked by validate_instance.
class Instance {
 public:
  Instance(std::vector<Real> x, WeightVector p, WeightVector q, FunctionSpec f, Interval interval,
           std::optional<ModulusSpec> phi = std::nullopt);

  [[nodiscard]] std::size_t size() const { return x_.size(); }
  [[nodiscard]] std::span<const Real> x() const { return x_; }
  [[nodiscard]] const WeightVector& p() const { return p_; }
  [[nodiscard]] const WeightVector& q() const { return q_; }
  [[nodiscard]] const FunctionSpec& f() const { return f_; }
  [[nodiscard]] const Interval& interval() const { return interval_; }
  [[nodiscard]] const std::optional<ModulusSpec>& phi() const { return phi_; }

  [[nodiscard]] Instance with_p(WeightVector p) const;
  [[nodiscard]] Instance with_q(WeightVector q) const;
  [[nodiscard]] Instance with_f(FunctionSpec f) const;
  [[nodiscard]] Instance with_phi(std::optional<ModulusSpec> phi) const;
  /// Points, p and q reordered by the same permutation.
  [[nodiscard]] Instance permuted(std::span<const std::size_t> perm) const;
  /// The same instance with x sorted increasingly (stable).
  [[nodiscard]] Instance sorted() const;

 private:
  std::vector<Real> x_;
  WeightVector p_;
  WeightVector q_;
  FunctionSpec f_;
  Interval interval_;
  std::optional<ModulusSpec> phi_;
};

/// Increasing rearrangement of x with the same permutation applied to both
/// weight tuples: sorted[i] = x[perm[i]], p_bar[i] = p[perm[i]].
struct Rearrangement {
  std::vector<std::size_t> perm;
  std::vector<Real> sorted;
  std::vector<Real> p_bar;
  std::vector<Real> q_bar;

  /// Wraps tuples that are already in the intended order (identity
  /// permutation). Throws InputError when `sorted` is not nondecreasing.
  static Rearrangement from_ordered(std::vector<Real> x, std::vector<Real> p, std::vector<Real> q);

  [[nodiscard]] std::size_t size() const { return sorted.size(); }
  /// Undoes the permutation: returns (x, p, q) in the original order.
  void restore(std::vector<Real>& x, std::vector<Real>& p, std::vector<Real>& q) const;
};

/// Stable sort of x; ties keep their original relative order.
[[nodiscard]] Rearrangement increasing_rearrangement(std::span<const Real> x, const WeightVector& p,
                                                     const WeightVector& q);
[[nodiscard]] Rearrangement increasing_rearrangement(const Instance& inst);

[[nodiscard]] Real barycenter(std::span<const Real> x, std::span<const Real> w);
[[nodiscard]] inline Real barycenter(std::span<const Real> x, const WeightVector& w) {
  return barycenter(x, w.values());
}

/// J_n(f, x, w) = sum w_i f(x_i) - f(sum w_i x_i). Throws DomainError when
/// the barycenter leaves dom f (possible for signed weights).
[[nodiscard]] Real jensen_functional(const FunctionSpec& f, std::span<const Real> x, std::span<const Real> w);
[[nodiscard]] inline Real jensen_functional(const FunctionSpec& f, std::span<const Real> x, const WeightVector& w) {
  return jensen_functional(f, x, w.values());
}

/// Hermite-Hadamard gap (f(a) + f(b)) / 2 - f((a + b) / 2).
[[nodiscard]] Real midpoint_gap(const FunctionSpec& f, Real a, Real b);

/// Which family of hypotheses to check.
enum class TheoremMode {
  PointwiseRatio,  // q > 0, p >= 0
  PrefixRatio,     // sorted prefix sums: p in [0,1], q in (0,1) before the last index
  Endpoint,        // sorted prefix sums of p in [0,1]
  UniformReference,// prefix-ratio hypotheses with q uniform
  Modulus,         // p >= 0 and a modulus is present
  RatioModulus,    // PointwiseRatio and a modulus is present
};

[[nodiscard]] std::string_view to_string(TheoremMode mode);

/// Tolerance for prefix sums of p against [0, 1].
inline constexpr Real kPrefixTolerance = 1e-12L;

/// Every violated precondition for `mode`, as human-readable strings.
/// An empty list means the instance is admissible.
[[nodiscard]] std::vector<std::string> validate_instance(const Instance& inst, TheoremMode mode);

/// Throws PreconditionError listing the violations, if any.
void require_admissible(const Instance& inst, TheoremMode mode);

}  // namespace jensen
