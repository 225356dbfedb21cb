#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "jensen/types.hpp"

namespace jensen {

/// Domain of a catalog function: an interval whose ends may be open or
/// infinite.
struct Domain {
  Real lo = -std::numeric_limits<Real>::infinity();
  Real hi = std::numeric_limits<Real>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;

  [[nodiscard]] bool contains(Real x) const;
  [[nodiscard]] bool contains(const Interval& iv) const { return contains(iv.lo) && contains(iv.hi); }
  [[nodiscard]] bool interior(Real x) const { return x > lo && x < hi; }
  [[nodiscard]] std::string describe() const;
};

enum class FunctionKind {
  Power,     // x^r on [0, inf), r >= 1
  Square,    // x^2 on R
  Exp,       // e^x on R
  XLogX,     // x log x on (0, inf)
  AbsPower,  // |x|^r on R, r >= 2
};

[[nodiscard]] std::string_view to_string(FunctionKind kind);
[[nodiscard]] std::optional<FunctionKind> parse_function_kind(std::string_view name);

/// A convex function from the closed catalog, optionally scaled by a positive
/// coefficient. Only exponent-carrying kinds use `exponent`.
class FunctionSpec {
 public:
  static FunctionSpec power(Real exponent, Real coefficient = 1);
  static FunctionSpec square(Real coefficient = 1);
  static FunctionSpec exp(Real coefficient = 1);
  static FunctionSpec xlogx(Real coefficient = 1);
  static FunctionSpec abs_power(Real exponent, Real coefficient = 1);
  /// Builds any kind; throws InputError on an invalid exponent/coefficient.
  static FunctionSpec make(FunctionKind kind, std::optional<Real> exponent, Real coefficient = 1);

  [[nodiscard]] FunctionKind kind() const { return kind_; }
  [[nodiscard]] bool has_exponent() const;
  [[nodiscard]] Real exponent() const { return exponent_; }
  [[nodiscard]] Real coefficient() const { return coefficient_; }
  [[nodiscard]] Domain domain() const;
  [[nodiscard]] std::string describe() const;

  /// Same function multiplied by alpha > 0.
  [[nodiscard]] FunctionSpec scaled(Real alpha) const;

  /// Value at x; throws DomainError outside the domain.
  [[nodiscard]] Real operator()(Real x) const;
  /// Analytic first derivative. Closed domain ends use the one-sided
  /// derivative when it is finite.
  [[nodiscard]] Real derivative(Real x) const;
  /// Infimum of f'' over [lo, hi]; zero when f is not strongly convex there.
  [[nodiscard]] Real min_curvature(const Interval& iv) const;

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;

 private:
  FunctionSpec(FunctionKind kind, Real exponent, Real coefficient)
      : kind_(kind), exponent_(exponent), coefficient_(coefficient) {}

  FunctionKind kind_;
  Real exponent_;
  Real coefficient_;
};

[[nodiscard]] inline Real eval_f(const FunctionSpec& f, Real x) { return f(x); }
[[nodiscard]] inline Real eval_f_derivative(const FunctionSpec& f, Real x) { return f.derivative(x); }

/// Power-type modulus Phi(d) = c * d^r with c > 0 and r >= 2. Such a
/// modulus is nondecreasing on [0, inf) and vanishes at 0.
class ModulusSpec {
 public:
  ModulusSpec(Real coefficient, Real exponent);

  [[nodiscard]] Real coefficient() const { return coefficient_; }
  [[nodiscard]] Real exponent() const { return exponent_; }
  [[nodiscard]] ModulusSpec scaled(Real alpha) const { return {coefficient_ * alpha, exponent_}; }
  [[nodiscard]] std::string describe() const;

  /// Phi(d); throws InputError for negative d.
  [[nodiscard]] Real operator()(Real d) const;

  friend bool operator==(const ModulusSpec&, const ModulusSpec&) = default;

 private:
  Real coefficient_;
  Real exponent_;
};

[[nodiscard]] inline Real eval_phi(const ModulusSpec& phi, Real d) { return phi(d); }

/// Analytic quadratic modulus (min f'' / 2) d^2 on the interval, when f is
/// strongly convex there.
[[nodiscard]] std::optional<ModulusSpec> strong_convexity_modulus(const FunctionSpec& f, const Interval& iv);

}  // namespace jensen
