#include "jensen/function.hpp"

#include <cmath>
#include <sstream>

namespace jensen {

namespace {

void require_coefficient(Real c) {
  if (!(c > 0) || !std::isfinite(c)) {
    throw InputError("function coefficient must be a finite positive number");
  }
}

}  // namespace

bool Domain::contains(Real x) const {
  if (std::isnan(x)) return false;
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

std::string Domain::describe() const {
  std::ostringstream os;
  os << (lo_closed ? '[' : '(') << format_real(lo) << ", " << format_real(hi) << (hi_closed ? ']' : ')');
  return os.str();
}

std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::Power: return "power";
    case FunctionKind::Square: return "square";
    case FunctionKind::Exp: return "exp";
    case FunctionKind::XLogX: return "xlogx";
    case FunctionKind::AbsPower: return "abspower";
  }
  return "?";
}

std::optional<FunctionKind> parse_function_kind(std::string_view name) {
  for (auto k : {FunctionKind::Power, FunctionKind::Square, FunctionKind::Exp, FunctionKind::XLogX,
                 FunctionKind::AbsPower}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

FunctionSpec FunctionSpec::power(Real exponent, Real coefficient) {
  if (!(exponent >= 1) || !std::isfinite(exponent)) {
    throw InputError("power exponent must satisfy r >= 1");
  }
  require_coefficient(coefficient);
  return {FunctionKind::Power, exponent, coefficient};
}

FunctionSpec FunctionSpec::square(Real coefficient) {
  require_coefficient(coefficient);
  return {FunctionKind::Square, 2, coefficient};
}

FunctionSpec FunctionSpec::exp(Real coefficient) {
  require_coefficient(coefficient);
  return {FunctionKind::Exp, 0, coefficient};
}

FunctionSpec FunctionSpec::xlogx(Real coefficient) {
  require_coefficient(coefficient);
  return {FunctionKind::XLogX, 0, coefficient};
}

FunctionSpec FunctionSpec::abs_power(Real exponent, Real coefficient) {
  if (!(exponent >= 2) || !std::isfinite(exponent)) {
    throw InputError("abspower exponent must satisfy r >= 2");
  }
  require_coefficient(coefficient);
  return {FunctionKind::AbsPower, exponent, coefficient};
}

FunctionSpec FunctionSpec::make(FunctionKind kind, std::optional<Real> exponent, Real coefficient) {
  const bool wants_exponent = kind == FunctionKind::Power || kind == FunctionKind::AbsPower;
  if (wants_exponent && !exponent) {
    throw InputError(std::string(to_string(kind)) + " requires an exponent");
  }
  if (!wants_exponent && exponent) {
    throw InputError(std::string(to_string(kind)) + " takes no exponent");
  }
  switch (kind) {
    case FunctionKind::Power: return power(*exponent, coefficient);
    case FunctionKind::Square: return square(coefficient);
    case FunctionKind::Exp: return FunctionSpec::exp(coefficient);
    case FunctionKind::XLogX: return xlogx(coefficient);
    case FunctionKind::AbsPower: return abs_power(*exponent, coefficient);
  }
  throw InputError("unknown function kind");
}

bool FunctionSpec::has_exponent() const {
  return kind_ == FunctionKind::Power || kind_ == FunctionKind::AbsPower;
}

Domain FunctionSpec::domain() const {
  constexpr Real inf = std::numeric_limits<Real>::infinity();
  switch (kind_) {
    case FunctionKind::Power: return {0, inf, true, false};
    case FunctionKind::XLogX: return {0, inf, false, false};
    default: return {-inf, inf, false, false};
  }
}

std::string FunctionSpec::describe() const {
  std::ostringstream os;
  if (coefficient_ != 1) os << format_real(coefficient_) << "*";
  switch (kind_) {
    case FunctionKind::Power: os << "x^" << format_real(exponent_); break;
    case FunctionKind::Square: os << "x^2"; break;
    case FunctionKind::Exp: os << "exp(x)"; break;
    case FunctionKind::XLogX: os << "x*log(x)"; break;
    case FunctionKind::AbsPower: os << "|x|^" << format_real(exponent_); break;
  }
  return os.str();
}

FunctionSpec FunctionSpec::scaled(Real alpha) const {
  require_coefficient(alpha);
  return {kind_, exponent_, coefficient_ * alpha};
}

Real FunctionSpec::operator()(Real x) const {
  if (!domain().contains(x)) {
    throw DomainError(describe() + ": " + format_real(x) + " is outside the domain " + domain().describe());
  }
  Real v = 0;
  switch (kind_) {
    case FunctionKind::Power: v = std::pow(x, exponent_); break;
    case FunctionKind::Square: v = x * x; break;
    case FunctionKind::Exp: v = std::exp(x); break;
    case FunctionKind::XLogX: v = x * std::log(x); break;
    case FunctionKind::AbsPower: v = std::pow(std::fabs(x), exponent_); break;
  }
  return coefficient_ * v;
}

Real FunctionSpec::derivative(Real x) const {
  if (!domain().contains(x)) {
    throw DomainError(describe() + ": derivative undefined at " + format_real(x));
  }
  Real v = 0;
  switch (kind_) {
    case FunctionKind::Power:
      v = exponent_ == 1 ? Real{1} : exponent_ * std::pow(x, exponent_ - 1);
      break;
    case FunctionKind::Square: v = 2 * x; break;
    case FunctionKind::Exp: v = std::exp(x); break;
    case FunctionKind::XLogX: v = std::log(x) + 1; break;
    case FunctionKind::AbsPower: {
      const Real mag = exponent_ * std::pow(std::fabs(x), exponent_ - 1);
      v = x < 0 ? -mag : mag;
      break;
    }
  }
  return coefficient_ * v;
}

Real FunctionSpec::min_curvature(const Interval& iv) const {
  if (!domain().contains(iv)) {
    throw DomainError(describe() + ": interval outside the domain " + domain().describe());
  }
  Real v = 0;
  switch (kind_) {
    case FunctionKind::Square: v = 2; break;
    case FunctionKind::Exp: v = std::exp(iv.lo); break;
    case FunctionKind::XLogX: v = 1 / iv.hi; break;
    case FunctionKind::Power: {
      const Real r = exponent_;
      if (r == 1) {
        v = 0;
      } else if (r == 2) {
        v = 2;
      } else {
        // r(r-1)x^(r-2) is increasing for r > 2, decreasing for 1 < r < 2.
        const Real at = r > 2 ? iv.lo : iv.hi;
        v = r * (r - 1) * std::pow(at, r - 2);
      }
      break;
    }
    case FunctionKind::AbsPower: {
      const Real r = exponent_;
      if (r == 2) {
        v = 2;
      } else {
        const Real nearest = (iv.lo <= 0 && iv.hi >= 0) ? Real{0} : std::min(std::fabs(iv.lo), std::fabs(iv.hi));
        v = r * (r - 1) * std::pow(nearest, r - 2);
      }
      break;
    }
  }
  return coefficient_ * v;
}

ModulusSpec::ModulusSpec(Real coefficient, Real exponent) : coefficient_(coefficient), exponent_(exponent) {
  if (!(coefficient > 0) || !std::isfinite(coefficient)) {
    throw InputError("modulus coefficient must be a finite positive number");
  }
  if (!(exponent >= 2) || !std::isfinite(exponent)) {
    throw InputError("modulus exponent must satisfy r >= 2");
  }
}

std::string ModulusSpec::describe() const {
  return format_real(coefficient_) + "*d^" + format_real(exponent_);
}

Real ModulusSpec::operator()(Real d) const {
  if (std::isnan(d) || d < 0) {
    throw InputError("modulus argument must be a nonnegative distance, got " + format_real(d));
  }
  if (d == 0) return 0;
  if (exponent_ == 2) return coefficient_ * d * d;
  return coefficient_ * std::pow(d, exponent_);
}

std::optional<ModulusSpec> strong_convexity_modulus(const FunctionSpec& f, const Interval& iv) {
  const Real kappa = f.min_curvature(iv);
  if (!(kappa > 0)) return std::nullopt;
  return ModulusSpec(kappa / 2, 2);
}

}  // namespace jensen
