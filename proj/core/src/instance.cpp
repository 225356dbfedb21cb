#include "jensen/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace jensen {

Instance::Instance(std::vector<Real> x, WeightVector p, WeightVector q, FunctionSpec f, Interval interval,
                   std::optional<ModulusSpec> phi)
    : x_(std::move(x)), p_(std::move(p)), q_(std::move(q)), f_(f), interval_(interval), phi_(phi) {
  if (x_.size() < 2) {
    throw InputError("an instance needs at least two points, got " + std::to_string(x_.size()));
  }
  if (p_.size() != x_.size() || q_.size() != x_.size()) {
    throw InputError("length mismatch: x has " + std::to_string(x_.size()) + " entries, p has " +
                     std::to_string(p_.size()) + ", q has " + std::to_string(q_.size()));
  }
  if (!(interval_.lo < interval_.hi)) {
    throw InputError("interval [" + format_real(interval_.lo) + ", " + format_real(interval_.hi) +
                     "] must satisfy a < b");
  }
  if (!f_.domain().contains(interval_)) {
    throw DomainError("interval [" + format_real(interval_.lo) + ", " + format_real(interval_.hi) +
                      "] is not inside the domain " + f_.domain().describe() + " of " + f_.describe());
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!interval_.contains(x_[i])) {
      throw InputError("x_" + std::to_string(i + 1) + " = " + format_real(x_[i]) + " lies outside [" +
                       format_real(interval_.lo) + ", " + format_real(interval_.hi) + "]");
    }
  }
}

Instance Instance::with_p(WeightVector p) const { return {x_, std::move(p), q_, f_, interval_, phi_}; }
Instance Instance::with_q(WeightVector q) const { return {x_, p_, std::move(q), f_, interval_, phi_}; }
Instance Instance::with_f(FunctionSpec f) const { return {x_, p_, q_, f, interval_, phi_}; }
Instance Instance::with_phi(std::optional<ModulusSpec> phi) const { return {x_, p_, q_, f_, interval_, phi}; }

Instance Instance::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != x_.size()) throw InputError("permutation length does not match instance");
  std::vector<Real> x(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) x[i] = x_.at(perm[i]);
  return {std::move(x), p_.permuted(perm), q_.permuted(perm), f_, interval_, phi_};
}

Instance Instance::sorted() const { return permuted(increasing_rearrangement(*this).perm); }

Rearrangement Rearrangement::from_ordered(std::vector<Real> x, std::vector<Real> p, std::vector<Real> q) {
  if (p.size() != x.size() || q.size() != x.size()) throw InputError("length mismatch in ordered tuples");
  if (!std::is_sorted(x.begin(), x.end())) throw InputError("points are not in nondecreasing order");
  Rearrangement r;
  r.perm.resize(x.size());
  std::iota(r.perm.begin(), r.perm.end(), std::size_t{0});
  r.sorted = std::move(x);
  r.p_bar = std::move(p);
  r.q_bar = std::move(q);
  return r;
}

void Rearrangement::restore(std::vector<Real>& x, std::vector<Real>& p, std::vector<Real>& q) const {
  const std::size_t n = perm.size();
  x.assign(n, 0);
  p.assign(n, 0);
  q.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    x[perm[i]] = sorted[i];
    p[perm[i]] = p_bar[i];
    q[perm[i]] = q_bar[i];
  }
}

Rearrangement increasing_rearrangement(std::span<const Real> x, const WeightVector& p, const WeightVector& q) {
  if (p.size() != x.size() || q.size() != x.size()) throw InputError("length mismatch in rearrangement");
  Rearrangement r;
  r.perm.resize(x.size());
  std::iota(r.perm.begin(), r.perm.end(), std::size_t{0});
  std::stable_sort(r.perm.begin(), r.perm.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  r.sorted.reserve(x.size());
  r.p_bar.reserve(x.size());
  r.q_bar.reserve(x.size());
  for (auto i : r.perm) {
    r.sorted.push_back(x[i]);
    r.p_bar.push_back(p[i]);
    r.q_bar.push_back(q[i]);
  }
  return r;
}

Rearrangement increasing_rearrangement(const Instance& inst) {
  return increasing_rearrangement(inst.x(), inst.p(), inst.q());
}

Real barycenter(std::span<const Real> x, std::span<const Real> w) {
  if (x.size() != w.size()) throw InputError("barycenter: length mismatch");
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
  return s;
}

Real jensen_functional(const FunctionSpec& f, std::span<const Real> x, std::span<const Real> w) {
  const Real center = barycenter(x, w);
  if (!f.domain().contains(center)) {
    throw DomainError("barycenter " + format_real(center) + " lies outside the domain " + f.domain().describe());
  }
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] != 0) s += w[i] * f(x[i]);
  }
  return s - f(center);
}

Real midpoint_gap(const FunctionSpec& f, Real a, Real b) {
  return (f(a) + f(b)) / 2 - f((a + b) / 2);
}

std::string_view to_string(TheoremMode mode) {
  switch (mode) {
    case TheoremMode::PointwiseRatio: return "pointwise-ratio";
    case TheoremMode::PrefixRatio: return "prefix-ratio";
    case TheoremMode::Endpoint: return "endpoint";
    case TheoremMode::UniformReference: return "uniform-reference";
    case TheoremMode::Modulus: return "modulus";
    case TheoremMode::RatioModulus: return "ratio-modulus";
  }
  return "?";
}

namespace {

void check_positive_q(const Instance& inst, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!(inst.q()[i] > 0)) out.push_back("q_i > 0 fails at i=" + std::to_string(i + 1));
  }
}

void check_nonneg_p(const Instance& inst, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (inst.p()[i] < 0) out.push_back("p_i >= 0 fails at i=" + std::to_string(i + 1));
  }
}

void check_p_prefix(const Rearrangement& r, std::vector<std::string>& out) {
  Real s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s += r.p_bar[i];
    if (s < -kPrefixTolerance || s > 1 + kPrefixTolerance) {
      out.push_back("prefix sum " + format_real(s) + " ∉ [0,1] at sorted index " + std::to_string(i + 1));
    }
  }
}

void check_q_prefix(const Rearrangement& r, std::vector<std::string>& out) {
  Real s = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    s += r.q_bar[i];
    if (!(s > 0 && s < 1)) {
      out.push_back("q prefix sum " + format_real(s) + " ∉ (0,1) at sorted index " + std::to_string(i + 1));
    }
  }
}

void check_modulus(const Instance& inst, std::vector<std::string>& out) {
  if (!inst.phi()) out.push_back("a modulus phi is required");
}

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst, TheoremMode mode) {
  std::vector<std::string> out;
  switch (mode) {
    case TheoremMode::PointwiseRatio:
      check_positive_q(inst, out);
      check_nonneg_p(inst, out);
      break;
    case TheoremMode::PrefixRatio: {
      const auto r = increasing_rearrangement(inst);
      check_p_prefix(r, out);
      check_q_prefix(r, out);
      break;
    }
    case TheoremMode::Endpoint:
      check_p_prefix(increasing_rearrangement(inst), out);
      break;
    case TheoremMode::UniformReference: {
      const auto r = increasing_rearrangement(inst.x(), inst.p(), WeightVector::uniform(inst.size()));
      check_p_prefix(r, out);
      break;
    }
    case TheoremMode::Modulus:
      check_nonneg_p(inst, out);
      check_modulus(inst, out);
      break;
    case TheoremMode::RatioModulus:
      check_positive_q(inst, out);
      check_nonneg_p(inst, out);
      check_modulus(inst, out);
      break;
  }
  return out;
}

void require_admissible(const Instance& inst, TheoremMode mode) {
  const auto violations = validate_instance(inst, mode);
  if (violations.empty()) return;
  std::ostringstream os;
  os << "instance is inadmissible (" << to_string(mode) << "): ";
  for (std::size_t i = 0; i < violations.size(); ++i) os << (i ? "; " : "") << violations[i];
  throw PreconditionError(os.str());
}

}  // namespace jensen
