#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "jensen/types.hpp"

namespace jensen {

enum class Verdict { Verified, Violated, Inadmissible };

[[nodiscard]] std::string_view to_string(Verdict v);
/// Violated dominates Inadmissible dominates Verified.
[[nodiscard]] Verdict worst(Verdict a, Verdict b);

struct Term {
  std::string name;
  Real value = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

/// A chain `chain[0] >= chain[1] >= ... >= chain[k]` with one slack per
/// link. `details` carries auxiliary values (ratios, comparison terms) that
/// are reported but not asserted.
struct BoundReport {
  std::string tag;
  std::vector<Term> chain;
  std::vector<Real> slacks;
  std::vector<Term> details;
  std::vector<std::string> notes;
  Real scale = 0;
  Tolerance tolerance;
  Verdict verdict = Verdict::Verified;

  /// Builds slacks, scale and verdict from the chain.
  static BoundReport make(std::string tag, std::vector<Term> chain, const Tolerance& tol);

  [[nodiscard]] Real min_slack() const;
  [[nodiscard]] const Term& term(std::string_view name) const;
  [[nodiscard]] bool verified() const { return verdict == Verdict::Verified; }
  /// Every term and detail multiplied by alpha > 0, slacks recomputed.
  [[nodiscard]] BoundReport scaled(Real alpha) const;
};

/// `gap >= sum(terms)`, with slack = gap - sum(terms).
struct RefinementTerms {
  std::string tag;
  Term gap;
  std::vector<Term> terms;
  std::vector<Term> details;
  std::vector<std::string> notes;
  Real slack = 0;
  Real scale = 0;
  Tolerance tolerance;
  Verdict verdict = Verdict::Verified;

  static RefinementTerms make(std::string tag, Term gap, std::vector<Term> terms, const Tolerance& tol);

  [[nodiscard]] Real total() const;
  [[nodiscard]] const Term& term(std::string_view name) const;
  [[nodiscard]] const Term& detail(std::string_view name) const;
  [[nodiscard]] bool verified() const { return verdict == Verdict::Verified; }
};

}  // namespace jensen
