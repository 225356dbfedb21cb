#include "jensen/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace jensen {

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(value));
  return buf;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "verified";
    case Verdict::Violated: return "violated";
    case Verdict::Inadmissible: return "inadmissible";
  }
  return "?";
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    switch (v) {
      case Verdict::Verified: return 0;
      case Verdict::Inadmissible: return 1;
      case Verdict::Violated: return 2;
    }
    return 2;
  };
  return rank(a) >= rank(b) ? a : b;
}

namespace {

const Term& find_term(const std::vector<Term>& terms, std::string_view name) {
  auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& t) { return t.name == name; });
  if (it == terms.end()) throw std::out_of_range("no term named '" + std::string(name) + "'");
  return *it;
}

}  // namespace

BoundReport BoundReport::make(std::string tag, std::vector<Term> chain, const Tolerance& tol) {
  BoundReport r;
  r.tag = std::move(tag);
  r.chain = std::move(chain);
  r.tolerance = tol;
  for (const auto& t : r.chain) r.scale = std::max(r.scale, std::fabs(t.value));
  bool ok = true;
  for (std::size_t i = 0; i + 1 < r.chain.size(); ++i) {
    const Real s = r.chain[i].value - r.chain[i + 1].value;
    r.slacks.push_back(s);
    ok = ok && tol.accepts(s, r.scale);
  }
  r.verdict = ok ? Verdict::Verified : Verdict::Violated;
  return r;
}

Real BoundReport::min_slack() const {
  return slacks.empty() ? Real{0} : *std::min_element(slacks.begin(), slacks.end());
}

const Term& BoundReport::term(std::string_view name) const { return find_term(chain, name); }

BoundReport BoundReport::scaled(Real alpha) const {
  auto chain_copy = chain;
  for (auto& t : chain_copy) t.value *= alpha;
  auto out = make(tag, std::move(chain_copy), tolerance);
  out.details = details;
  for (auto& d : out.details) d.value *= alpha;
  out.notes = notes;
  return out;
}

RefinementTerms RefinementTerms::make(std::string tag, Term gap, std::vector<Term> terms, const Tolerance& tol) {
  RefinementTerms r;
  r.tag = std::move(tag);
  r.gap = std::move(gap);
  r.terms = std::move(terms);
  r.tolerance = tol;
  r.scale = std::fabs(r.gap.value);
  for (const auto& t : r.terms) r.scale = std::max(r.scale, std::fabs(t.value));
  r.slack = r.gap.value - r.total();
  r.verdict = tol.accepts(r.slack, r.scale) ? Verdict::Verified : Verdict::Violated;
  return r;
}

Real RefinementTerms::total() const {
  Real s = 0;
  for (const auto& t : terms) s += t.value;
  return s;
}

const Term& RefinementTerms::term(std::string_view name) const { return find_term(terms, name); }
const Term& RefinementTerms::detail(std::string_view name) const { return find_term(details, name); }

}  // namespace jensen
