#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jensen/types.hpp"

namespace jensen {

/// Normalized weight tuple. Entries may be signed; construction checks
/// |sum - 1| <= kSumTolerance and divides by the sum so that later
/// identities hold to rounding.
class WeightVector {
 public:
  static constexpr Real kSumTolerance = 1e-9L;

  explicit WeightVector(std::vector<Real> entries);
  WeightVector(std::initializer_list<Real> entries) : WeightVector(std::vector<Real>(entries)) {}

  static WeightVector uniform(std::size_t n);
  /// Point mass at index i.
  static WeightVector point_mass(std::size_t n, std::size_t i);

  [[nodiscard]] std::size_t size() const { return w_.size(); }
  [[nodiscard]] Real operator[](std::size_t i) const { return w_[i]; }
  [[nodiscard]] std::span<const Real> values() const { return w_; }
  [[nodiscard]] auto begin() const { return w_.begin(); }
  [[nodiscard]] auto end() const { return w_.end(); }

  [[nodiscard]] bool nonnegative() const;
  [[nodiscard]] bool strictly_positive() const;
  [[nodiscard]] Real min() const;
  [[nodiscard]] Real max() const;

  /// Entries reordered as out[i] = w[perm[i]].
  [[nodiscard]] WeightVector permuted(std::span<const std::size_t> perm) const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  struct Trusted {};
  WeightVector(std::vector<Real> entries, Trusted) : w_(std::move(entries)) {}

  std::vector<Real> w_;
};

}  // namespace jensen
