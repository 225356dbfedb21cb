#include "jensen/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jensen {

WeightVector::WeightVector(std::vector<Real> entries) : w_(std::move(entries)) {
  if (w_.empty()) throw InputError("weight vector is empty");
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i])) {
      throw InputError("weight entry " + std::to_string(i + 1) + " is not finite");
    }
  }
  const Real sum = std::accumulate(w_.begin(), w_.end(), Real{0});
  if (std::fabs(sum - 1) > kSumTolerance) {
    throw InputError("weights sum to " + format_real(sum) + ", expected 1");
  }
  for (auto& w : w_) w /= sum;
}

WeightVector WeightVector::uniform(std::size_t n) {
  if (n == 0) throw InputError("weight vector is empty");
  return WeightVector(std::vector<Real>(n, Real{1} / static_cast<Real>(n)), Trusted{});
}

WeightVector WeightVector::point_mass(std::size_t n, std::size_t i) {
  if (i >= n) throw InputError("point mass index out of range");
  std::vector<Real> w(n, 0);
  w[i] = 1;
  return WeightVector(std::move(w), Trusted{});
}

bool WeightVector::nonnegative() const {
  return std::all_of(w_.begin(), w_.end(), [](Real w) { return w >= 0; });
}

bool WeightVector::strictly_positive() const {
  return std::all_of(w_.begin(), w_.end(), [](Real w) { return w > 0; });
}

Real WeightVector::min() const { return *std::min_element(w_.begin(), w_.end()); }
Real WeightVector::max() const { return *std::max_element(w_.begin(), w_.end()); }

WeightVector WeightVector::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != w_.size()) throw InputError("permutation length does not match weights");
  std::vector<Real> out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = w_.at(perm[i]);
  return WeightVector(std::move(out), Trusted{});
}

}  // namespace jensen
