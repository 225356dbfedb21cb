#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"

#include "jensen/instance.hpp"

#define CHECK_NEAR(actual, expected, tolerance)                                                  \
  do {                                                                                           \
    const long double jensen_a_ = (actual);                                                      \
    const long double jensen_e_ = (expected);                                                    \
    INFO(#actual, " = ", static_cast<double>(jensen_a_), ", expected ", static_cast<double>(jensen_e_)); \
    CHECK(std::fabs(jensen_a_ - jensen_e_) <= (tolerance));                                      \
  } while (0)

namespace jensen::testing {

inline Instance square_instance(std::vector<Real> x, WeightVector p, WeightVector q, Interval iv,
                                std::optional<ModulusSpec> phi = std::nullopt) {
  return Instance(std::move(x), std::move(p), std::move(q), FunctionSpec::square(), iv, phi);
}

inline const ModulusSpec kSquareModulus{1, 2};

}  // namespace jensen::testing
