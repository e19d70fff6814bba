#pragma once

#include <cmath>
#include <span>
#include <string>

#include "statz/error.hpp"

namespace statz::stats::detail {

inline void require_finite(std::span<const double> x, const std::string& context) {
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidInput(context + ": input contains a non-finite value");
}

inline void require_size(std::span<const double> x, std::size_t minimum, const std::string& context) {
  if (x.size() < minimum) throw TooFewObservations(minimum, x.size(), context);
}

}  // namespace statz::stats::detail
