#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace statz::stats {

/// 1-based average ranks ("fractional ranking"); tied values share the mean
/// of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

/// Sizes of the tie groups (groups of size 1 included).
std::vector<std::size_t> tie_sizes(std::span<const double> x);

/// Sum over tie groups of t^3 - t.
double tie_term(std::span<const double> x);

}  // namespace statz::stats
