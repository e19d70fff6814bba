#include "statz/stats/ranks.hpp"

#include <algorithm>
#include <numeric>

namespace statz::stats {

namespace {

std::vector<std::size_t> sorted_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  return order;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
  auto order = sorted_order(x);
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share rank (i + j + 2) / 2.
    const double rank = 0.5 * static_cast<double>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::size_t> tie_sizes(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> sizes;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    sizes.push_back(j - i + 1);
    i = j + 1;
  }
  return sizes;
}

double tie_term(std::span<const double> x) {
  double sum = 0.0;
  for (auto t : tie_sizes(x)) {
    const double d = static_cast<double>(t);
    sum += d * d * d - d;
  }
  return sum;
}

}  // namespace statz::stats
