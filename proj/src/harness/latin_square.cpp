#include "statz/harness/latin_square.hpp"

#include <algorithm>
#include <set>

#include "statz/error.hpp"

namespace statz::harness {

Design latin_square(int k) {
  if (k < 2) throw InvalidInput("a Latin square needs at least two tools");
  // First row 0, 1, k-1, 2, k-2, ...; the others are cyclic shifts.
  std::vector<int> first{0};
  for (int lo = 1, hi = k - 1; static_cast<int>(first.size()) < k;) {
    first.push_back(lo++);
    if (static_cast<int>(first.size()) < k) first.push_back(hi--);
  }
  Design d;
  for (int r = 0; r < k; ++r) {
    std::vector<int> row;
    for (int v : first) row.push_back((v + r) % k + 1);
    d.push_back(std::move(row));
  }
  if (k % 2 == 1) {
    for (int r = 0; r < k; ++r) d.emplace_back(d[static_cast<std::size_t>(r)].rbegin(), d[static_cast<std::size_t>(r)].rend());
  }
  return d;
}

DesignAudit audit(const Design& d, int k) {
  DesignAudit a;
  const auto n = static_cast<std::size_t>(k);
  a.rows_are_permutations = !d.empty();
  for (const auto& row : d) {
    std::set<int> seen(row.begin(), row.end());
    if (row.size() != n || seen.size() != n || *seen.begin() != 1 || *seen.rbegin() != k) a.rows_are_permutations = false;
  }
  if (!a.rows_are_permutations) return a;

  std::vector<std::vector<int>> position(n, std::vector<int>(n, 0));
  std::vector<std::vector<int>> follows(n, std::vector<int>(n, 0));
  for (const auto& row : d) {
    for (std::size_t p = 0; p < n; ++p) ++position[static_cast<std::size_t>(row[p] - 1)][p];
    for (std::size_t p = 0; p + 1 < n; ++p) {
      ++follows[static_cast<std::size_t>(row[p] - 1)][static_cast<std::size_t>(row[p + 1] - 1)];
    }
  }
  a.position_count = position[0][0];
  a.positions_balanced = true;
  for (const auto& v : position) {
    for (int c : v) a.positions_balanced = a.positions_balanced && c == a.position_count;
  }
  a.adjacency_count = follows[0][1];
  a.adjacency_balanced = a.adjacency_count > 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) a.adjacency_balanced = a.adjacency_balanced && follows[i][j] == a.adjacency_count;
    }
  }
  return a;
}

void to_json(nlohmann::json& j, const DesignAudit& a) {
  j = {{"rows_are_permutations", a.rows_are_permutations},
       {"positions_balanced", a.positions_balanced},
       {"adjacency_balanced", a.adjacency_balanced},
       {"position_count", a.position_count},
       {"adjacency_count", a.adjacency_count},
       {"ok", a.ok()}};
}

}  // namespace statz::harness
