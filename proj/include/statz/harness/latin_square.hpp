#pragma once

#include <vector>

#include <json.hpp>

namespace statz::harness {

using Design = std::vector<std::vector<int>>;  // rows of 1-based tool numbers

/// Williams design: k rows for even k; for odd k the square followed by its
/// mirrored rows (2k rows). Throws InvalidInput for k < 2.
Design latin_square(int k);

struct DesignAudit {
  bool rows_are_permutations = false;
  /// Every tool appears equally often in every position.
  bool positions_balanced = false;
  /// Every ordered pair (a, b), a != b, occurs equally often as neighbours.
  bool adjacency_balanced = false;
  int position_count = 0;   // occurrences of each tool per position
  int adjacency_count = 0;  // occurrences of each ordered pair

  bool ok() const { return rows_are_permutations && positions_balanced && adjacency_balanced; }
};

DesignAudit audit(const Design& d, int k);

void to_json(nlohmann::json& j, const DesignAudit& a);

}  // namespace statz::harness
