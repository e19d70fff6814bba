#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace statz::advisor {

struct MethodEntry {
  std::string id;
  std::string name;
  std::string category;
  std::string assumptions;
  std::string explanation;
  /// An operation name ("stats.friedman") or "compose:" followed by
  /// '+'-separated operation names.
  std::string kernel_binding;
};

struct MethodCatalog {
  int version = 0;
  std::vector<MethodEntry> entries;

  /// nullptr when absent.
  const MethodEntry* find(std::string_view id) const;
};

inline constexpr std::size_t kCatalogSize = 42;

/// Operation names a kernel binding may refer to.
const std::set<std::string, std::less<>>& kernel_operations();

/// Parses and validates a catalog document: exactly kCatalogSize entries,
/// unique non-empty ids, every binding resolvable. Throws SchemaError.
MethodCatalog parse_catalog(std::string_view json_text);

/// The catalog bundled with the build, validated on first use.
const MethodCatalog& catalog();

/// Assumptions and when-to-use text. Throws UnknownMethod.
std::string explain(std::string_view method_id);

void to_json(nlohmann::json& j, const MethodEntry& e);
void to_json(nlohmann::json& j, const MethodCatalog& c);

}  // namespace statz::advisor
