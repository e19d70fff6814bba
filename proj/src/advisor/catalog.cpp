#include "statz/advisor/catalog.hpp"

#include <unordered_set>

#include "statz/error.hpp"

namespace statz::advisor {

// Generated from data/catalog.json at configure time.
extern const char* const kBundledCatalog;

const std::set<std::string, std::less<>>& kernel_operations() {
  static const std::set<std::string, std::less<>> ops{
      "tabular.import_csv",      "tabular.export_csv",
      "tabular.column",          "stats.describe",
      "stats.histogram",         "stats.scatter",
      "stats.qq",                "stats.t_test_one_sample",
      "stats.t_test_independent", "stats.t_test_paired",
      "stats.one_way_anova",     "stats.levene",
      "stats.shapiro_wilk",      "stats.mann_whitney",
      "stats.wilcoxon_signed",   "stats.kruskal_wallis",
      "stats.friedman",          "stats.nemenyi",
      "stats.p_adjust_bonferroni", "stats.kendalls_w",
      "stats.correlation",       "stats.fleiss_kappa",
      "preprocess.impute_mean",  "preprocess.scale",
      "preprocess.isolation_forest_scores", "preprocess.remove_outliers",
      "preprocess.pca",
  };
  return ops;
}

namespace {

bool binding_resolves(std::string_view binding) {
  const auto& ops = kernel_operations();
  constexpr std::string_view prefix = "compose:";
  if (!binding.starts_with(prefix)) return ops.contains(binding);
  binding.remove_prefix(prefix.size());
  if (binding.empty()) return false;
  while (!binding.empty()) {
    const auto plus = binding.find('+');
    const auto part = binding.substr(0, plus);
    if (!ops.contains(part)) return false;
    if (plus == std::string_view::npos) break;
    binding.remove_prefix(plus + 1);
    if (binding.empty()) return false;
  }
  return true;
}

}  // namespace

const MethodEntry* MethodCatalog::find(std::string_view id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

MethodCatalog parse_catalog(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("catalog is not valid JSON: ") + e.what());
  }
  MethodCatalog c;
  try {
    c.version = doc.at("version").get<int>();
    for (const auto& m : doc.at("methods")) {
      c.entries.push_back({m.at("id").get<std::string>(), m.at("name").get<std::string>(),
                           m.at("category").get<std::string>(), m.at("assumptions").get<std::string>(),
                           m.at("explanation").get<std::string>(), m.at("kernel_binding").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed catalog: ") + e.what());
  }
  if (c.entries.size() != kCatalogSize) {
    throw SchemaError("catalog must list exactly " + std::to_string(kCatalogSize) + " methods, found " +
                      std::to_string(c.entries.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& e : c.entries) {
    if (e.id.empty()) throw SchemaError("catalog entry with an empty id");
    if (!seen.insert(e.id).second) throw SchemaError("duplicate catalog id '" + e.id + "'");
    if (!binding_resolves(e.kernel_binding)) {
      throw SchemaError("catalog entry '" + e.id + "' has unresolved binding '" + e.kernel_binding + "'");
    }
  }
  return c;
}

const MethodCatalog& catalog() {
  static const MethodCatalog c = parse_catalog(kBundledCatalog);
  return c;
}

std::string explain(std::string_view method_id) {
  const auto* e = catalog().find(method_id);
  if (!e) throw UnknownMethod(std::string(method_id));
  return e->name + " (" + e->category + "). Assumptions: " + e->assumptions + " When to use: " + e->explanation;
}

void to_json(nlohmann::json& j, const MethodEntry& e) {
  j = {{"id", e.id},
       {"name", e.name},
       {"category", e.category},
       {"assumptions", e.assumptions},
       {"explanation", e.explanation},
       {"kernel_binding", e.kernel_binding}};
}

void to_json(nlohmann::json& j, const MethodCatalog& c) { j = {{"version", c.version}, {"methods", c.entries}}; }

}  // namespace statz::advisor
