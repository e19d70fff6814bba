#include "statz/harness/analysis.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "statz/error.hpp"
#include "statz/stats/repeated.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::harness {

AnalysisReport analyze(const stats::Matrix& m, double alpha) {
  AnalysisReport r;
  r.alpha = alpha;
  r.omnibus = stats::friedman(m, alpha);
  r.kendalls_w = stats::kendalls_w(m);
  r.nemenyi = stats::nemenyi(m);
  r.tools = r.nemenyi.labels;
  r.mean_ranks = stats::mean_ranks(m);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const auto col = m.column(c);
    r.means.push_back(std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size()));
  }
  const std::size_t k = m.cols();
  const std::size_t pairs = k * (k - 1) / 2;
  r.adjusted = r.nemenyi;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double p = r.nemenyi.at(i, j);
      const double adj = stats::p_adjust_bonferroni(std::span<const double>(&p, 1), pairs).front();
      r.adjusted.p_values[i][j] = r.adjusted.p_values[j][i] = adj;
      r.rows.push_back({r.tools[i] + " vs " + r.tools[j], r.tools[i], r.tools[j], p, adj, adj < alpha});
    }
  }
  return r;
}

void to_json(nlohmann::json& j, const AnalysisReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : r.rows) {
    rows.push_back({{"comparison", p.comparison}, {"a", p.a}, {"b", p.b}, {"p_nemenyi", p.p_nemenyi},
                    {"p_adjusted", p.p_adjusted}, {"reject", p.reject}});
  }
  j = {{"alpha", r.alpha},
       {"tools", r.tools},
       {"means", r.means},
       {"mean_ranks", r.mean_ranks},
       {"omnibus", r.omnibus},
       {"kendalls_w", r.kendalls_w},
       {"nemenyi", r.nemenyi},
       {"adjusted", r.adjusted},
       {"pairwise", rows}};
}

std::string report_csv(const AnalysisReport& r) {
  std::vector<std::string> cmp, a, b;
  std::vector<double> p, adj;
  std::vector<std::string> reject;
  for (const auto& row : r.rows) {
    cmp.push_back(row.comparison);
    a.push_back(row.a);
    b.push_back(row.b);
    p.push_back(row.p_nemenyi);
    adj.push_back(row.p_adjusted);
    reject.push_back(row.reject ? "true" : "false");
  }
  return tabular::export_csv(tabular::Dataset({tabular::Column::text("comparison", cmp), tabular::Column::text("a", a),
                                               tabular::Column::text("b", b), tabular::Column::numeric("p_nemenyi", p),
                                               tabular::Column::numeric("p_adjusted", adj),
                                               tabular::Column::text("reject", reject)}));
}

stats::Matrix synthesize_accuracy(const SynthParams& p) {
  if (p.tools.size() != p.means.size() || p.tools.size() < 2) {
    throw InvalidInput("need one mean per tool and at least two tools");
  }
  if (p.participants < 2 || p.tasks < 1) throw InvalidInput("need at least two participants and one task");
  const std::size_t cells = p.participants * p.tasks;
  std::vector<std::vector<double>> columns;
  std::mt19937_64 rng(p.seed);
  for (std::size_t t = 0; t < p.tools.size(); ++t) {
    if (!(p.means[t] >= 0.0 && p.means[t] <= 1.0)) throw InvalidInput("mean accuracy must lie in [0, 1]");
    const auto correct = static_cast<std::size_t>(std::llround(p.means[t] * static_cast<double>(cells)));
    std::vector<int> outcome(cells, 0);
    std::fill(outcome.begin(), outcome.begin() + static_cast<std::ptrdiff_t>(correct), 1);
    // Fisher-Yates with an explicit bounded draw, so every platform agrees.
    for (std::size_t i = cells - 1; i > 0; --i) {
      const std::uint64_t bound = i + 1;
      const std::uint64_t threshold = (0 - bound) % bound;
      std::uint64_t x = rng();
      while (x < threshold) x = rng();
      std::swap(outcome[i], outcome[static_cast<std::size_t>(x % bound)]);
    }
    std::vector<double> acc(p.participants, 0.0);
    for (std::size_t c = 0; c < cells; ++c) acc[c / p.tasks] += outcome[c];
    for (auto& v : acc) v /= static_cast<double>(p.tasks);
    columns.push_back(std::move(acc));
  }
  return stats::Matrix::from_columns(columns, p.tools);
}

}  // namespace statz::harness
