#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "statz/stats/matrix.hpp"
#include "statz/stats/result.hpp"

namespace statz::harness {

/// One Table-3 style line.
struct PairwiseRow {
  std::string comparison;  // "A vs B"
  std::string a;
  std::string b;
  double p_nemenyi = 1.0;
  double p_adjusted = 1.0;
  bool reject = false;
};

struct AnalysisReport {
  double alpha = stats::kDefaultAlpha;
  std::vector<std::string> tools;
  std::vector<double> means;
  std::vector<double> mean_ranks;
  stats::TestResult omnibus;  // Friedman
  double kendalls_w = 0.0;
  /// Nemenyi p-values, then Bonferroni-adjusted with m = k (k - 1) / 2.
  stats::PosthocMatrix nemenyi;
  stats::PosthocMatrix adjusted;
  /// k (k - 1) / 2 rows, pairs (i, j) with i < j in column order.
  std::vector<PairwiseRow> rows;
};

/// Friedman, Kendall's W, Nemenyi and Bonferroni over an N participants x k
/// tools matrix; reject == (p_adjusted < alpha). Kernel errors propagate.
AnalysisReport analyze(const stats::Matrix& m, double alpha = stats::kDefaultAlpha);

void to_json(nlohmann::json& j, const AnalysisReport& r);
/// comparison,a,b,p_nemenyi,p_adjusted,reject
std::string report_csv(const AnalysisReport& r);

/// Published per-tool mean accuracies, in the order below.
inline const std::vector<std::string> kStudyTools{"StatZ", "JMP", "SAS", "SPSS", "Stata"};
inline const std::vector<double> kStudyAccuracy{0.8009, 0.3100, 0.2852, 0.2962, 0.4556};

struct SynthParams {
  std::size_t participants = 51;
  std::size_t tasks = 10;
  std::vector<std::string> tools = kStudyTools;
  std::vector<double> means = kStudyAccuracy;
  std::uint64_t seed = 20240626;
};

/// Participants x tools accuracy matrix. Each tool gets
/// round(mean * participants * tasks) correct task outcomes, spread over the
/// participant x task cells by a seeded shuffle; a cell of the matrix is the
/// participant's fraction of correct tasks.
stats::Matrix synthesize_accuracy(const SynthParams& p = {});

}  // namespace statz::harness
