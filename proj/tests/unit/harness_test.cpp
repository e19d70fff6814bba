#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "statz/error.hpp"
#include "statz/harness/analysis.hpp"
#include "statz/harness/grading.hpp"
#include "statz/harness/latin_square.hpp"
#include "statz/harness/metrics.hpp"
#include "statz/preprocess/pca.hpp"
#include "statz/session/session.hpp"
#include "statz/stats/repeated.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::harness {
namespace {

using V = std::vector<std::string>;

TEST(GradeTest, PerfectAndHalf) {
  const V key{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};
  EXPECT_EQ(grade(key, key).accuracy, 1.0);
  V half = key;
  for (std::size_t i = 0; i < 5; ++i) half[i] = "x";
  const auto g = grade(half, key);
  EXPECT_EQ(g.accuracy, 0.5);
  EXPECT_EQ(g.per_task, (std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}));
}

TEST(GradeTest, NumericTolerance) {
  EXPECT_TRUE(answers_match("5.8433333", "5.843333333333334"));
  EXPECT_TRUE(answers_match("150.0001", "150", 1e-6));
  EXPECT_FALSE(answers_match("150.001", "150", 1e-6));
  // Small values use an absolute floor of the tolerance.
  EXPECT_TRUE(answers_match("0", "1e-7", 1e-6));
  EXPECT_FALSE(answers_match("5.9", "5.8"));
}

TEST(GradeTest, TextIsCaseAndWhitespaceInsensitive) {
  EXPECT_TRUE(answers_match("  Mann  Whitney ", "mann whitney"));
  EXPECT_FALSE(answers_match("mannwhitney", "mann whitney"));
  EXPECT_FALSE(answers_match("", ""));
  EXPECT_TRUE(answers_match(" 42\t", "42"));
}

TEST(GradeTest, LengthMismatchIsInvalid) {
  EXPECT_THROW(grade(V{"1"}, V{"1", "2"}), InvalidInput);
  EXPECT_THROW(grade(V{}, V{}), InvalidInput);
}

TEST(GradeTest, TaskOrderDoesNotMatter) {
  std::mt19937_64 rng(5);
  const V key{"a", "1.5", "no", "7", "3.25", "x y"};
  const V sub{"A", "1.5000001", "yes", "7", "3", "x  y"};
  const auto base = grade(sub, key).accuracy;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> p(key.size());
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    V k2, s2;
    for (auto i : p) {
      k2.push_back(key[i]);
      s2.push_back(sub[i]);
    }
    EXPECT_EQ(grade(s2, k2).accuracy, base);
  }
}

TEST(GradeTest, LongFormatSubmissions) {
  const auto key = read_answer_key(tabular::import_csv("task,answer\n1,150\n2,no\n"));
  const auto subs = tabular::import_csv(
      "participant,tool,task,answer\np1,StatZ,2,No\np1,StatZ,1,150\np1,JMP,1,149\np1,JMP,2,no\n");
  const auto g = grade_submissions(subs, key);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].tool, "StatZ");
  EXPECT_EQ(g[0].accuracy, 1.0);
  EXPECT_EQ(g[1].accuracy, 0.5);
  const auto missing = tabular::import_csv("participant,tool,task,answer\np1,StatZ,1,150\n");
  EXPECT_THROW(grade_submissions(missing, key), InvalidInput);
  const auto unknown = tabular::import_csv("participant,tool,task,answer\np1,StatZ,3,150\n");
  EXPECT_THROW(grade_submissions(unknown, key), InvalidInput);
}

// Answers read off a scripted session's artifacts earn full marks.
TEST(GradeTest, IrisKeyMatchesASessionRun) {
  const auto key = iris_answer_key();
  ASSERT_EQ(key.tasks.size(), 10u);
  using nlohmann::json;
  session::Session s("grading");
  const auto up = s.upload_dataset(testing::iris_csv(), "iris.csv");
  auto content = [&](const session::Exchange& e) { return s.artifact(*e.artifact_id).content; };
  V answers;
  answers.push_back(std::to_string(s.transcript()[up.agent_turn].payload["summary"]["rows"].get<int>()));
  answers.push_back(tabular::format_number(json::parse(content(s.post_message("describe sepal_length")))["summaries"][0]["mean"]));
  s.post_message("compare sepal_length to 5.8");
  answers.push_back(tabular::format_number(json::parse(content(s.post_message(json{{"choice", "normal"}})))["p_value"]));
  answers.push_back(json::parse(content(s.post_message("is petal_length normal")))["reject_null"] ? "no" : "yes");
  s.post_message("correlate sepal_length and petal_length");
  answers.push_back(
      tabular::format_number(json::parse(content(s.post_message(json{{"choice", "unknown"}})))["coefficient"]));
  const auto imputed = tabular::import_csv(content(s.post_message("impute")));
  std::size_t gaps = 0;
  for (const auto& c : imputed.columns()) gaps += c.missing_count();
  answers.push_back(std::to_string(gaps));
  const auto kept = tabular::import_csv(content(s.post_message("remove outliers")));
  answers.push_back(std::to_string(kept.rows()));
  answers.push_back(tabular::format_number(preprocess::pca(kept, {}, 1).explained_variance_ratio[0]));
  s.post_message("scale sepal_width");
  const auto scaled = tabular::import_csv(content(s.post_message(json{{"choice", "min_max"}})));
  const auto sw = scaled.column("sepal_width").present();
  answers.push_back(tabular::format_number(std::accumulate(sw.begin(), sw.end(), 0.0) / static_cast<double>(sw.size())));
  answers.push_back(std::to_string(tabular::import_csv(content(s.post_message("export"))).rows()));
  const auto g = grade(answers, key.answers);
  EXPECT_EQ(g.accuracy, 1.0) << ::testing::PrintToString(g.per_task);
}

TEST(AggregateTest, PixelsToMeters) {
  // 187283 * 0.0254 / 96
  EXPECT_NEAR(pixels_to_meters(187283), 49.5519604166667, 1e-9);
  EXPECT_NEAR(pixels_to_meters(187283, 96), 49.552, 1e-3);
  EXPECT_DOUBLE_EQ(pixels_to_meters(96, 96), 0.0254);
}

TEST(AggregateTest, SingleLogAndTwoTools) {
  const std::vector<InteractionLog> one{{"p1", "StatZ", 954, 182, 40, 187283}};
  const auto r = aggregate(one);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].duration_s, 954);
  EXPECT_EQ(r[0].keystrokes, 182);
  EXPECT_EQ(r[0].mouse_clicks, 40);
  EXPECT_EQ(r[0].mouse_distance_px, 187283);
  const std::vector<InteractionLog> two{{"p1", "StatZ", 900, 180, 40, 1000},
                                        {"p2", "StatZ", 1000, 190, 50, 3000},
                                        {"p1", "SAS", 1200, 400, 60, 2000},
                                        {"p1", "SAS", 100, 17, 0, 500}};
  const auto t = aggregate(two, 100);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].tool, "StatZ");
  EXPECT_EQ(t[0].participants, 2u);
  EXPECT_EQ(t[0].duration_s, 950);
  EXPECT_EQ(t[1].participants, 1u);
  EXPECT_EQ(t[1].duration_s, 1300);  // one participant's logs are summed
  EXPECT_DOUBLE_EQ(t[1].mouse_distance_m, 2500 * 0.0254 / 100);
}

TEST(AggregateTest, Errors) {
  EXPECT_THROW(aggregate(std::vector<InteractionLog>{}), InvalidInput);
  const std::vector<InteractionLog> neg{{"p", "t", -1, 0, 0, 0}};
  EXPECT_THROW(aggregate(neg), InvalidInput);
  const std::vector<InteractionLog> ok{{"p", "t", 1, 0, 0, 0}};
  EXPECT_THROW(aggregate(ok, 0), InvalidInput);
}

TEST(AggregateTest, ReadsCsv) {
  const auto logs = read_interaction_logs(tabular::import_csv(
      "participant,tool,duration_s,keystrokes,mouse_clicks,mouse_distance_px\np1,StatZ,954,182,31,187283\n"));
  ASSERT_EQ(logs.size(), 1u);
  EXPECT_EQ(logs[0].tool, "StatZ");
  EXPECT_EQ(logs[0].mouse_distance_px, 187283);
}

stats::Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::uniform_int_distribution<int> score(0, 10);
  std::vector<std::vector<double>> rows(n, std::vector<double>(k));
  for (auto& r : rows) {
    for (auto& v : r) v = score(rng) / 10.0;
  }
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < k; ++j) labels.push_back("T" + std::to_string(j + 1));
  return stats::Matrix::from_rows(rows, labels);
}

TEST(AnalyzeTest, IdenticalColumnsRejectNothing) {
  std::vector<double> col{0.1, 0.5, 0.9, 0.3, 0.7};
  const auto m = stats::Matrix::from_columns({col, col, col}, {"A", "B", "C"});
  const auto r = analyze(m);
  EXPECT_EQ(r.omnibus.p_value, 1.0);
  EXPECT_FALSE(r.omnibus.reject_null);
  for (const auto& row : r.rows) EXPECT_FALSE(row.reject);
}

TEST(AnalyzeTest, CompositionAddsNothing) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto k = 2 + static_cast<std::size_t>(trial % 7);
    const auto m = random_matrix(rng, 8 + static_cast<std::size_t>(trial), k);
    const auto r = analyze(m, 0.05);
    EXPECT_EQ(r.omnibus, stats::friedman(m, 0.05));
    EXPECT_EQ(r.kendalls_w, stats::kendalls_w(m));
    const auto nem = stats::nemenyi(m);
    EXPECT_EQ(r.nemenyi.p_values, nem.p_values);
    ASSERT_EQ(r.rows.size(), k * (k - 1) / 2);
    std::size_t row = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j, ++row) {
        const double p = nem.at(i, j);
        const auto adj = stats::p_adjust_bonferroni(std::vector<double>{p}, k * (k - 1) / 2)[0];
        EXPECT_EQ(r.rows[row].p_nemenyi, p);
        EXPECT_EQ(r.rows[row].p_adjusted, adj);
        EXPECT_EQ(r.rows[row].reject, adj < 0.05);
        EXPECT_EQ(r.adjusted.at(j, i), adj);
      }
    }
  }
}

TEST(AnalyzeTest, CsvHasOneLinePerPair) {
  std::mt19937_64 rng(3);
  const auto r = analyze(random_matrix(rng, 12, 5));
  const auto d = tabular::import_csv(report_csv(r));
  EXPECT_EQ(d.rows(), 10u);
  EXPECT_EQ(d.column("comparison").label(0), "T1 vs T2");
}

TEST(SynthTest, MeansTrackThePublishedValues) {
  const auto m = synthesize_accuracy();
  ASSERT_EQ(m.rows(), 51u);
  ASSERT_EQ(m.cols(), 5u);
  for (std::size_t c = 0; c < 5; ++c) {
    const auto col = m.column(c);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / 51.0;
    EXPECT_NEAR(mean, kStudyAccuracy[c], 0.5 / 510 + 1e-12);
    for (double v : col) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  SynthParams p;
  EXPECT_EQ(synthesize_accuracy(p).column(0), m.column(0));  // seeded
  p.seed = 1;
  EXPECT_NE(synthesize_accuracy(p).column(0), m.column(0));
}

TEST(SynthTest, DominantToolBeatsEveryOther) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SynthParams p;
    p.seed = seed;
    const auto r = analyze(synthesize_accuracy(p));
    EXPECT_TRUE(r.omnibus.reject_null);
    EXPECT_EQ(std::max_element(r.mean_ranks.begin(), r.mean_ranks.end()) - r.mean_ranks.begin(), 0);
    for (const auto& row : r.rows) {
      if (row.a == "StatZ") {
        EXPECT_TRUE(row.reject) << row.comparison << " seed " << seed;
      }
    }
  }
}

TEST(LatinSquareTest, SmallCases) {
  EXPECT_EQ(latin_square(2), (Design{{1, 2}, {2, 1}}));
  EXPECT_THROW(latin_square(1), InvalidInput);
  const auto four = latin_square(4);
  ASSERT_EQ(four.size(), 4u);
  const auto a4 = audit(four, 4);
  EXPECT_TRUE(a4.ok());
  EXPECT_EQ(a4.adjacency_count, 1);
  const auto five = latin_square(5);
  ASSERT_EQ(five.size(), 10u);
  const auto a5 = audit(five, 5);
  EXPECT_TRUE(a5.ok());
  EXPECT_EQ(a5.position_count, 2);
}

TEST(LatinSquareTest, AuditsPassForTwoToEight) {
  for (int k = 2; k <= 8; ++k) {
    const auto d = latin_square(k);
    EXPECT_EQ(d.size(), static_cast<std::size_t>(k % 2 ? 2 * k : k));
    EXPECT_TRUE(audit(d, k).ok()) << k;
  }
}

TEST(LatinSquareTest, AuditCatchesAPlainCyclicSquare) {
  // Cyclic squares are Latin but every tool is always followed by the same one.
  const Design cyclic{{1, 2, 3, 4}, {2, 3, 4, 1}, {3, 4, 1, 2}, {4, 1, 2, 3}};
  const auto a = audit(cyclic, 4);
  EXPECT_TRUE(a.rows_are_permutations);
  EXPECT_TRUE(a.positions_balanced);
  EXPECT_FALSE(a.adjacency_balanced);
  EXPECT_FALSE(audit(Design{{1, 1}, {2, 2}}, 2).ok());
}

TEST(NielsenTest, Totals) {
  std::vector<NielsenRating> all5;
  for (int p = 0; p < 51; ++p) all5.push_back({"p" + std::to_string(p), "StatZ", "feedback", 5});
  EXPECT_EQ(nielsen_aggregate(all5).total("StatZ", "feedback"), 255);

  const std::vector<NielsenRating> one{{"p", "StatZ", "feedback", 4}, {"p", "SPSS", "feedback", 2},
                                       {"p", "StatZ", "control", 3}, {"p", "SPSS", "control", 5}};
  const auto t = nielsen_aggregate(one);
  EXPECT_EQ(t.total("StatZ", "feedback"), 4);
  EXPECT_EQ(t.total("SPSS", "control"), 5);
  EXPECT_EQ(t.ranking[0], (V{"StatZ", "SPSS"}));
  EXPECT_EQ(t.ranking[1], (V{"SPSS", "StatZ"}));

  const std::vector<NielsenRating> bad{{"p", "StatZ", "feedback", 6}};
  EXPECT_THROW(nielsen_aggregate(bad), InvalidInput);
  const std::vector<NielsenRating> zero{{"p", "StatZ", "feedback", 0}};
  EXPECT_THROW(nielsen_aggregate(zero), InvalidInput);
}

TEST(NielsenTest, CsvRoundTrip) {
  const auto r = read_nielsen_ratings(tabular::import_csv(
      "participant,software,heuristic,score\np1,StatZ,feedback,5\np2,StatZ,feedback,4\np1,SAS,feedback,2\n"));
  const auto t = nielsen_aggregate(r);
  const auto d = tabular::import_csv(nielsen_csv(t));
  EXPECT_EQ(d.column("StatZ").number(0), 9);
  EXPECT_EQ(d.column("SAS").number(0), 2);
  EXPECT_THROW(read_nielsen_ratings(tabular::import_csv("participant,software,heuristic,score\np,S,h,4.5\n")),
               InvalidInput);
}

}  // namespace
}  // namespace statz::harness
