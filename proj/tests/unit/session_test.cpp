#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "statz/error.hpp"
#include "statz/session/session.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::session {
namespace {

using nlohmann::json;

const json& reply(const Session& s, const Exchange& e) { return s.transcript().at(e.agent_turn).payload; }

Session with_iris() {
  Session s("t");
  s.upload_dataset(testing::iris_csv(), "iris.csv");
  return s;
}

std::string text_of(const Session& s, const Exchange& e) { return reply(s, e)["text"].get<std::string>(); }

TEST(SessionTest, FreshSessionHasOnlyTheGreeting) {
  Session s("fresh");
  ASSERT_EQ(s.transcript().size(), 1u);
  EXPECT_EQ(s.transcript()[0].author, Author::agent);
  EXPECT_FALSE(s.dataset().has_value());
  EXPECT_EQ(s.turn_index(), 0u);
  EXPECT_EQ(s.transcript()[0].payload["prompt"]["expects"], "file");
}

TEST(SessionTest, UploadSummarizesIris) {
  Session s("u");
  const auto e = s.upload_dataset(testing::iris_csv(), "iris.csv");
  EXPECT_EQ(e.user_turn, 1u);
  EXPECT_EQ(e.agent_turn, 2u);
  EXPECT_FALSE(e.artifact_id);
  const auto text = text_of(s, e);
  EXPECT_NE(text.find("150 rows"), std::string::npos);
  EXPECT_NE(text.find("5 columns"), std::string::npos);
  const auto& summary = reply(s, e)["summary"];
  EXPECT_EQ(summary["rows"], 150);
  EXPECT_EQ(summary["column_types"][4]["kind"], "categorical");
  const auto& prompt = reply(s, e)["prompt"];
  EXPECT_EQ(prompt["slot"], "task");
  EXPECT_EQ(prompt["choices"].size(), 12u);
}

TEST(SessionTest, RaggedCsvNamesTheRow) {
  Session s("r");
  const auto e = s.upload_dataset("a,b\n1,2\n3\n", "bad.csv");
  const auto& p = reply(s, e);
  EXPECT_EQ(p["error"]["code"], "parse_error");
  EXPECT_NE(p["text"].get<std::string>().find("row 2"), std::string::npos);
  EXPECT_NE(p["text"].get<std::string>().find("line 3"), std::string::npos);
  EXPECT_FALSE(s.dataset());
}

TEST(SessionTest, DescribeSepalLength) {
  auto s = with_iris();
  const auto e = s.post_message("describe sepal_length");
  ASSERT_TRUE(e.artifact_id);
  const auto& a = s.artifact(*e.artifact_id);
  EXPECT_EQ(a.kind, ArtifactKind::descriptive);
  const auto j = json::parse(a.content);
  EXPECT_NEAR(j["summaries"][0]["mean"].get<double>(), 5.843, 1e-3);
  EXPECT_EQ(j["summaries"][0]["n"], 150);
}

TEST(SessionTest, CompareAsksPairedBeforeComputing) {
  auto s = with_iris();
  const auto e = s.post_message("compare sepal_length and petal_length");
  EXPECT_FALSE(e.artifact_id);
  EXPECT_EQ(reply(s, e)["prompt"]["slot"], "paired");
  const auto e2 = s.post_message(json{{"choice", "paired"}});
  EXPECT_FALSE(e2.artifact_id);
  EXPECT_EQ(reply(s, e2)["prompt"]["slot"], "normality");
  const auto e3 = s.post_message(json{{"choice", "non_normal"}});
  ASSERT_TRUE(e3.artifact_id);
  const auto j = json::parse(s.artifact(*e3.artifact_id).content);
  EXPECT_EQ(j["method"], "wilcoxon_signed");
  for (const char* key : {"method", "statistic", "df", "p_value", "alpha", "reject_null"}) EXPECT_TRUE(j.contains(key));
}

TEST(SessionTest, MisspeltColumnGetsSuggestion) {
  auto s = with_iris();
  const auto e = s.post_message("describe sepal_lenth");
  EXPECT_FALSE(e.artifact_id);
  const auto& prompt = reply(s, e)["prompt"];
  EXPECT_NE(prompt["text"].get<std::string>().find("sepal_length"), std::string::npos);
  EXPECT_EQ(prompt["choices"][0]["id"], "sepal_length");
  const auto e2 = s.post_message(json{{"choice", "sepal_length"}});
  ASSERT_TRUE(e2.artifact_id);
  EXPECT_EQ(s.artifact(*e2.artifact_id).kind, ArtifactKind::descriptive);
}

TEST(SessionTest, ScalingPanelOffersFourMethods) {
  auto s = with_iris();
  const auto e = s.post_message("scale sepal_width");
  const auto& choices = reply(s, e)["prompt"]["choices"];
  ASSERT_EQ(choices.size(), 4u);
  std::vector<std::string> labels;
  for (const auto& c : choices) labels.push_back(c["label"]);
  EXPECT_EQ(labels, (std::vector<std::string>{"Min-max scaling", "z-score scaling", "L1 norm scaling", "L2 norm scaling"}));
  const auto before = s.artifacts().size();
  const auto e2 = s.post_message(json{{"choice", "min_max"}});
  ASSERT_TRUE(e2.artifact_id);
  EXPECT_EQ(s.artifacts().size(), before + 1);
  const auto d = tabular::import_csv(s.artifact(*e2.artifact_id).content);
  const auto x = d.column("sepal_width").present();
  EXPECT_EQ(*std::min_element(x.begin(), x.end()), 0.0);
  EXPECT_EQ(*std::max_element(x.begin(), x.end()), 1.0);
}

TEST(SessionTest, ExportAfterImputeHasNoMissingFields) {
  Session s("i");
  s.upload_dataset("x,y,g\n1,2,a\n,4,b\n3,,a\n5,8,b\n", "gaps.csv");
  const auto e = s.post_message("impute x");
  ASSERT_TRUE(e.artifact_id);
  const auto out = s.post_message("export");
  ASSERT_TRUE(out.artifact_id);
  const auto& a = s.artifact(*out.artifact_id);
  EXPECT_EQ(a.kind, ArtifactKind::dataset_export);
  EXPECT_STREQ(a.media_type(), "text/csv");
  const auto d = tabular::import_csv(a.content);
  EXPECT_EQ(d.column("x").missing_count(), 0u);
  EXPECT_EQ(d.column("x").number(1), 3.0);
  EXPECT_EQ(d.column("y").missing_count(), 1u);
}

TEST(SessionTest, KernelErrorsCarryARemedy) {
  Session s("k");
  s.upload_dataset("x,y\n1,2\n,4\n3,1\n5,8\n2,2\n", "gaps.csv");
  const auto e = s.post_message("remove outliers");
  EXPECT_FALSE(e.artifact_id);
  const auto& p = reply(s, e);
  EXPECT_EQ(p["error"]["code"], "invalid_input");
  EXPECT_NE(p["text"].get<std::string>().find("impute"), std::string::npos);
  EXPECT_EQ(p["prompt"]["slot"], "task");
}

TEST(SessionTest, MessagesBeforeUploadAskForData) {
  Session s("n");
  const auto e = s.post_message("describe sepal_length");
  EXPECT_NE(text_of(s, e).find("upload"), std::string::npos);
  EXPECT_EQ(reply(s, e)["prompt"]["expects"], "file");
}

TEST(SessionTest, ReuploadKeepsArtifacts) {
  auto s = with_iris();
  s.post_message("describe sepal_length");
  const auto e = s.upload_dataset("a,b\n1,2\n3,4\n", "small.csv");
  EXPECT_EQ(s.artifacts().size(), 1u);
  EXPECT_EQ(s.dataset()->rows(), 2u);
  EXPECT_EQ(reply(s, e)["prompt"]["slot"], "task");
}

TEST(SessionTest, BadPayloadShapeIsRejectedWithoutATurn) {
  auto s = with_iris();
  const auto n = s.transcript().size();
  EXPECT_THROW(s.post_message(json{{"foo", 1}}), InvalidInput);
  EXPECT_THROW(s.post_message(json(3)), InvalidInput);
  EXPECT_EQ(s.transcript().size(), n);
}

TEST(SessionTest, UnknownArtifactIsNotFound) {
  auto s = with_iris();
  EXPECT_THROW(s.artifact("a99"), NotFound);
}

TEST(SessionTest, AdvisorRecommendsWithoutRunning) {
  auto s = with_iris();
  s.post_message("which test should I use");
  s.post_message(json{{"choice", "independent"}});
  s.post_message(json{{"choice", "2"}});
  s.post_message("sepal_length petal_length");
  const auto e = s.post_message(json{{"choice", "non_normal"}});
  ASSERT_TRUE(e.artifact_id);
  const auto& a = s.artifact(*e.artifact_id);
  EXPECT_EQ(a.kind, ArtifactKind::recommendation);
  EXPECT_EQ(json::parse(a.content)["method_id"], "mann_whitney");
}

TEST(SessionTest, GroupedComparisonRunsChecksFirst) {
  auto s = with_iris();
  s.post_message("compare petal_width by species");
  const auto e = s.post_message(json{{"choice", "unknown"}});
  ASSERT_TRUE(e.artifact_id);
  const auto j = json::parse(s.artifact(*e.artifact_id).content);
  EXPECT_EQ(j["groups"].size(), 3u);
  EXPECT_GE(j["checks"].size(), 3u);
  EXPECT_EQ(j["checks"][0]["method_id"], "shapiro_wilk");
  EXPECT_EQ(j["method"], "kruskal_wallis");
}

TEST(SessionTest, FriedmanIncludesConcordanceAndPosthoc) {
  auto s = with_iris();
  const auto e = s.post_message("friedman sepal_length sepal_width petal_length");
  ASSERT_TRUE(e.artifact_id);
  const auto j = json::parse(s.artifact(*e.artifact_id).content);
  EXPECT_EQ(j["method"], "friedman");
  const double w = j["kendalls_w"];
  EXPECT_EQ(w * 150 * 2, j["statistic"].get<double>());
  EXPECT_EQ(j["posthoc"]["p_values"].size(), 3u);
}

TEST(SessionTest, TurnsAreIndexedAndTimestampsNonDecreasing) {
  auto s = with_iris();
  s.post_message("describe petal_length");
  s.post_message("histogram of petal_length");
  for (std::size_t i = 0; i < s.transcript().size(); ++i) {
    EXPECT_EQ(s.transcript()[i].index, i);
    if (i) {
      EXPECT_GE(s.transcript()[i].timestamp_ms, s.transcript()[i - 1].timestamp_ms);
    }
    EXPECT_EQ(s.transcript()[i].author, i % 2 ? Author::user : Author::agent);
  }
  std::set<std::string> ids;
  for (const auto& a : s.artifacts()) ids.insert(a.id);
  EXPECT_EQ(ids.size(), s.artifacts().size());
}

TEST(SessionTest, TurnJsonRoundTrips) {
  auto s = with_iris();
  for (const auto& t : s.transcript()) {
    const auto back = turn_from_json(json(t));
    EXPECT_EQ(back.index, t.index);
    EXPECT_EQ(back.author, t.author);
    EXPECT_EQ(back.timestamp_ms, t.timestamp_ms);
    EXPECT_EQ(back.payload, t.payload);
  }
}

TEST(SessionTest, DigestIsSha256) {
  EXPECT_EQ(Session::digest("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(Session::digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

void scripted(Session& s) {
  s.upload_dataset(testing::iris_csv(), "iris.csv");
  s.post_message("describe sepal_length");
  s.post_message("histogram of sepal_length");
  s.post_message("compare sepal_length to 5.8");
  s.post_message(json{{"choice", "normal"}});
  s.post_message("is petal_length normal");
  s.post_message("correlate sepal_length and petal_length");
  s.post_message(json{{"choice", "unknown"}});
  s.post_message("impute");
  s.post_message("remove outliers");
  s.post_message("reduce to 2 dimensions");
  s.post_message("scale sepal_width");
  s.post_message("Min-max scaling");
  s.post_message("export");
}

TEST(SessionTest, ReplayReproducesArtifacts) {
  Session s("orig", 7);
  scripted(s);
  ASSERT_EQ(s.artifacts().size(), 10u);
  const auto iris = testing::iris_csv();
  const auto sha = Session::digest(iris);
  auto replayed = Session::replay("copy", 7, s.transcript(), [&](const std::string& h) {
    EXPECT_EQ(h, sha);
    return iris;
  });
  ASSERT_EQ(replayed.transcript().size(), s.transcript().size());
  for (std::size_t i = 0; i < s.transcript().size(); ++i) {
    EXPECT_EQ(replayed.transcript()[i].payload, s.transcript()[i].payload) << "turn " << i;
  }
  EXPECT_EQ(replayed.artifacts(), s.artifacts());
}

TEST(SessionTest, SeedChangesOnlyTheForest) {
  Session a("a", 1);
  Session b("b", 2);
  scripted(a);
  scripted(b);
  EXPECT_EQ(a.artifacts()[0], b.artifacts()[0]);
  EXPECT_EQ(a.artifacts()[4], b.artifacts()[4]);
}

// Random walks over the offered choices and a pool of free text never get
// stuck: every user turn gets one agent turn with a usable prompt, and
// "menu" always returns to the task list.
TEST(SessionTest, FuzzedDialoguesNeverDeadEnd) {
  const std::vector<std::string> pool{"sepal_length",  "petal_width species", "by species", "2",      "0.1",
                                      "5.5",           "hello",               "sepal_lenth", "normal", "paired",
                                      "sepal_length sepal_width petal_length", "z-score",  "",       "3 groups"};
  std::mt19937_64 rng(2024);
  for (int walk = 0; walk < 60; ++walk) {
    auto s = with_iris();
    for (int step = 0; step < 25; ++step) {
      const auto& prompt = s.transcript().back().payload["prompt"];
      ASSERT_TRUE(prompt.contains("text"));
      const auto& choices = prompt["choices"];
      if (prompt["expects"] == "choice") {
        ASSERT_GE(choices.size(), 2u);
      }
      const auto n = s.transcript().size();
      Exchange e;
      if (!choices.empty() && rng() % 4 != 0) {
        e = s.post_message(json{{"choice", choices[rng() % choices.size()]["id"]}});
      } else {
        e = s.post_message(pool[rng() % pool.size()]);
      }
      ASSERT_EQ(s.transcript().size(), n + 2);
      EXPECT_EQ(e.agent_turn, n + 1);
      if (e.artifact_id) {
        EXPECT_NO_THROW(s.artifact(*e.artifact_id));
      }
    }
    const auto e = s.post_message("menu");
    EXPECT_EQ(reply(s, e)["prompt"]["slot"], "task");
  }
}

}  // namespace
}  // namespace statz::session
