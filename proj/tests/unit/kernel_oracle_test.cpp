#include <gtest/gtest.h>

#include <chrono>

#include "fixtures.hpp"
#include "kernel_oracle.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::testing {
namespace {

TEST(KernelOracle, RandomCasesMatchReference) {
  const auto doc = load_json(fixture_dir() / "kernel_reference.json");
  const auto start = std::chrono::steady_clock::now();
  const auto rep = run_kernel_oracle(doc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(rep.cases, 100u);
  for (const auto& m : rep.mismatches) ADD_FAILURE() << m;
  EXPECT_LT(secs, 30.0);
  RecordProperty("worst_closed_form", std::to_string(rep.worst_closed_form));
}

TEST(KernelOracle, IrisReference) {
  const auto ref = load_json(fixture_dir() / "iris_reference.json");
  const auto d = tabular::import_csv(iris_csv());
  const auto& sl = d.column("sepal_length");
  const auto s = stats::describe(sl);
  const auto& want = ref.at("describe_sepal_length");
  EXPECT_NEAR(s.mean, want.at("mean").get<double>(), 1e-12);
  EXPECT_NEAR(s.median, want.at("median").get<double>(), 1e-12);
  EXPECT_NEAR(s.sd, want.at("sd").get<double>(), 1e-12);
  EXPECT_NEAR(s.q1, want.at("q1").get<double>(), 1e-12);
  EXPECT_NEAR(s.q3, want.at("q3").get<double>(), 1e-12);
  EXPECT_NEAR(s.mean, 5.843, 1e-3);

  const auto h = stats::histogram(sl.present(), 10);
  const auto edges = ref.at("histogram_sepal_length_10").at("edges").get<std::vector<double>>();
  ASSERT_EQ(h.edges.size(), edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) EXPECT_NEAR(h.edges[i], edges[i], 1e-12);
  EXPECT_EQ(h.counts, ref.at("histogram_sepal_length_10").at("counts").get<std::vector<std::size_t>>());

  const auto t = stats::t_test_one_sample(sl.present(), 5.8);
  const auto tw = ref.at("t_one_sample_sepal_length_5_8");
  EXPECT_NEAR(t.statistic, tw[0].get<double>(), 1e-9);
  EXPECT_NEAR(t.p_value, tw[2].get<double>(), 1e-9);

  const auto sw = stats::shapiro_wilk(d.column("petal_length").present());
  EXPECT_NEAR(sw.statistic, ref.at("shapiro_petal_length")[0].get<double>(), 1e-6);
  EXPECT_NEAR(sw.p_value, ref.at("shapiro_petal_length")[1].get<double>(), 5e-3);

  const auto rho = stats::correlation(stats::CorrelationMethod::spearman, sl, d.column("petal_length"));
  EXPECT_NEAR(rho.coefficient, ref.at("spearman_sepal_petal_length")[0].get<double>(), 1e-12);
}

}  // namespace
}  // namespace statz::testing
