#include "statz/advisor/design.hpp"

#include "statz/error.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::advisor {

const char* to_string(Normality v) noexcept {
  switch (v) {
    case Normality::normal: return "normal";
    case Normality::non_normal: return "non_normal";
    case Normality::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(EqualVariance v) noexcept {
  switch (v) {
    case EqualVariance::yes: return "yes";
    case EqualVariance::no: return "no";
    case EqualVariance::unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Goal v) noexcept {
  switch (v) {
    case Goal::compare_location: return "compare_location";
    case Goal::association: return "association";
    case Goal::describe: return "describe";
    case Goal::preprocess: return "preprocess";
  }
  return "unknown";
}

namespace {

const char* kGoalQuestion = "What do you want to find out?";
const char* kPairedQuestion = "Are the samples paired or independent?";
const char* kGroupsQuestion = "How many groups or variables are involved?";
const char* kNormalityQuestion = "Are the data normally distributed?";
const char* kVarianceQuestion = "Do the groups have equal variances?";

std::string goal_answer(Goal g) {
  switch (g) {
    case Goal::compare_location: return "compare locations";
    case Goal::association: return "measure association";
    case Goal::describe: return "describe";
    case Goal::preprocess: return "preprocess";
  }
  return "";
}

std::string normality_answer(Normality n) {
  switch (n) {
    case Normality::normal: return "normal";
    case Normality::non_normal: return "not normal";
    case Normality::unknown: return "unknown";
  }
  return "";
}

std::string variance_answer(EqualVariance v) {
  switch (v) {
    case EqualVariance::yes: return "equal";
    case EqualVariance::no: return "unequal";
    case EqualVariance::unknown: return "unknown";
  }
  return "";
}

Recommendation commit(Recommendation r, std::string method, std::string rationale) {
  r.method_id = std::move(method);
  r.rationale = std::move(rationale);
  return r;
}

Recommendation check_normality(Recommendation r, const std::string& scope, std::size_t groups) {
  if (scope == "differences") {
    r.prerequisites.push_back({"shapiro_wilk", scope, std::nullopt});
  } else {
    for (std::size_t g = 0; g < groups; ++g) r.prerequisites.push_back({"shapiro_wilk", "group", g});
  }
  r.rationale = scope == "differences"
                    ? "Normality of the paired differences is unknown; run Shapiro-Wilk on them first."
                    : "Normality is unknown; run Shapiro-Wilk on each group first.";
  return r;
}

Recommendation one_sample(const DesignDescriptor& d, Recommendation r) {
  if (!d.reference_mean) {
    throw Incomplete("What reference mean should the sample be compared against?");
  }
  r.pathway_trace.push_back({"Which reference mean?", tabular::format_number(*d.reference_mean)});
  r.pathway_trace.push_back({kNormalityQuestion, normality_answer(d.normality)});
  r.parameters["reference_mean"] = tabular::format_number(*d.reference_mean);
  switch (d.normality) {
    case Normality::normal:
      return commit(std::move(r), "one_sample_t",
                    "A single normal sample is compared with a reference mean by the one-sample t test.");
    case Normality::non_normal:
      return commit(std::move(r), "wilcoxon_signed",
                    "A single non-normal sample is compared with a reference value by the Wilcoxon "
                    "signed-rank test on the differences.");
    case Normality::unknown:
      return check_normality(std::move(r), "each_group", d.n_groups);
  }
  return r;
}

Recommendation two_groups(const DesignDescriptor& d, Recommendation r) {
  r.pathway_trace.push_back({kNormalityQuestion, normality_answer(d.normality)});
  if (d.paired) {
    switch (d.normality) {
      case Normality::normal:
        return commit(std::move(r), "paired_t", "Two paired normal samples: paired t test on the differences.");
      case Normality::non_normal:
        return commit(std::move(r), "wilcoxon_signed",
                      "Two paired samples without normality: Wilcoxon signed-rank test.");
      case Normality::unknown:
        return check_normality(std::move(r), "differences", 1);
    }
  }
  switch (d.normality) {
    case Normality::non_normal:
      return commit(std::move(r), "mann_whitney",
                    "Two independent samples that are not normally distributed: the non-parametric "
                    "Mann-Whitney U test.");
    case Normality::unknown:
      return check_normality(std::move(r), "each_group", d.n_groups);
    case Normality::normal:
      break;
  }
  r.pathway_trace.push_back({kVarianceQuestion, variance_answer(d.equal_variance)});
  switch (d.equal_variance) {
    case EqualVariance::yes:
      return commit(std::move(r), "pooled_t", "Two independent normal samples with equal variances: pooled t test.");
    case EqualVariance::no:
      return commit(std::move(r), "welch_t",
                    "Two independent normal samples with unequal variances: Welch's t test.");
    case EqualVariance::unknown:
      r.prerequisites.push_back({"levene", "all_groups", std::nullopt});
      r.rationale = "Variance equality is unknown; run Levene's test before choosing between pooled and Welch t.";
      return r;
  }
  return r;
}

Recommendation many_groups(const DesignDescriptor& d, Recommendation r) {
  if (d.paired) {
    r.prerequisites.push_back({"nemenyi", "post_hoc", std::nullopt});
    return commit(std::move(r), "friedman",
                  "Repeated measures on more than two conditions: Friedman test, followed by Nemenyi "
                  "pairwise comparisons when it rejects.");
  }
  r.pathway_trace.push_back({kNormalityQuestion, normality_answer(d.normality)});
  switch (d.normality) {
    case Normality::non_normal:
      return commit(std::move(r), "kruskal_wallis",
                    "More than two independent samples without normality: Kruskal-Wallis H test.");
    case Normality::unknown:
      return check_normality(std::move(r), "each_group", d.n_groups);
    case Normality::normal:
      break;
  }
  r.pathway_trace.push_back({kVarianceQuestion, variance_answer(d.equal_variance)});
  switch (d.equal_variance) {
    case EqualVariance::yes:
      return commit(std::move(r), "one_way_anova",
                    "More than two independent normal samples with equal variances: one-way ANOVA.");
    case EqualVariance::no:
      return commit(std::move(r), "kruskal_wallis",
                    "Variances differ across more than two groups, so the rank-based Kruskal-Wallis test "
                    "replaces one-way ANOVA.");
    case EqualVariance::unknown:
      r.prerequisites.push_back({"levene", "all_groups", std::nullopt});
      r.rationale = "Variance equality is unknown; run Levene's test before one-way ANOVA.";
      return r;
  }
  return r;
}

Recommendation association(const DesignDescriptor& d, Recommendation r) {
  if (d.n_groups < 2) throw Incomplete("Which second variable should the first be correlated with?");
  r.pathway_trace.push_back({kNormalityQuestion, normality_answer(d.normality)});
  if (d.normality == Normality::unknown) return check_normality(std::move(r), "each_group", d.n_groups);
  const bool normal = d.normality == Normality::normal;
  if (d.n_groups > 2) {
    r.parameters["method"] = normal ? "pearson" : "spearman";
    return commit(std::move(r), "correlation_matrix",
                  normal ? "Several normal variables: pairwise Pearson correlations."
                         : "Several variables without normality: pairwise Spearman correlations.");
  }
  return normal ? commit(std::move(r), "pearson", "Two normal variables: Pearson correlation coefficient.")
                : commit(std::move(r), "spearman",
                         "Two variables without normality: Spearman rank correlation.");
}

}  // namespace

Recommendation recommend_test(const DesignDescriptor& d) {
  if (d.n_groups < 1) throw InvalidInput("a design needs at least one group");
  Recommendation r;
  r.pathway_trace.push_back({kGoalQuestion, goal_answer(d.goal)});
  switch (d.goal) {
    case Goal::describe:
      return commit(std::move(r), "descriptive_summary",
                    "Descriptive goal: summarize each variable (mean, median, sd, quartiles).");
    case Goal::preprocess:
      throw Incomplete("Which preprocessing step: imputation, outlier removal, dimensionality reduction or scaling?");
    case Goal::association:
      r.pathway_trace.push_back({kGroupsQuestion, std::to_string(d.n_groups)});
      return association(d, std::move(r));
    case Goal::compare_location:
      break;
  }
  if (d.n_groups == 1) {
    r.pathway_trace.push_back({kGroupsQuestion, "1"});
    return one_sample(d, std::move(r));
  }
  r.pathway_trace.push_back({kPairedQuestion, d.paired ? "paired" : "independent"});
  r.pathway_trace.push_back({kGroupsQuestion, std::to_string(d.n_groups)});
  return d.n_groups == 2 ? two_groups(d, std::move(r)) : many_groups(d, std::move(r));
}

void to_json(nlohmann::json& j, const Recommendation& r) {
  j = nlohmann::json::object();
  j["method_id"] = r.method_id ? nlohmann::json(*r.method_id) : nlohmann::json(nullptr);
  j["rationale"] = r.rationale;
  auto& trace = j["pathway_trace"] = nlohmann::json::array();
  for (const auto& s : r.pathway_trace) trace.push_back({{"question", s.question}, {"answer", s.answer}});
  auto& pre = j["prerequisites"] = nlohmann::json::array();
  for (const auto& p : r.prerequisites) {
    nlohmann::json e{{"method_id", p.method_id}, {"scope", p.scope}};
    if (p.group) e["group"] = *p.group;
    pre.push_back(std::move(e));
  }
  j["parameters"] = r.parameters;
}

}  // namespace statz::advisor
