// harness: grading, interaction metrics, the Friedman / Nemenyi pipeline,
// Latin-square assignment and Nielsen totals for a tool-comparison study.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "statz/error.hpp"
#include "statz/harness/analysis.hpp"
#include "statz/harness/grading.hpp"
#include "statz/harness/latin_square.hpp"
#include "statz/harness/metrics.hpp"
#include "statz/tabular/csv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace statz;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

// JSON to --out (or stdout); the CSV report goes next to it.
void emit(const std::string& out, const json& report, const std::string& csv) {
  if (out.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  fs::path p(out);
  write_file(p, report.dump(2) + "\n");
  if (!csv.empty()) write_file(fs::path(p).replace_extension(".csv"), csv);
  std::cerr << "wrote " << p.string();
  if (!csv.empty()) std::cerr << " and " << fs::path(p).replace_extension(".csv").string();
  std::cerr << "\n";
}

stats::Matrix read_matrix(const std::string& path) {
  const auto d = tabular::read_csv_file(path);
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  for (const auto& c : d.columns()) {
    if (!c.is_numeric()) continue;  // participant ids and the like
    if (c.missing_count()) throw InvalidInput("column '" + c.name() + "' has empty cells");
    cols.push_back(c.present());
    labels.push_back(c.name());
  }
  if (cols.size() < 2) throw InvalidInput("the matrix needs at least two numeric tool columns");
  return stats::Matrix::from_columns(cols, labels);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Study harness: grading, metrics and the rank-based comparison pipeline"};
  app.require_subcommand(1);

  std::string out;
  auto* grade = app.add_subcommand("grade", "Score submissions against an answer key");
  std::string submissions, key;
  double tol = 1e-6;
  grade->add_option("--submissions", submissions, "CSV: participant,tool,task,answer")->required()->check(CLI::ExistingFile);
  grade->add_option("--key", key, "CSV: task,answer (default: bundled Iris key)")->check(CLI::ExistingFile);
  grade->add_option("--tol", tol, "Relative tolerance for numeric answers")->capture_default_str();
  grade->add_option("--out", out, "Report JSON path; a CSV is written alongside");

  auto* agg = app.add_subcommand("aggregate", "Per-tool means of interaction logs");
  std::string logs;
  double dpi = harness::kDefaultDpi;
  agg->add_option("--logs", logs, "CSV: participant,tool,duration_s,keystrokes,mouse_clicks,mouse_distance_px")
      ->required()
      ->check(CLI::ExistingFile);
  agg->add_option("--dpi", dpi, "Screen resolution for the pixel to meter conversion")->capture_default_str();
  agg->add_option("--out", out, "Report JSON path; a CSV is written alongside");

  auto* an = app.add_subcommand("analyze", "Friedman, Kendall's W, Nemenyi and Bonferroni");
  std::string matrix;
  double alpha = 0.05;
  an->add_option("--matrix", matrix, "CSV: one numeric column per tool, one row per participant")
      ->required()
      ->check(CLI::ExistingFile);
  an->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  an->add_option("--out", out, "Report JSON path; a CSV is written alongside");

  auto* ls = app.add_subcommand("latin-square", "Balanced session orders");
  int k = 5;
  std::vector<std::string> labels;
  ls->add_option("--k", k, "Number of tools")->required();
  ls->add_option("--labels", labels, "Tool names, in tool-number order")->delimiter(',');
  ls->add_option("--out", out, "Report JSON path; a CSV is written alongside");

  auto* ni = app.add_subcommand("nielsen", "Total Nielsen heuristic scores");
  std::string ratings;
  ni->add_option("--ratings", ratings, "CSV: participant,software,heuristic,score")->required()->check(CLI::ExistingFile);
  ni->add_option("--out", out, "Report JSON path; a CSV is written alongside");

  auto* sy = app.add_subcommand("synth", "Synthetic accuracy matrix at the published tool means");
  harness::SynthParams synth;
  std::string matrix_out;
  sy->add_option("--participants", synth.participants)->capture_default_str();
  sy->add_option("--tasks", synth.tasks)->capture_default_str();
  sy->add_option("--seed", synth.seed)->capture_default_str();
  sy->add_option("--out", matrix_out, "CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grade) {
      const auto answer_key = key.empty() ? harness::iris_answer_key()
                                          : harness::read_answer_key(tabular::read_csv_file(key));
      const auto grades = harness::grade_submissions(tabular::read_csv_file(submissions), answer_key, tol);
      emit(out, {{"tasks", answer_key.tasks}, {"tolerance", tol}, {"grades", grades}},
           harness::grades_csv(grades, answer_key.tasks));
    } else if (*agg) {
      const auto rows = harness::aggregate(harness::read_interaction_logs(tabular::read_csv_file(logs)), dpi);
      emit(out, {{"dpi", dpi}, {"tools", rows}}, harness::metrics_csv(rows));
    } else if (*an) {
      const auto r = harness::analyze(read_matrix(matrix), alpha);
      emit(out, r, harness::report_csv(r));
    } else if (*ls) {
      const auto d = harness::latin_square(k);
      if (!labels.empty() && labels.size() != static_cast<std::size_t>(k)) {
        throw InvalidInput("--labels needs exactly " + std::to_string(k) + " names");
      }
      json rows = json::array();
      std::string csv = "session";
      for (int p = 1; p <= k; ++p) csv += ",position_" + std::to_string(p);
      csv += "\n";
      for (std::size_t r = 0; r < d.size(); ++r) {
        json row = json::array();
        csv += std::to_string(r + 1);
        for (int t : d[r]) {
          const std::string name = labels.empty() ? std::to_string(t) : labels[static_cast<std::size_t>(t - 1)];
          row.push_back(labels.empty() ? json(t) : json(name));
          csv += "," + name;
        }
        csv += "\n";
        rows.push_back(row);
      }
      emit(out, {{"k", k}, {"rows", rows}, {"audit", harness::audit(d, k)}}, csv);
    } else if (*ni) {
      const auto t = harness::nielsen_aggregate(harness::read_nielsen_ratings(tabular::read_csv_file(ratings)));
      emit(out, t, harness::nielsen_csv(t));
    } else if (*sy) {
      const auto m = harness::synthesize_accuracy(synth);
      std::vector<tabular::Column> cols;
      std::vector<std::string> ids;
      for (std::size_t r = 0; r < m.rows(); ++r) ids.push_back("P" + std::to_string(r + 1));
      cols.push_back(tabular::Column::text("participant", ids));
      for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(tabular::Column::numeric(m.labels()[c], m.column(c)));
      const auto csv = tabular::export_csv(tabular::Dataset(std::move(cols)));
      if (matrix_out.empty()) {
        std::cout << csv;
      } else {
        write_file(matrix_out, csv);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
