#include "statz/preprocess/pca.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "statz/error.hpp"

namespace statz::preprocess {

PcaResult pca(const tabular::Dataset& d, std::span<const std::string> columns, std::size_t k) {
  std::vector<const tabular::Column*> cols;
  if (columns.empty()) {
    for (const auto& c : d.columns()) {
      if (c.is_numeric()) cols.push_back(&c);
    }
  } else {
    for (const auto& name : columns) cols.push_back(&d.column(name));
  }
  const std::size_t p = cols.size();
  const std::size_t n = d.rows();
  if (p == 0) throw InvalidInput("PCA needs at least one numeric column");
  for (const auto* c : cols) {
    if (!c->is_numeric()) throw InvalidInput("column '" + c->name() + "' is not numeric");
    if (c->missing_count() > 0) throw InvalidInput("column '" + c->name() + "' has missing values; impute them first");
  }
  if (k < 1 || k > p) throw InvalidInput("number of components must lie in [1, " + std::to_string(p) + "]");
  if (n < p + 1) throw TooFewObservations(p + 1, n, "PCA on " + std::to_string(p) + " columns");

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j]->number(i);
  }
  const Eigen::RowVectorXd mu = x.colwise().mean();
  x.rowwise() -= mu;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DegenerateInput("covariance eigendecomposition did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double trace = cov.trace();
  if (!(trace > 0.0)) throw DegenerateInput("all selected columns are constant");

  PcaResult out;
  out.total_variance = trace;
  for (const auto* c : cols) out.columns.push_back(c->name());
  out.means.assign(mu.data(), mu.data() + p);

  std::vector<tabular::Column> pcs;
  for (std::size_t c = 0; c < k; ++c) {
    const auto src = static_cast<Eigen::Index>(p - 1 - c);
    Eigen::VectorXd v = vectors.col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    const double lambda = std::max(0.0, values(src));
    out.explained_variance.push_back(lambda);
    out.explained_variance_ratio.push_back(lambda / trace);
    out.components.emplace_back(v.data(), v.data() + p);
    const Eigen::VectorXd scores = x * v;
    pcs.push_back(tabular::Column::numeric("PC" + std::to_string(c + 1),
                                           std::vector<double>(scores.data(), scores.data() + n)));
  }
  out.transformed = tabular::Dataset(std::move(pcs));
  return out;
}

}  // namespace statz::preprocess
