#include "statz/preprocess/isolation_forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "statz/error.hpp"

namespace statz::preprocess {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

// Distribution mappings are written out so that a seed gives the same forest
// on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Builder {
  std::span<const double> points;
  std::size_t dims;
  std::size_t height_limit;
  Rng& rng;

  double at(std::size_t row, std::size_t f) const { return points[row * dims + f]; }

  template <typename Node>
  std::uint32_t build(std::vector<Node>& tree, std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                      std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree.size());
    tree.push_back(Node{});
    tree[id].size = static_cast<std::uint32_t>(hi - lo);
    if (depth >= height_limit || hi - lo <= 1) return id;

    // Only attributes that vary inside the node can split it.
    std::vector<std::pair<double, double>> range(dims);
    std::vector<std::size_t> candidates;
    for (std::size_t f = 0; f < dims; ++f) {
      double mn = std::numeric_limits<double>::infinity();
      double mx = -mn;
      for (std::size_t i = lo; i < hi; ++i) {
        mn = std::min(mn, at(idx[i], f));
        mx = std::max(mx, at(idx[i], f));
      }
      range[f] = {mn, mx};
      if (mx > mn) candidates.push_back(f);
    }
    if (candidates.empty()) return id;

    const std::size_t f = candidates[rng.below(candidates.size())];
    const auto [mn, mx] = range[f];
    double split = mn + rng.uniform() * (mx - mn);
    if (split <= mn) split = std::nextafter(mn, mx);

    const auto mid = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(lo),
                                    idx.begin() + static_cast<std::ptrdiff_t>(hi),
                                    [&](std::size_t r) { return at(r, f) < split; }) -
                     idx.begin();
    tree[id].feature = static_cast<int>(f);
    tree[id].split = split;
    const auto left = build(tree, idx, lo, static_cast<std::size_t>(mid), depth + 1);
    const auto right = build(tree, idx, static_cast<std::size_t>(mid), hi, depth + 1);
    tree[id].left = left;
    tree[id].right = right;
    return id;
  }
};

std::pair<std::vector<double>, std::size_t> dense(const tabular::Dataset& d, std::span<const std::string> columns) {
  std::vector<const tabular::Column*> cols;
  if (columns.empty()) {
    for (const auto& c : d.columns()) {
      if (c.is_numeric()) cols.push_back(&c);
    }
  } else {
    for (const auto& name : columns) cols.push_back(&d.column(name));
  }
  if (cols.empty()) throw InvalidInput("isolation forest needs at least one numeric column");
  for (const auto* c : cols) {
    if (!c->is_numeric()) throw InvalidInput("column '" + c->name() + "' is not numeric");
    if (c->missing_count() > 0) {
      throw InvalidInput("column '" + c->name() + "' has missing values; impute them first");
    }
  }
  std::vector<double> out(d.rows() * cols.size());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t f = 0; f < cols.size(); ++f) out[r * cols.size() + f] = cols[f]->number(r);
  }
  return {std::move(out), cols.size()};
}

void validate(const ForestParams& p) {
  if (p.n_trees == 0) throw InvalidInput("isolation forest needs at least one tree");
  if (p.subsample < 2) throw InvalidInput("isolation forest subsample size must be at least 2");
  if (!(p.contamination > 0.0 && p.contamination < 0.5)) {
    throw InvalidInput("contamination must lie in (0, 0.5)");
  }
}

}  // namespace

double average_path_length(double m) {
  if (m <= 1.0) return 0.0;
  if (m <= 2.0) return 1.0;
  return 2.0 * (std::log(m - 1.0) + kEulerGamma) - 2.0 * (m - 1.0) / m;
}

IsolationForest IsolationForest::fit(std::span<const double> points, std::size_t dims, const ForestParams& params) {
  validate(params);
  if (dims == 0 || points.size() % dims != 0) throw InvalidInput("point buffer is not a whole number of rows");
  const std::size_t n = points.size() / dims;
  if (n < 2) throw TooFewObservations(2, n, "isolation forest");
  for (double v : points) {
    if (!std::isfinite(v)) throw InvalidInput("isolation forest input must be finite");
  }

  IsolationForest forest;
  forest.dims_ = dims;
  forest.sample_size_ = std::min(params.subsample, n);
  const auto height_limit = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(forest.sample_size_))));

  std::vector<std::size_t> all(n);
  forest.trees_.reserve(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(splitmix64(params.seed ^ splitmix64(t)));
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < forest.sample_size_; ++i) {
      std::swap(all[i], all[i + rng.below(n - i)]);
    }
    std::vector<std::size_t> sample(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(forest.sample_size_));
    Builder builder{points, dims, height_limit, rng};
    Tree tree;
    builder.build(tree, sample, 0, sample.size(), 0);
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double IsolationForest::path_length(const Tree& tree, std::span<const double> point) const {
  std::uint32_t id = 0;
  double depth = 0.0;
  while (tree[id].feature >= 0) {
    const auto& node = tree[id];
    id = point[static_cast<std::size_t>(node.feature)] < node.split ? node.left : node.right;
    depth += 1.0;
  }
  return depth + average_path_length(tree[id].size);
}

double IsolationForest::expected_path_length(std::span<const double> point) const {
  if (point.size() != dims_) throw InvalidInput("point has the wrong number of dimensions");
  double sum = 0.0;
  for (const auto& tree : trees_) sum += path_length(tree, point);
  return sum / static_cast<double>(trees_.size());
}

double IsolationForest::score(std::span<const double> point) const {
  return std::exp2(-expected_path_length(point) / average_path_length(static_cast<double>(sample_size_)));
}

std::vector<double> isolation_forest_scores(const tabular::Dataset& d, std::span<const std::string> columns,
                                            const ForestParams& params) {
  const auto [points, dims] = dense(d, columns);
  const auto forest = IsolationForest::fit(points, dims, params);
  std::vector<double> out(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    out[r] = forest.score(std::span<const double>(points).subspan(r * dims, dims));
  }
  return out;
}

std::size_t outlier_count(std::size_t n, double contamination) {
  // Guard products such as 0.07 * 100 landing just above an integer.
  const double raw = contamination * static_cast<double>(n);
  const double nearest = std::round(raw);
  const double r = std::abs(raw - nearest) <= 1e-9 * std::max(1.0, raw) ? nearest : std::ceil(raw);
  return std::min(n, static_cast<std::size_t>(r));
}

tabular::Dataset remove_outliers(const tabular::Dataset& d, std::span<const std::string> columns,
                                 const ForestParams& params) {
  const auto scores = isolation_forest_scores(d, columns, params);
  const std::size_t drop = outlier_count(d.rows(), params.contamination);
  std::vector<std::size_t> order(d.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Among equal scores the higher index goes first.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a > b;
  });
  std::vector<bool> dropped(d.rows(), false);
  for (std::size_t i = 0; i < drop; ++i) dropped[order[i]] = true;
  std::vector<std::size_t> keep;
  keep.reserve(d.rows() - drop);
  for (std::size_t r = 0; r < d.rows(); ++r) {
    if (!dropped[r]) keep.push_back(r);
  }
  return d.select_rows(keep);
}

}  // namespace statz::preprocess
