#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "models_impl.hpp"
#include "newstense/error.hpp"

namespace newstense::impl {

namespace {

// Weighted Gini impurity contribution of one side: n_side * gini(side).
double side_impurity(double c0, double c1) {
  const double n = c0 + c1;
  return n > 0.0 ? n - (c0 * c0 + c1 * c1) / n : 0.0;
}

struct SplitChoice {
  bool valid = false;
  double score = std::numeric_limits<double>::infinity();  // summed child impurity
  uint32_t feature = 0;
  float threshold = 0.0f;

  void consider(double s, uint32_t f, float t) {
    // Lexicographic (score, feature, threshold) keeps the choice
    // independent of candidate evaluation order.
    if (!valid || s < score || (s == score && (f < feature || (f == feature && t < threshold)))) {
      valid = true;
      score = s;
      feature = f;
      threshold = t;
    }
  }
};

// (value, past count, future count), ascending distinct values.
using ValueGroups = std::vector<std::array<double, 3>>;

void scan_groups(const ValueGroups& groups, double total0, double total1, int min_leaf,
                 double parent_impurity, uint32_t feature, SplitChoice& best) {
  if (groups.size() < 2) return;
  const double total = total0 + total1;
  double left0 = 0.0, left1 = 0.0;
  for (size_t g = 0; g + 1 < groups.size(); ++g) {
    left0 += groups[g][1];
    left1 += groups[g][2];
    const double left_n = left0 + left1;
    const double right_n = total - left_n;
    if (left_n < min_leaf || right_n < min_leaf) continue;
    const double score = side_impurity(left0, left1) + side_impurity(total0 - left0, total1 - left1);
    if (score >= parent_impurity - 1e-12) continue;  // require a real impurity decrease
    const float threshold = static_cast<float>(0.5 * (groups[g][0] + groups[g + 1][0]));
    best.consider(score, feature, threshold);
  }
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, const std::vector<Label>& y, int max_depth, int min_leaf,
              Rng* rng, uint32_t mtry)
      : x_(x), y_(y), max_depth_(max_depth), min_leaf_(std::max(1, min_leaf)), rng_(rng),
        mtry_(mtry) {}

  DecisionTreeModel run(const std::vector<uint32_t>& rows) {
    DecisionTreeModel model;
    build(rows, 0, model.nodes);
    return model;
  }

 private:
  int32_t build(const std::vector<uint32_t>& rows, int depth, std::vector<TreeNode>& nodes) {
    const int32_t me = static_cast<int32_t>(nodes.size());
    nodes.emplace_back();
    std::array<uint32_t, 2> counts{0, 0};
    for (uint32_t r : rows) counts[static_cast<int>(y_[r])] += 1;
    nodes[me].counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_capped = max_depth_ > 0 && depth >= max_depth_;
    if (pure || depth_capped || rows.size() < 2 * static_cast<size_t>(min_leaf_))
      return me;

    const SplitChoice best = find_split(rows, counts);
    if (!best.valid) return me;

    std::vector<uint32_t> left_rows, right_rows;
    for (uint32_t r : rows)
      (x_.at(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);

    nodes[me].feature = static_cast<int32_t>(best.feature);
    nodes[me].threshold = best.threshold;
    const int32_t left = build(left_rows, depth + 1, nodes);
    const int32_t right = build(right_rows, depth + 1, nodes);
    nodes[me].left = left;  // assign via index: recursion may reallocate `nodes`
    nodes[me].right = right;
    return me;
  }

  SplitChoice find_split(const std::vector<uint32_t>& rows, const std::array<uint32_t, 2>& counts) {
    // Transpose the sparse block restricted to this node's rows (bootstrap
    // duplicates contribute once per occurrence).
    std::map<uint32_t, std::vector<std::pair<float, int>>> transposed;
    if (!x_.sparse_rows.empty())
      for (uint32_t r : rows)
        for (const auto& [col, v] : x_.sparse_rows[r])
          transposed[col].emplace_back(v, static_cast<int>(y_[r]));

    std::vector<uint32_t> candidates;
    if (rng_ != nullptr) {
      candidates = sample_columns();
    } else {
      // Every informative column: sparse columns with a nonzero in this node
      // (all-zero ones cannot split) plus the whole dense tail.
      candidates.reserve(transposed.size() + x_.dense_width());
      for (const auto& [col, _] : transposed) candidates.push_back(col);
      for (uint32_t j = 0; j < x_.dense_width(); ++j) candidates.push_back(x_.sparse_width + j);
    }

    const double total0 = counts[0], total1 = counts[1];
    const double parent = side_impurity(total0, total1);
    SplitChoice best;
    ValueGroups groups;
    std::vector<std::pair<float, int>> values;

    for (uint32_t f : candidates) {
      groups.clear();
      if (f < x_.sparse_width) {
        auto it = transposed.find(f);
        if (it == transposed.end()) continue;  // all zero here: nothing to split
        auto& entries = it->second;
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // Rows without an entry sit at value 0; fold that block in at its
        // sorted position.
        double zc0 = total0, zc1 = total1;
        for (const auto& [v, c] : entries) (c == 0 ? zc0 : zc1) -= 1.0;
        bool zero_done = entries.size() == rows.size();
        auto emit_zero = [&] {
          append_group(groups, 0.0, zc0, zc1);
          zero_done = true;
        };
        for (const auto& [v, c] : entries) {
          if (!zero_done && v >= 0.0f) emit_zero();
          append_group(groups, v, c == 0 ? 1.0 : 0.0, c == 0 ? 0.0 : 1.0);
        }
        if (!zero_done) emit_zero();
      } else {
        values.clear();
        const uint32_t j = f - x_.sparse_width;
        for (uint32_t r : rows) values.emplace_back(x_.dense_rows[r][j], static_cast<int>(y_[r]));
        std::sort(values.begin(), values.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [v, c] : values)
          append_group(groups, v, c == 0 ? 1.0 : 0.0, c == 0 ? 0.0 : 1.0);
      }
      scan_groups(groups, total0, total1, min_leaf_, parent, f, best);
    }
    return best;
  }

  static void append_group(ValueGroups& groups, double value, double c0, double c1) {
    if (!groups.empty() && groups.back()[0] == value) {
      groups.back()[1] += c0;
      groups.back()[2] += c1;
    } else {
      groups.push_back({value, c0, c1});
    }
  }

  // Partial Fisher-Yates draw of mtry distinct column ids.
  std::vector<uint32_t> sample_columns() {
    const uint32_t cols = x_.cols();
    const uint32_t take = std::min(mtry_, cols);
    std::vector<uint32_t> pool(cols);
    for (uint32_t i = 0; i < cols; ++i) pool[i] = i;
    for (uint32_t i = 0; i < take; ++i) {
      const uint64_t j = i + rng_->below(cols - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
  }

  const FeatureMatrix& x_;
  const std::vector<Label>& y_;
  int max_depth_;
  int min_leaf_;
  Rng* rng_;
  uint32_t mtry_;
};

}  // namespace

DecisionTreeModel fit_tree(const FeatureMatrix& x, const std::vector<Label>& y,
                           const std::vector<uint32_t>& rows, int max_depth, int min_samples_leaf,
                           Rng* feature_rng, uint32_t mtry) {
  if (rows.empty()) throw Error("fit_tree: no training rows");
  TreeBuilder builder(x, y, max_depth, min_samples_leaf, feature_rng, mtry);
  return builder.run(rows);
}

ForestModel fit_forest(const FeatureMatrix& x, const std::vector<Label>& y, uint32_t n_trees,
                       int max_depth, int min_samples_leaf, uint64_t seed) {
  if (n_trees == 0) throw Error("fit_forest: needs at least one tree");
  const uint32_t n = static_cast<uint32_t>(x.rows());
  const uint32_t mtry =
      static_cast<uint32_t>(std::ceil(std::sqrt(static_cast<double>(x.cols()))));
  Rng rng(seed);
  ForestModel forest;
  forest.trees.reserve(n_trees);
  for (uint32_t t = 0; t < n_trees; ++t) {
    std::vector<uint32_t> bootstrap(n);
    for (uint32_t i = 0; i < n; ++i) bootstrap[i] = static_cast<uint32_t>(rng.below(n));
    forest.trees.push_back(fit_tree(x, y, bootstrap, max_depth, min_samples_leaf, &rng, mtry));
  }
  return forest;
}

}  // namespace newstense::impl
