#include "newstense/select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "newstense/error.hpp"
#include "newstense/eval.hpp"

namespace newstense {

std::vector<double> chi2_scores(const FeatureMatrix& x, const std::vector<Label>& y) {
  const size_t n = x.rows();
  if (n == 0 || y.size() != n) throw Error("chi2_scores: matrix rows and labels must match");

  const uint32_t cols = x.cols();
  const uint32_t dense_off = x.sparse_width;
  std::vector<std::array<double, 2>> observed(cols, {0.0, 0.0});
  std::array<double, 2> class_count{0.0, 0.0};

  for (size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(y[i]);
    class_count[c] += 1.0;
    if (!x.sparse_rows.empty()) {
      for (const auto& [col, v] : x.sparse_rows[i]) observed[col][c] += v;
    }
    if (!x.dense_rows.empty()) {
      const auto& d = x.dense_rows[i];
      for (size_t j = 0; j < d.size(); ++j) observed[dense_off + j][c] += d[j];
    }
  }

  const double prior0 = class_count[0] / static_cast<double>(n);
  const double prior1 = class_count[1] / static_cast<double>(n);

  std::vector<double> scores(cols, 0.0);
  for (uint32_t j = 0; j < cols; ++j) {
    const double total = observed[j][0] + observed[j][1];
    if (total <= 0.0) continue;  // all-zero column carries no signal
    double s = 0.0;
    const std::array<double, 2> expected{prior0 * total, prior1 * total};
    for (int c = 0; c < 2; ++c) {
      if (expected[c] > 0.0) {
        const double d = observed[j][c] - expected[c];
        s += d * d / expected[c];
      }
    }
    scores[j] = s;
  }
  return scores;
}

nlohmann::json SelectionMask::to_json() const {
  return nlohmann::json{{"version", kSchemaVersion},
                        {"percentile", percentile},
                        {"kept_columns", kept_columns},
                        {"scores", scores}};
}

SelectionMask SelectionMask::from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kSchemaVersion)
    throw Error("selection mask: unsupported or missing version");
  SelectionMask m;
  m.percentile = j.at("percentile").get<double>();
  m.kept_columns = j.at("kept_columns").get<std::vector<uint32_t>>();
  m.scores = j.at("scores").get<std::vector<double>>();
  return m;
}

SelectionMask select_percentile(const std::vector<double>& scores, double percentile) {
  if (!(percentile > 0.0 && percentile <= 1.0))
    throw Error("select_percentile: percentile must be in (0, 1]");

  const size_t n = scores.size();
  // The small epsilon keeps exact products like 0.8 * 30000 from landing a
  // hair under the integer they represent.
  size_t keep = static_cast<size_t>(std::floor(percentile * static_cast<double>(n) + 1e-9));
  if (keep > n) keep = n;

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;  // ties at the cut keep the lower column id
  });

  SelectionMask mask;
  mask.percentile = percentile;
  mask.scores = scores;
  mask.kept_columns.assign(order.begin(), order.begin() + static_cast<long>(keep));
  std::sort(mask.kept_columns.begin(), mask.kept_columns.end());
  return mask;
}

FeatureMatrix apply_mask_sparse(const FeatureMatrix& x, const SelectionMask& mask) {
  for (uint32_t c : mask.kept_columns)
    if (c >= x.sparse_width) throw Error("apply_mask_sparse: mask column outside the sparse block");

  FeatureMatrix out;
  out.sparse_width = static_cast<uint32_t>(mask.kept_columns.size());
  out.dense_rows = x.dense_rows;
  out.sparse_rows.reserve(x.sparse_rows.size());
  for (const SparseVec& row : x.sparse_rows) {
    SparseVec mapped;
    for (const auto& [col, v] : row) {
      auto it = std::lower_bound(mask.kept_columns.begin(), mask.kept_columns.end(), col);
      if (it != mask.kept_columns.end() && *it == col)
        mapped.emplace_back(static_cast<uint32_t>(it - mask.kept_columns.begin()), v);
    }
    out.sparse_rows.push_back(std::move(mapped));
  }
  return out;
}

namespace {

// Pooled k-fold predictions for one fixed matrix (no per-fold refit of the
// representation; this screens feature blocks, it is not the final
// evaluation harness).
Metrics cv_pooled(const FeatureMatrix& x, const std::vector<Label>& y, const FoldPlan& folds,
                  const ModelSpec& model) {
  std::vector<Label> pooled(y.size(), Label::Past);
  for (int f = 0; f < folds.k; ++f) {
    const std::vector<uint32_t> train_ids = folds.train_indices(f);
    const std::vector<uint32_t> test_ids = folds.test_indices(f);
    std::vector<Label> y_train;
    y_train.reserve(train_ids.size());
    for (uint32_t r : train_ids) y_train.push_back(y[r]);

    TrainedModel m = train_model(model, x.gather(train_ids), y_train);
    Prediction p = predict(m, x.gather(test_ids));
    for (size_t i = 0; i < test_ids.size(); ++i) pooled[test_ids[i]] = p.labels[i];
  }
  return evaluate(pooled, y);
}

FeatureMatrix with_dense_block(const FeatureMatrix& base,
                               const std::vector<std::vector<float>>& dense_rows,
                               const std::vector<int>& cols) {
  FeatureMatrix m;
  m.sparse_width = base.sparse_width;
  m.sparse_rows = base.sparse_rows;
  m.dense_rows.reserve(dense_rows.size());
  for (const auto& row : dense_rows) {
    std::vector<float> sub;
    sub.reserve(cols.size());
    for (int c : cols) sub.push_back(row[static_cast<size_t>(c)]);
    m.dense_rows.push_back(std::move(sub));
  }
  return m;
}

}  // namespace

std::string CombinatorialResult::to_csv() const {
  std::string out = "candidate,macro_precision,past_precision,future_precision,retained\n";
  char buf[256];
  std::snprintf(buf, sizeof(buf), "BASE,%.6f,%.6f,%.6f,\n", base_macro_precision,
                base_past_precision, base_future_precision);
  out += buf;
  for (const CandidateReport& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%d\n", r.name.c_str(), r.macro_precision,
                  r.past_precision, r.future_precision, r.retained ? 1 : 0);
    out += buf;
  }
  return out;
}

CombinatorialResult combinatorial_select(const FeatureMatrix& ngram_base,
                                         const std::vector<std::vector<float>>& dense_rows,
                                         const std::vector<CandidateSpec>& candidates,
                                         const std::vector<Label>& y, const FoldPlan& folds,
                                         const ModelSpec& model, double gap_tolerance) {
  if (dense_rows.size() != ngram_base.rows())
    throw Error("combinatorial_select: dense rows must match the base matrix");

  CombinatorialResult result;
  const Metrics base = cv_pooled(ngram_base, y, folds, model);
  result.base_macro_precision = base.macro_precision();
  result.base_past_precision = base.precision(Label::Past);
  result.base_future_precision = base.precision(Label::Future);
  const double base_gap = std::abs(result.base_past_precision - result.base_future_precision);

  for (size_t i = 0; i < candidates.size(); ++i) {
    const CandidateSpec& cand = candidates[i];
    const FeatureMatrix m = with_dense_block(ngram_base, dense_rows, cand.dense_cols);
    const Metrics mt = cv_pooled(m, y, folds, model);

    CandidateReport row;
    row.name = cand.name;
    row.macro_precision = mt.macro_precision();
    row.past_precision = mt.precision(Label::Past);
    row.future_precision = mt.precision(Label::Future);
    const double gap = std::abs(row.past_precision - row.future_precision);
    row.retained = row.macro_precision > result.base_macro_precision &&
                   gap <= base_gap + gap_tolerance;
    if (row.retained) result.retained.push_back(static_cast<uint32_t>(i));
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace newstense
