#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/corpus.hpp"
#include "newstense/features.hpp"
#include "newstense/matrix.hpp"
#include "newstense/models.hpp"

namespace newstense {

// Chi-squared score per column for count-valued features: per-class column
// sums are compared against the totals split by class priors. Columns that
// are zero everywhere score 0.
std::vector<double> chi2_scores(const FeatureMatrix& x, const std::vector<Label>& y);

struct SelectionMask {
  static constexpr int kSchemaVersion = 1;

  std::vector<uint32_t> kept_columns;  // ascending original column ids
  std::vector<double> scores;          // one per original column
  double percentile = 0.8;

  nlohmann::json to_json() const;
  static SelectionMask from_json(const nlohmann::json& j);
};

// Keeps the floor(percentile * n) highest-scoring columns, percentile in
// (0, 1]. Ties at the cut are broken toward the lower column index.
SelectionMask select_percentile(const std::vector<double>& scores, double percentile);

// Applies a mask to the sparse block of a matrix: kept columns are
// renumbered 0..k-1 in ascending original order; the dense tail is passed
// through unchanged.
FeatureMatrix apply_mask_sparse(const FeatureMatrix& x, const SelectionMask& mask);

// --- one-vs-rest candidate screening --------------------------------------

struct CandidateReport {
  std::string name;
  double macro_precision = 0.0;
  double past_precision = 0.0;
  double future_precision = 0.0;
  bool retained = false;
};

struct CombinatorialResult {
  double base_macro_precision = 0.0;
  double base_past_precision = 0.0;
  double base_future_precision = 0.0;
  std::vector<CandidateReport> rows;   // one per candidate, input order
  std::vector<uint32_t> retained;      // indices into the candidate list

  std::string to_csv() const;
};

// Screens each candidate dense-column block one at a time against the n-gram
// base: cross-validates base+candidate with the given model and keeps the
// candidate iff macro precision improves over the base run and the
// Past/Future precision gap does not widen by more than gap_tolerance.
// Candidates are judged independently, so the outcome does not depend on
// their order.
CombinatorialResult combinatorial_select(const FeatureMatrix& ngram_base,
                                         const std::vector<std::vector<float>>& dense_rows,
                                         const std::vector<CandidateSpec>& candidates,
                                         const std::vector<Label>& y, const FoldPlan& folds,
                                         const ModelSpec& model, double gap_tolerance = 0.01);

}  // namespace newstense
