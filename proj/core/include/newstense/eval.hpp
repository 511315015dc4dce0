#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/corpus.hpp"

namespace newstense {

// Binary confusion matrix plus the derived rates. Zero-denominator cases
// (e.g. precision of a class that was never predicted) score 0 rather than
// NaN so macro averages stay well-defined.
struct Metrics {
  std::array<std::array<uint32_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};  // [gold][pred]

  uint32_t total() const;
  double accuracy() const;
  double precision(Label c) const;
  double recall(Label c) const;
  double macro_precision() const;
  double macro_recall() const;

  nlohmann::json to_json() const;
};

// Throws Error if sizes differ or the vectors are empty.
Metrics evaluate(const std::vector<Label>& predicted, const std::vector<Label>& gold);

// One classifier's pooled cross-validation outcome.
struct EvalRow {
  std::string name;
  Metrics metrics;
  double train_seconds = 0.0;  // summed over folds
  double test_seconds = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  // Wall-clock columns are useful interactively but break byte-identical
  // output comparisons, so they can be switched off.
  bool include_timings = true;

  std::string render_text() const;
  nlohmann::json to_json() const;
};

}  // namespace newstense
