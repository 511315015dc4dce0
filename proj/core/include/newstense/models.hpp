#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/corpus.hpp"
#include "newstense/matrix.hpp"

namespace newstense {

// Classifier description: which algorithm, its hyperparameters, and the seed
// that makes any randomized part reproducible. Hyperparameters are kept in an
// ordered map so serialization is deterministic.
struct ModelSpec {
  enum class Kind { ZeroR = 0, DecisionTree = 1, RandomForest = 2, LinearSVC = 3 };

  Kind kind = Kind::ZeroR;
  std::map<std::string, double> hyper;
  uint64_t seed = 42;

  double get(const std::string& name, double fallback) const {
    auto it = hyper.find(name);
    return it == hyper.end() ? fallback : it->second;
  }
  // Relative training cost; used to break accuracy ties in favor of the
  // cheaper model.
  int cost_rank() const { return static_cast<int>(kind); }

  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
};

const char* model_kind_name(ModelSpec::Kind k);                 // "zeror" | "dt" | "rf" | "svc"
ModelSpec::Kind model_kind_from_name(const std::string& name);  // throws Error on unknown

// --- trained model payloads ---------------------------------------------

struct ZeroRModel {
  std::array<uint32_t, 2> class_counts{0, 0};  // indexed by Label
  Label majority = Label::Future;              // ties go to Future
};

struct TreeNode {
  int32_t feature = -1;  // -1 marks a leaf
  float threshold = 0.0f;
  int32_t left = -1;   // rows with value <= threshold
  int32_t right = -1;  // rows with value >  threshold
  std::array<uint32_t, 2> counts{0, 0};
};

struct DecisionTreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root (when non-empty)
  Label predict_row(const FeatureMatrix& x, size_t row) const;
  // Fraction of Future training rows at the leaf this row lands in.
  double future_share(const FeatureMatrix& x, size_t row) const;
};

struct ForestModel {
  std::vector<DecisionTreeModel> trees;
};

struct SvcModel {
  std::vector<float> weights;  // one per feature column
  float bias = 0.0f;
  uint32_t epochs_run = 0;
  double final_objective = 0.0;
  // Objective value after each accepted descent step; non-increasing by
  // construction. Kept in memory only (not serialized).
  std::vector<double> objective_trace;
  double margin_row(const FeatureMatrix& x, size_t row) const;
};

struct TrainedModel {
  static constexpr int kSchemaVersion = 1;

  ModelSpec spec;
  std::vector<std::string> feature_header;  // column names, sparse block first
  std::variant<ZeroRModel, DecisionTreeModel, ForestModel, SvcModel> payload;

  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
};

// Labels plus a signed score per row: positive leans Future, negative leans
// Past. For the SVC this is the raw margin; for trees/forests a vote share
// mapped to [-1, 1]; for ZeroR a constant +/-1.
struct Prediction {
  std::vector<Label> labels;
  std::vector<double> margins;
};

// Recognized hyperparameters (others are ignored):
//   dt:  max_depth (default 10; <= 0 means unlimited), min_samples_leaf (1)
//   rf:  trees (51), max_depth (10), min_samples_leaf (1)
//   svc: lambda (0.1), tol (1e-4), max_epochs (1000)
TrainedModel train_model(const ModelSpec& spec, const FeatureMatrix& x, const std::vector<Label>& y,
                         std::vector<std::string> feature_header = {});

Prediction predict(const TrainedModel& model, const FeatureMatrix& x);

// --- hyperparameter grid search ------------------------------------------

struct GridRow {
  std::map<std::string, double> params;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

struct GridResult {
  ModelSpec best;
  size_t best_index = 0;
  std::vector<GridRow> rows;
};

// Exhaustive Cartesian product over the given dimensions, in the order
// listed (first dimension outermost). Each combination is scored by k-fold
// cross-validation mean accuracy; ties keep the earliest combination.
GridResult grid_search(const ModelSpec& base,
                       const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                       const FeatureMatrix& x, const std::vector<Label>& y, const FoldPlan& folds);

}  // namespace newstense
