#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/pipeline.hpp"

namespace newstense {

// Vectorizer tuning ranges; the defaults enumerate 7*5*5*4 = 700 candidate
// configurations.
struct VectorizerGrid {
  std::vector<double> max_df{0.3, 0.35, 0.4, 0.5, 0.7, 0.8, 1.0};
  std::vector<double> min_df{0, 0.002, 0.005, 0.008, 0.01};
  std::vector<std::pair<int, int>> ngram_range{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 4}};
  std::vector<int> max_features{10000, 20000, 30000, 0};  // 0 = uncapped
};

// Full Cartesian product in the order max_df, min_df, ngram_range,
// max_features (first dimension outermost).
std::vector<NgramConfig> enumerate_vectorizer_grid(const VectorizerGrid& grid);

struct TuneRow {
  NgramConfig config;
  double accuracy = 0.0;  // pooled k-fold accuracy
};

struct TuneResult {
  std::vector<TuneRow> rows;  // grid enumeration order
  size_t best_index = 0;      // highest accuracy, ties to the earliest row

  std::string to_csv() const;
};

// Cross-validates every vectorizer configuration of the grid with the rest
// of the pipeline fixed.
TuneResult tune_vectorizer(const PipelineSettings& base, const VectorizerGrid& grid,
                           const std::vector<ProcessedDoc>& docs,
                           const std::vector<std::string>& ids, const std::vector<Label>& labels,
                           const FoldPlan& folds);

// Everything a CLI run needs. File paths resolve relative to the process
// working directory; outputs resolve relative to out_dir.
struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path data_dir = "data";
  std::filesystem::path semantic_tree;  // empty -> data_dir / "semantic_tree.json"
  std::filesystem::path out_dir = "out";
  int folds = 10;
  int jobs = 1;
  PipelineSettings pipeline;
  // Model hyperparameter grid, dimension order preserved from the file.
  std::vector<std::pair<std::string, std::vector<double>>> model_grid;
  VectorizerGrid tune_grid;

  std::filesystem::path semantic_tree_path() const {
    return semantic_tree.empty() ? data_dir / "semantic_tree.json" : semantic_tree;
  }

  // Accepts JSON (default) or a TOML subset (by .toml extension): key =
  // value pairs, [section] and [dotted.section] headers, strings, numbers,
  // booleans, inline arrays (nesting allowed), # comments.
  static RunConfig load(const std::filesystem::path& file);
  static RunConfig from_json(const nlohmann::ordered_json& j);
};

// Exposed for unit tests: parses the TOML subset into the equivalent JSON.
nlohmann::ordered_json toml_subset_to_json(const std::string& text);

}  // namespace newstense
