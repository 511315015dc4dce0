#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/assets.hpp"
#include "newstense/corpus.hpp"
#include "newstense/eval.hpp"
#include "newstense/features.hpp"
#include "newstense/lexicon.hpp"
#include "newstense/lingua.hpp"
#include "newstense/matrix.hpp"
#include "newstense/models.hpp"
#include "newstense/normalize.hpp"
#include "newstense/select.hpp"

namespace newstense {

// Word lists and verb tables loaded from one data directory:
// surnames.txt, cities.txt, abbreviations.txt, assets.txt,
// referential_nouns.txt, verbs.txt, irregular_verbs.tsv.
struct Resources {
  LexiconSet lexicons;
  Lingua lingua;

  static Resources load(const std::filesystem::path& data_dir);
};

// One document after the full tagging chain: numeric normalization, entity
// and asset tagging, referential resolution, segmentation, verb groups and
// both link analyses.
struct ProcessedDoc {
  TaggedDocument doc;
  LinguaAnalysis analysis;
  NormalizeStats norm_stats;
  AssetTagStats asset_stats;
  int referential_resolved = 0;
};

ProcessedDoc preprocess(const std::string& content, const std::string& main_ticker,
                        const Resources& res);

// Which blocks the assembled matrix carries beyond the n-grams.
enum class FeatureMode {
  Ngrams,          // n-gram blocks only
  NgramsNumTemp,   // + the 2 numerical and 25 temporal features
  NgramsSelected,  // + only the numerical/temporal candidates listed in settings
};
std::string_view feature_mode_name(FeatureMode m);
FeatureMode feature_mode_from_name(std::string_view name);

struct PipelineSettings {
  NgramConfig ngram;  // one configuration shared by every enabled family
  // Enabled n-gram families in block order (CharGrams, WordTokens, WordGrams).
  std::array<bool, 3> families{true, true, true};
  FeatureMode mode = FeatureMode::Ngrams;
  // Fraction of pooled n-gram columns kept by the chi-squared filter;
  // 1.0 keeps everything.
  double chi2_percentile = 0.8;
  // Candidate names (see temporal_candidates()) whose dense columns are
  // appended in NgramsSelected mode.
  std::vector<std::string> selected_candidates;
  // How much the Past/Future precision gap may widen before a screened
  // candidate is rejected (see combinatorial_select).
  double gap_tolerance = 0.01;
  ModelSpec model;
  uint64_t seed = 42;

  nlohmann::json to_json() const;
  static PipelineSettings from_json(const nlohmann::json& j);
};

// Feature assembly state, fitted on a document set: one vectorizer per
// enabled family (block order), the optional pooled chi-squared mask, and
// which dense-tail columns are appended.
struct FittedFeatures {
  std::vector<VectorizerModel> vectorizers;
  SelectionMask mask;  // over the pooled sparse block
  bool has_mask = false;
  std::vector<uint32_t> dense_cols;   // ascending indices into the dense tail
  std::vector<std::string> header;    // final column names

  nlohmann::json to_json() const;
  static FittedFeatures from_json(const nlohmann::json& j);
};

// A fitted end-to-end pipeline: feature assembly plus the trained classifier.
struct PipelineModel {
  static constexpr int kSchemaVersion = 1;

  PipelineSettings settings;
  FittedFeatures features;
  TrainedModel model;

  nlohmann::json to_json() const;
  static PipelineModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& file) const;
  static PipelineModel load(const std::filesystem::path& file);
};

FittedFeatures fit_features(const PipelineSettings& settings,
                            const std::vector<ProcessedDoc>& docs,
                            const std::vector<std::string>& doc_ids,
                            const std::vector<Label>& labels);

FeatureMatrix transform_features(const FittedFeatures& fitted,
                                 const std::vector<ProcessedDoc>& docs);

PipelineModel fit_pipeline(const PipelineSettings& settings, const Corpus& corpus,
                           const Resources& res);

// Label + signed margin (positive leans Future) for one new document, plus
// the dense temporal audit values.
struct PipelinePrediction {
  Label label = Label::Past;
  double margin = 0.0;
  ProcessedDoc processed;
  std::vector<float> dense;  // full dense tail, kDenseWidth values
};

PipelinePrediction predict_pipeline(const PipelineModel& model, const std::string& content,
                                    const std::string& main_ticker, const Resources& res);

std::vector<ProcessedDoc> preprocess_corpus(const Corpus& corpus, const Resources& res);

// K-fold cross-validation with per-fold refitting of vectorizers and the
// chi-squared mask on the training split only. Returns the pooled held-out
// predictions (corpus order) and the report row.
struct CvOutcome {
  EvalRow row;
  std::vector<Label> pooled;
  // Per fold: the document ids the vectorizers were fitted on (for the
  // no-leakage assertion in tests).
  std::vector<std::vector<std::string>> fold_fit_ids;
};

// jobs > 1 runs folds on that many worker threads; all outputs except the
// wall-clock timings are identical to a sequential run.
CvOutcome cross_validate(const PipelineSettings& settings, const Corpus& corpus,
                         const Resources& res, const FoldPlan& folds, std::string row_name = "",
                         int jobs = 1);

// Same, over already preprocessed documents (preprocessing is per-document
// and fold-independent, so it can be shared across rows).
CvOutcome cross_validate_processed(const PipelineSettings& settings,
                                   const std::vector<ProcessedDoc>& docs,
                                   const std::vector<std::string>& ids,
                                   const std::vector<Label>& labels, const FoldPlan& folds,
                                   std::string row_name = "", int jobs = 1);

}  // namespace newstense
