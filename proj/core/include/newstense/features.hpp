#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "newstense/lingua.hpp"
#include "newstense/text.hpp"

namespace newstense {

// Sparse count vector: (column, value) pairs sorted by column.
using SparseVec = std::vector<std::pair<uint32_t, float>>;

enum class NgramFamily : uint8_t { CharGrams = 0, WordTokens = 1, WordGrams = 2 };
std::string_view family_name(NgramFamily f);  // "CHAR_GRAMS", ...
NgramFamily family_from_name(std::string_view name);

struct NgramConfig {
  int n_min = 2;
  int n_max = 4;
  // Grams present in more than this fraction of documents are dropped.
  double max_df_ratio = 0.30;
  // Minimum document frequency: values >= 1 are absolute counts, values in
  // (0,1) are fractions of the corpus, 0 disables the filter.
  double min_df = 0;
  // Keep at most this many grams (top by total count, ties to the
  // lexicographically smaller gram); <= 0 means unlimited.
  int max_features = 10000;
};

nlohmann::json ngram_config_to_json(const NgramConfig& c);
NgramConfig ngram_config_from_json(const nlohmann::json& j);

// A fitted n-gram family. Gram extraction is byte-based over the scrubbed
// text. CharGrams slide over the whole string (spaces included); WordTokens
// pads each whitespace word with one space per side and slides only inside
// the padded word (words shorter than n-2 bytes yield no size-n grams);
// WordGrams joins n consecutive words with single spaces.
struct VectorizerModel {
  NgramFamily family = NgramFamily::CharGrams;
  NgramConfig config;
  std::vector<std::string> vocabulary;               // sorted; position = column
  std::unordered_map<std::string, uint32_t> index;   // gram -> column
  std::vector<std::string> fit_source_ids;           // audit: docs seen at fit time

  nlohmann::json to_json() const;
  static VectorizerModel from_json(const nlohmann::json& j);
};

// Enumerate every gram occurrence of the family in a scrubbed text.
std::vector<std::string> extract_ngrams(const std::string& text, NgramFamily family,
                                        int n_min, int n_max);

// source_ids, when given, must parallel texts; they are recorded on the
// model so evaluation can assert no test document leaked into fitting.
VectorizerModel fit_vectorizer(const std::vector<std::string>& texts, NgramFamily family,
                               const NgramConfig& config,
                               const std::vector<std::string>& source_ids = {});

SparseVec transform_ngrams(const std::string& text, const VectorizerModel& model);

// (NUM tag count, PERC tag count); DATE counts in neither.
std::pair<int, int> numerical_features(const TaggedDocument& doc);

// Majority-vote outcome of one analysis family, encoded 0-3.
enum : int { kGlobalNone = 0, kGlobalPast = 1, kGlobalPresent = 2, kGlobalFuture = 3 };
std::string_view global_name(int code);

struct TemporalFeatures {
  // Link counters indexed by Tense (Present, Past, Future). A verb group
  // linked by several mentions counts once per family.
  std::array<int, 3> dep_sub{};
  std::array<int, 3> dep_sub_obj{};
  std::array<int, 3> prox_sub{};
  std::array<int, 3> prox_sub_obj{};
  // Majority tense per analysis in the order dep_sub, dep_sub_obj,
  // prox_sub, prox_sub_obj; ties resolved Future > Past > Present.
  std::array<int, 4> global_code{};
  // partition[third][tense]: all verb groups, bucketed by sentence third
  // (boundaries at ceil(n/3) and ceil(2n/3) sentences).
  std::array<std::array<int, 3>, 3> partition{};
};

TemporalFeatures temporal_features(const TaggedDocument& doc,
                                   const std::vector<VerbGroup>& groups,
                                   const std::vector<TenseLink>& dep_links,
                                   const std::vector<TenseLink>& prox_links);

// Dense tail of the assembled vector: NUM, PERC, then the temporal features
// in report order with each GLOBAL one-hot over (None, Past, Present,
// Future). Always kDenseWidth values.
inline constexpr int kDenseWidth = 39;
std::vector<float> assemble_dense(int num_count, int perc_count, const TemporalFeatures& t);

// Column names for the dense tail (one-hot columns are "NAME=Value").
const std::vector<std::string>& dense_feature_names();

// The 27 numerical+temporal features as selection candidates: name plus the
// dense columns that move together (GLOBALs own their 4 one-hot columns).
struct CandidateSpec {
  std::string name;
  std::vector<int> dense_cols;
};
const std::vector<CandidateSpec>& temporal_candidates();

}  // namespace newstense
