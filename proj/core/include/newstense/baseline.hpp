#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "newstense/corpus.hpp"
#include "newstense/eval.hpp"
#include "newstense/lexicon.hpp"
#include "newstense/lingua.hpp"
#include "newstense/pipeline.hpp"
#include "newstense/text.hpp"

namespace newstense {

// Financial vocabulary grouped into nine fixed categories. The word lists
// are user-replaceable; the category names are not.
struct SemanticTree {
  std::map<std::string, WordSet> categories;

  // JSON object mapping category name -> word array. The file must define
  // exactly the nine known categories; words are lowercased/accent-folded.
  static SemanticTree load(const std::filesystem::path& file);

  // Membership across all categories; expects a folded lowercase word.
  bool contains(std::string_view word) const;
};

struct TenseTally {
  int past = 0;
  int present = 0;
  int future = 0;
  // A tallied Present verb group was followed by a NUM or PERC tag before
  // the next verb group (or sentence end).
  bool present_followed_by_number = false;
};

// Sentence indices kept for classification, ascending. If any title word is
// financial vocabulary, sentences mentioning the vocabulary or the main
// ticker are kept; otherwise sentences are scored by mean token TF-IDF,
// normalized by the maximum, and kept at >= 0.75. An empty result falls
// back to every sentence.
std::vector<uint32_t> extractive_summary(const TaggedDocument& doc, const std::string& title,
                                         const SemanticTree& tree);

// Tallies verb-group tenses over the summary sentences. Per sentence:
// dependency-linked groups; if none, proximity-linked groups; if still
// none, the first group of each comma-separated part.
TenseTally count_tenses(const TaggedDocument& doc, const std::vector<uint32_t>& summary,
                        const LinguaAnalysis& analysis);

// Total decision function over tallies.
Label classify_rules(const TenseTally& t);

struct BaselineItemTrace {
  std::vector<uint32_t> summary;
  TenseTally tally;
  Label prediction = Label::Past;
};

struct BaselineOutput {
  std::vector<BaselineItemTrace> items;
  std::vector<Label> predictions;
  Metrics metrics;
};

// End-to-end rule-based run. The first sentence of each document stands in
// for its title (the corpus format carries no separate headline).
BaselineOutput run_baseline(const Corpus& corpus, const SemanticTree& tree, const Resources& res);

}  // namespace newstense
