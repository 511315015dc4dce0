#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "newstense/lingua.hpp"

namespace newstense {

enum class Label : uint8_t { Past = 0, Future = 1 };
std::string_view label_name(Label l);          // "past" / "future"
Label label_from_name(std::string_view name);  // case-insensitive; throws on junk

struct NewsItem {
  std::string id;
  std::string content;
  std::string ticker;  // main asset the item is about
  std::string source;  // publisher
  Label temporality = Label::Past;
};

struct Corpus {
  static constexpr int kSchemaVersion = 1;
  std::vector<NewsItem> items;

  // JSONL, one object per line with fields id/content/ticker/source/
  // temporality. Rejects missing fields, duplicate ids and unknown labels,
  // reporting the offending line number.
  static Corpus load_jsonl(const std::filesystem::path& file);
  void save_jsonl(const std::filesystem::path& file) const;

  std::vector<Label> labels() const;
};

struct ClassStats {
  size_t count = 0;
  double sentences_mean = 0, sentences_std = 0;  // population std
  double words_mean = 0, words_std = 0;          // whitespace tokens
};

struct DistributionSummary {
  std::array<ClassStats, 2> per_label;  // indexed by Label
  size_t total = 0;
};

// Sentence counts use the library's own segmentation; word counts are
// whitespace runs of the raw content.
DistributionSummary class_distribution(const Corpus& corpus, const Lingua& lingua);

struct FoldPlan {
  int k = 0;
  std::vector<uint32_t> assignment;  // item position -> fold index

  std::vector<uint32_t> test_indices(uint32_t fold) const;
  std::vector<uint32_t> train_indices(uint32_t fold) const;
};

// Deterministic stratified k-fold: per-class Fisher-Yates shuffle with the
// given seed, then round-robin assignment. Per-fold class counts stay within
// one item of exact proportionality.
FoldPlan stratified_folds(const std::vector<Label>& labels, int k, uint64_t seed);

}  // namespace newstense
