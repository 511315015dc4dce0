#include "newstense/corpus.hpp"

#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "newstense/error.hpp"
#include "newstense/rng.hpp"

namespace newstense {

std::string_view label_name(Label l) { return l == Label::Past ? "past" : "future"; }

Label label_from_name(std::string_view name) {
  std::string low = lower_ascii(name);
  if (low == "past") return Label::Past;
  if (low == "future") return Label::Future;
  throw Error("unknown temporality label: '" + std::string(name) + "' (expected past or future)");
}

Corpus Corpus::load_jsonl(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open corpus: " + file.string());
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(file.string() + ":" + std::to_string(line_no) + ": bad JSON: " + e.what());
    }
    auto field = [&](const char* name) -> std::string {
      if (!row.contains(name) || !row[name].is_string())
        throw Error(file.string() + ":" + std::to_string(line_no) + ": missing field '" +
                    name + "'");
      return row[name].get<std::string>();
    };
    NewsItem item;
    item.id = field("id");
    item.content = field("content");
    item.ticker = field("ticker");
    item.source = field("source");
    try {
      item.temporality = label_from_name(field("temporality"));
    } catch (const Error& e) {
      throw Error(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (item.content.empty() || item.ticker.empty())
      throw Error(file.string() + ":" + std::to_string(line_no) + ": empty content or ticker");
    if (!seen_ids.insert(item.id).second)
      throw Error(file.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                  item.id + "'");
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

void Corpus::save_jsonl(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw Error("cannot write corpus: " + file.string());
  for (const NewsItem& item : items) {
    nlohmann::ordered_json row;
    row["id"] = item.id;
    row["ticker"] = item.ticker;
    row["source"] = item.source;
    row["temporality"] = std::string(label_name(item.temporality));
    row["content"] = item.content;
    out << row.dump() << "\n";
  }
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.temporality);
  return out;
}

DistributionSummary class_distribution(const Corpus& corpus, const Lingua& lingua) {
  if (corpus.items.empty()) throw Error("class_distribution: empty corpus");
  DistributionSummary summary;
  summary.total = corpus.items.size();

  std::array<std::vector<double>, 2> sentences, words;
  for (const NewsItem& item : corpus.items) {
    TaggedDocument doc = tokenize(item.content);
    lingua.segment(doc);
    size_t word_count = 0;
    bool in_run = false;
    for (char c : item.content) {
      bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
      if (!ws && !in_run) ++word_count;
      in_run = !ws;
    }
    size_t li = static_cast<size_t>(item.temporality);
    sentences[li].push_back(static_cast<double>(doc.sentences.size()));
    words[li].push_back(static_cast<double>(word_count));
  }

  auto mean_std = [](const std::vector<double>& v, double& mean, double& std_out) {
    mean = 0;
    std_out = 0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    std_out = std::sqrt(ss / static_cast<double>(v.size()));
  };

  for (size_t li = 0; li < 2; ++li) {
    ClassStats& s = summary.per_label[li];
    s.count = sentences[li].size();
    mean_std(sentences[li], s.sentences_mean, s.sentences_std);
    mean_std(words[li], s.words_mean, s.words_std);
  }
  return summary;
}

std::vector<uint32_t> FoldPlan::test_indices(uint32_t fold) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<uint32_t> FoldPlan::train_indices(uint32_t fold) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan stratified_folds(const std::vector<Label>& labels, int k, uint64_t seed) {
  if (k < 2) throw Error("stratified_folds: k must be at least 2");
  std::array<std::vector<uint32_t>, 2> by_class;
  for (uint32_t i = 0; i < labels.size(); ++i)
    by_class[static_cast<size_t>(labels[i])].push_back(i);
  for (size_t c = 0; c < 2; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < static_cast<size_t>(k))
      throw Error("stratified_folds: class '" +
                  std::string(label_name(static_cast<Label>(c))) + "' has fewer than k items");
  }

  FoldPlan plan;
  plan.k = k;
  plan.assignment.assign(labels.size(), 0);
  for (size_t c = 0; c < 2; ++c) {
    Rng rng(seed + 0x1000003ull * (c + 1));
    rng.shuffle(by_class[c]);
    for (size_t j = 0; j < by_class[c].size(); ++j)
      plan.assignment[by_class[c][j]] = static_cast<uint32_t>(j % static_cast<size_t>(k));
  }
  return plan;
}

}  // namespace newstense
