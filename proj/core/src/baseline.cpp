#include "newstense/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "detail.hpp"
#include "newstense/error.hpp"

namespace newstense {

namespace {

constexpr std::array<std::string_view, 9> kCategories = {
    "commerce", "enterprise", "finance", "banking", "exchange",
    "money",    "insurance",  "tax",     "industry"};

// Term used for frequency statistics: tags count as their tag name, words
// as their folded base form, punctuation not at all.
std::string term_of(const Token& t) {
  if (t.kind != TagKind::None) return std::string(tag_name(t.kind));
  if (is_punct(t)) return "";
  return detail::word_base(t);
}

}  // namespace

SemanticTree SemanticTree::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read semantic tree file: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("semantic tree file " + file.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw Error("semantic tree file must be a JSON object");

  SemanticTree tree;
  for (std::string_view name : kCategories) {
    const std::string key(name);
    if (!j.contains(key))
      throw Error("semantic tree is missing the '" + key + "' category");
    WordSet words;
    for (const auto& w : j.at(key))
      words.insert(lower_ascii(fold_accents(w.get<std::string>())));
    tree.categories[key] = std::move(words);
  }
  if (j.size() != kCategories.size())
    throw Error("semantic tree defines unknown categories (expected exactly the nine known ones)");
  return tree;
}

bool SemanticTree::contains(std::string_view word) const {
  const std::string key(word);
  for (const auto& [_, words] : categories)
    if (words.count(key) != 0) return true;
  return false;
}

std::vector<uint32_t> extractive_summary(const TaggedDocument& doc, const std::string& title,
                                         const SemanticTree& tree) {
  const size_t ns = doc.sentences.size();
  if (ns == 0) return {};

  bool lexicon_path = false;
  const TaggedDocument title_doc = tokenize(title);
  for (const Token& t : title_doc.tokens) {
    if (is_word(t) && tree.contains(detail::word_base(t))) {
      lexicon_path = true;
      break;
    }
  }

  std::vector<uint32_t> keep;
  if (lexicon_path) {
    for (uint32_t s = 0; s < ns; ++s) {
      for (uint32_t k = doc.sentences[s].first; k < doc.sentences[s].second; ++k) {
        const Token& t = doc.tokens[k];
        if (t.kind == TagKind::Ticker || (is_word(t) && tree.contains(detail::word_base(t)))) {
          keep.push_back(s);
          break;
        }
      }
    }
  } else {
    // Sentence score = mean over token occurrences of tf*idf, where tf is
    // the within-sentence relative frequency and idf is smoothed over
    // sentences; scores are normalized by the maximum.
    std::vector<std::vector<std::string>> terms(ns);
    std::map<std::string, int> df;
    for (uint32_t s = 0; s < ns; ++s) {
      std::set<std::string> seen;
      for (uint32_t k = doc.sentences[s].first; k < doc.sentences[s].second; ++k) {
        std::string term = term_of(doc.tokens[k]);
        if (term.empty()) continue;
        seen.insert(term);
        terms[s].push_back(std::move(term));
      }
      for (const std::string& t : seen) df[t] += 1;
    }

    std::vector<double> score(ns, 0.0);
    double max_score = 0.0;
    for (uint32_t s = 0; s < ns; ++s) {
      if (terms[s].empty()) continue;
      std::map<std::string, int> count;
      for (const std::string& t : terms[s]) count[t] += 1;
      const double len = static_cast<double>(terms[s].size());
      double sum = 0.0;
      for (const auto& [term, c] : count) {
        const double tf = c / len;
        const double idf =
            std::log((1.0 + static_cast<double>(ns)) / (1.0 + df[term])) + 1.0;
        sum += c * tf * idf;  // every occurrence contributes its term's tf*idf
      }
      score[s] = sum / len;
      max_score = std::max(max_score, score[s]);
    }
    if (max_score > 0.0)
      for (uint32_t s = 0; s < ns; ++s)
        if (score[s] / max_score >= 0.75) keep.push_back(s);
  }

  if (keep.empty()) {
    keep.resize(ns);
    for (uint32_t s = 0; s < ns; ++s) keep[s] = s;
  }
  return keep;
}

TenseTally count_tenses(const TaggedDocument& doc, const std::vector<uint32_t>& summary,
                        const LinguaAnalysis& analysis) {
  TenseTally tally;
  std::vector<uint32_t> tallied;

  for (uint32_t s : summary) {
    std::set<uint32_t> chosen;
    for (const TenseLink& l : analysis.dependency)
      if (analysis.groups[l.group].sentence == s) chosen.insert(l.group);
    if (chosen.empty())
      for (const TenseLink& l : analysis.proximity)
        if (analysis.groups[l.group].sentence == s) chosen.insert(l.group);
    if (chosen.empty()) {
      // No asset-linked verb anywhere: fall back to the first verb group of
      // each comma-separated part of the sentence.
      const Span span = doc.sentences[s];
      uint32_t part_begin = span.first;
      auto first_group_in = [&](uint32_t lo, uint32_t hi) {
        for (uint32_t g = 0; g < analysis.groups.size(); ++g)
          if (analysis.groups[g].begin >= lo && analysis.groups[g].begin < hi) {
            chosen.insert(g);
            return;
          }
      };
      for (uint32_t k = span.first; k < span.second; ++k) {
        if (doc.tokens[k].text == ",") {
          first_group_in(part_begin, k);
          part_begin = k + 1;
        }
      }
      first_group_in(part_begin, span.second);
    }
    for (uint32_t g : chosen) {
      switch (analysis.groups[g].tense) {
        case Tense::Past: tally.past += 1; break;
        case Tense::Present: tally.present += 1; break;
        case Tense::Future: tally.future += 1; break;
      }
      tallied.push_back(g);
    }
  }

  for (uint32_t gid : tallied) {
    const VerbGroup& g = analysis.groups[gid];
    if (g.tense != Tense::Present) continue;
    uint32_t window_end = doc.sentences[g.sentence].second;
    for (const VerbGroup& h : analysis.groups)
      if (h.sentence == g.sentence && h.begin >= g.end)
        window_end = std::min(window_end, h.begin);
    for (uint32_t k = g.end; k < window_end; ++k) {
      const TagKind kind = doc.tokens[k].kind;
      if (kind == TagKind::Num || kind == TagKind::Perc) {
        tally.present_followed_by_number = true;
        break;
      }
    }
    if (tally.present_followed_by_number) break;
  }
  return tally;
}

Label classify_rules(const TenseTally& t) {
  if (t.future > 0 || t.past > 0) {
    const bool future_majority = t.future >= t.past;
    const bool outweighed_past = t.past > 1 && t.present + t.future > t.past;
    const bool present_dominant = t.present >= 3 * t.past;
    return (future_majority || outweighed_past || present_dominant) ? Label::Future : Label::Past;
  }
  // No explicit past or future reference: a present statement quantified by
  // a number reads as reporting (past), otherwise as outlook (future).
  return t.present_followed_by_number ? Label::Past : Label::Future;
}

BaselineOutput run_baseline(const Corpus& corpus, const SemanticTree& tree, const Resources& res) {
  BaselineOutput out;
  out.items.reserve(corpus.items.size());
  out.predictions.reserve(corpus.items.size());

  for (const NewsItem& item : corpus.items) {
    const ProcessedDoc pd = preprocess(item.content, item.ticker, res);

    std::string title;
    if (!pd.doc.sentences.empty() && pd.doc.sentences.front().second > pd.doc.sentences.front().first) {
      const Span s0 = pd.doc.sentences.front();
      const uint32_t b = pd.doc.tokens[s0.first].begin;
      const uint32_t e = pd.doc.tokens[s0.second - 1].end;
      title = pd.doc.original.substr(b, e - b);
    }

    BaselineItemTrace trace;
    trace.summary = extractive_summary(pd.doc, title, tree);
    trace.tally = count_tenses(pd.doc, trace.summary, pd.analysis);
    trace.prediction = classify_rules(trace.tally);
    out.predictions.push_back(trace.prediction);
    out.items.push_back(std::move(trace));
  }

  out.metrics = evaluate(out.predictions, corpus.labels());
  return out;
}

}  // namespace newstense
