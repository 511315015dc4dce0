#include "newstense/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "newstense/error.hpp"

namespace newstense {

std::string_view family_name(NgramFamily f) {
  switch (f) {
    case NgramFamily::CharGrams: return "CHAR_GRAMS";
    case NgramFamily::WordTokens: return "WORD_TOKENS";
    case NgramFamily::WordGrams: return "WORD_GRAMS";
  }
  return "";
}

NgramFamily family_from_name(std::string_view name) {
  if (name == "CHAR_GRAMS") return NgramFamily::CharGrams;
  if (name == "WORD_TOKENS") return NgramFamily::WordTokens;
  if (name == "WORD_GRAMS") return NgramFamily::WordGrams;
  throw Error("unknown n-gram family: " + std::string(name));
}

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    size_t b = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > b) words.push_back(text.substr(b, i - b));
  }
  return words;
}

}  // namespace

std::vector<std::string> extract_ngrams(const std::string& text, NgramFamily family,
                                        int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) throw Error("bad n-gram range");
  std::vector<std::string> grams;
  switch (family) {
    case NgramFamily::CharGrams: {
      for (int n = n_min; n <= n_max; ++n) {
        if (text.size() < static_cast<size_t>(n)) break;
        for (size_t i = 0; i + n <= text.size(); ++i) grams.push_back(text.substr(i, n));
      }
      break;
    }
    case NgramFamily::WordTokens: {
      for (const std::string& w : split_ws(text)) {
        std::string padded = " " + w + " ";
        for (int n = n_min; n <= n_max; ++n) {
          if (padded.size() < static_cast<size_t>(n)) break;
          for (size_t i = 0; i + n <= padded.size(); ++i) grams.push_back(padded.substr(i, n));
        }
      }
      break;
    }
    case NgramFamily::WordGrams: {
      std::vector<std::string> words = split_ws(text);
      for (int n = n_min; n <= n_max; ++n) {
        if (words.size() < static_cast<size_t>(n)) break;
        for (size_t i = 0; i + n <= words.size(); ++i) {
          std::string g = words[i];
          for (size_t k = 1; k < static_cast<size_t>(n); ++k) g += " " + words[i + k];
          grams.push_back(std::move(g));
        }
      }
      break;
    }
  }
  return grams;
}

VectorizerModel fit_vectorizer(const std::vector<std::string>& texts, NgramFamily family,
                               const NgramConfig& config,
                               const std::vector<std::string>& source_ids) {
  if (texts.empty()) throw Error("fit_vectorizer: empty corpus");
  if (config.n_min < 1 || config.n_min > config.n_max)
    throw Error("fit_vectorizer: n_min must be in [1, n_max]");
  if (!source_ids.empty() && source_ids.size() != texts.size())
    throw Error("fit_vectorizer: source_ids must parallel texts");

  // Corpus-wide totals and document frequencies.
  std::map<std::string, int64_t> total;
  std::map<std::string, int32_t> docfreq;
  for (const std::string& text : texts) {
    std::vector<std::string> grams = extract_ngrams(text, family, config.n_min, config.n_max);
    std::set<std::string> distinct;
    for (auto& g : grams) {
      ++total[g];
      distinct.insert(std::move(g));
    }
    for (const auto& g : distinct) ++docfreq[g];
  }

  const double n_docs = static_cast<double>(texts.size());
  double min_df_count = config.min_df >= 1.0 ? config.min_df : config.min_df * n_docs;
  double max_df_count = config.max_df_ratio * n_docs;

  std::vector<std::pair<std::string, int64_t>> kept;
  for (const auto& [gram, count] : total) {
    double df = static_cast<double>(docfreq[gram]);
    if (df > max_df_count) continue;  // too common
    if (df < min_df_count) continue;  // too rare
    kept.emplace_back(gram, count);
  }

  if (config.max_features > 0 && kept.size() > static_cast<size_t>(config.max_features)) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    kept.resize(static_cast<size_t>(config.max_features));
  }

  VectorizerModel model;
  model.family = family;
  model.config = config;
  model.fit_source_ids = source_ids;
  model.vocabulary.reserve(kept.size());
  for (auto& [gram, count] : kept) model.vocabulary.push_back(std::move(gram));
  std::sort(model.vocabulary.begin(), model.vocabulary.end());
  for (uint32_t c = 0; c < model.vocabulary.size(); ++c) model.index[model.vocabulary[c]] = c;
  return model;
}

SparseVec transform_ngrams(const std::string& text, const VectorizerModel& model) {
  std::unordered_map<uint32_t, float> counts;
  for (const std::string& g :
       extract_ngrams(text, model.family, model.config.n_min, model.config.n_max)) {
    auto it = model.index.find(g);
    if (it != model.index.end()) counts[it->second] += 1.0f;
  }
  SparseVec out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json ngram_config_to_json(const NgramConfig& c) {
  return nlohmann::json{{"n_min", c.n_min},
                        {"n_max", c.n_max},
                        {"max_df_ratio", c.max_df_ratio},
                        {"min_df", c.min_df},
                        {"max_features", c.max_features}};
}

NgramConfig ngram_config_from_json(const nlohmann::json& j) {
  NgramConfig c;
  c.n_min = j.value("n_min", c.n_min);
  c.n_max = j.value("n_max", c.n_max);
  c.max_df_ratio = j.value("max_df_ratio", c.max_df_ratio);
  c.min_df = j.value("min_df", c.min_df);
  c.max_features = j.value("max_features", c.max_features);
  return c;
}

nlohmann::json VectorizerModel::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["family"] = std::string(family_name(family));
  j["config"] = ngram_config_to_json(config);
  j["vocabulary"] = vocabulary;
  j["fit_source_ids"] = fit_source_ids;
  return j;
}

VectorizerModel VectorizerModel::from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j["version"].get<int>() != 1)
    throw Error("unsupported vectorizer model version");
  VectorizerModel m;
  m.family = family_from_name(j.at("family").get<std::string>());
  m.config = ngram_config_from_json(j.at("config"));
  m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  if (j.contains("fit_source_ids"))
    m.fit_source_ids = j["fit_source_ids"].get<std::vector<std::string>>();
  for (uint32_t col = 0; col < m.vocabulary.size(); ++col) m.index[m.vocabulary[col]] = col;
  return m;
}

std::pair<int, int> numerical_features(const TaggedDocument& doc) {
  int num = 0, perc = 0;
  for (const Token& t : doc.tokens) {
    if (t.kind == TagKind::Num) ++num;
    if (t.kind == TagKind::Perc) ++perc;
  }
  return {num, perc};
}

std::string_view global_name(int code) {
  switch (code) {
    case kGlobalNone: return "None";
    case kGlobalPast: return "Past";
    case kGlobalPresent: return "Present";
    case kGlobalFuture: return "Future";
  }
  return "";
}

namespace {

// Distinct linked groups for one analysis under a role filter.
std::vector<uint32_t> linked_groups(const std::vector<TenseLink>& links, bool subject_only) {
  std::set<uint32_t> ids;
  for (const TenseLink& l : links) {
    if (subject_only && l.role != Role::Subject) continue;
    ids.insert(l.group);
  }
  return {ids.begin(), ids.end()};
}

std::array<int, 3> tense_counts(const std::vector<uint32_t>& ids,
                                const std::vector<VerbGroup>& groups) {
  std::array<int, 3> c{};
  for (uint32_t id : ids) ++c[static_cast<size_t>(groups[id].tense)];
  return c;
}

// Majority with the tie precedence Future > Past > Present; None if empty.
int majority_code(const std::array<int, 3>& c) {
  int present = c[static_cast<size_t>(Tense::Present)];
  int past = c[static_cast<size_t>(Tense::Past)];
  int future = c[static_cast<size_t>(Tense::Future)];
  if (present + past + future == 0) return kGlobalNone;
  if (future >= past && future >= present) return kGlobalFuture;
  if (past >= present) return kGlobalPast;
  return kGlobalPresent;
}

}  // namespace

TemporalFeatures temporal_features(const TaggedDocument& doc,
                                   const std::vector<VerbGroup>& groups,
                                   const std::vector<TenseLink>& dep_links,
                                   const std::vector<TenseLink>& prox_links) {
  TemporalFeatures t;
  auto dep_s = tense_counts(linked_groups(dep_links, true), groups);
  auto dep_so = tense_counts(linked_groups(dep_links, false), groups);
  auto prox_s = tense_counts(linked_groups(prox_links, true), groups);
  auto prox_so = tense_counts(linked_groups(prox_links, false), groups);
  t.dep_sub = dep_s;
  t.dep_sub_obj = dep_so;
  t.prox_sub = prox_s;
  t.prox_sub_obj = prox_so;
  t.global_code = {majority_code(dep_s), majority_code(dep_so), majority_code(prox_s),
                   majority_code(prox_so)};

  const size_t n = doc.sentences.size();
  if (n > 0) {
    const size_t b1 = (n + 2) / 3;            // ceil(n/3)
    const size_t b2 = (2 * n + 2) / 3;        // ceil(2n/3)
    for (const VerbGroup& g : groups) {
      size_t third = g.sentence < b1 ? 0 : (g.sentence < b2 ? 1 : 2);
      ++t.partition[third][static_cast<size_t>(g.tense)];
    }
  }
  return t;
}

std::vector<float> assemble_dense(int num_count, int perc_count, const TemporalFeatures& t) {
  std::vector<float> v;
  v.reserve(kDenseWidth);
  v.push_back(static_cast<float>(num_count));
  v.push_back(static_cast<float>(perc_count));
  const std::array<const std::array<int, 3>*, 4> blocks = {&t.dep_sub, &t.dep_sub_obj,
                                                           &t.prox_sub, &t.prox_sub_obj};
  for (size_t b = 0; b < 4; ++b) {
    for (int tense = 0; tense < 3; ++tense)
      v.push_back(static_cast<float>((*blocks[b])[static_cast<size_t>(tense)]));
    for (int code = 0; code < 4; ++code)
      v.push_back(t.global_code[b] == code ? 1.0f : 0.0f);
  }
  for (int third = 0; third < 3; ++third)
    for (int tense = 0; tense < 3; ++tense)
      v.push_back(static_cast<float>(t.partition[static_cast<size_t>(third)]
                                                [static_cast<size_t>(tense)]));
  return v;
}

namespace {

std::vector<std::string> build_dense_names() {
  std::vector<std::string> names = {"NUM", "PERC"};
  const std::array<std::string, 4> analyses = {"DEP_SUB", "DEP_SUB_OBJ", "PROX_SUB",
                                               "PROX_SUB_OBJ"};
  const std::array<std::string, 3> tenses = {"PRS", "PST", "FUT"};
  for (const auto& a : analyses) {
    for (const auto& tn : tenses) names.push_back(tn + "_" + a);
    for (int code = 0; code < 4; ++code)
      names.push_back("GLOBAL_" + a + "=" + std::string(global_name(code)));
  }
  const std::array<std::string, 3> thirds = {"INITIAL", "MEDIUM", "FINAL"};
  for (const auto& th : thirds)
    for (const auto& tn : tenses) names.push_back(tn + "_" + th);
  return names;
}

std::vector<CandidateSpec> build_candidates() {
  std::vector<CandidateSpec> out;
  int col = 0;
  out.push_back({"NUM", {col++}});
  out.push_back({"PERC", {col++}});
  const std::array<std::string, 4> analyses = {"DEP_SUB", "DEP_SUB_OBJ", "PROX_SUB",
                                               "PROX_SUB_OBJ"};
  const std::array<std::string, 3> tenses = {"PRS", "PST", "FUT"};
  for (const auto& a : analyses) {
    for (const auto& tn : tenses) out.push_back({tn + "_" + a, {col++}});
    CandidateSpec g{"GLOBAL_" + a, {}};
    for (int k = 0; k < 4; ++k) g.dense_cols.push_back(col++);
    out.push_back(std::move(g));
  }
  const std::array<std::string, 3> thirds = {"INITIAL", "MEDIUM", "FINAL"};
  for (const auto& th : thirds)
    for (const auto& tn : tenses) out.push_back({tn + "_" + th, {col++}});
  return out;
}

}  // namespace

const std::vector<std::string>& dense_feature_names() {
  static const std::vector<std::string> names = build_dense_names();
  return names;
}

const std::vector<CandidateSpec>& temporal_candidates() {
  static const std::vector<CandidateSpec> candidates = build_candidates();
  return candidates;
}

}  // namespace newstense
