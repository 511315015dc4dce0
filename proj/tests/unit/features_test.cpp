#include <doctest.h>

#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <newstense/error.hpp>
#include <newstense/features.hpp>
#include <newstense/lingua.hpp>
#include <newstense/text.hpp>

#include "paths.hpp"

using namespace newstense;

TEST_SUITE("features") {

TEST_CASE("char grams slide over the whole string") {
  auto grams = extract_ngrams("abcd", NgramFamily::CharGrams, 2, 3);
  CHECK(grams == std::vector<std::string>{"ab", "bc", "cd", "abc", "bcd"});
}

TEST_CASE("word token grams pad each word with spaces") {
  auto grams = extract_ngrams("ab cd", NgramFamily::WordTokens, 2, 3);
  CHECK(grams == std::vector<std::string>{" a", "ab", "b ", " ab", "ab ",
                                          " c", "cd", "d ", " cd", "cd "});
}

TEST_CASE("short words yield no long word-token grams") {
  CHECK(extract_ngrams("a", NgramFamily::WordTokens, 4, 4).empty());
}

TEST_CASE("word grams join consecutive words") {
  auto grams = extract_ngrams("the stock fell", NgramFamily::WordGrams, 1, 2);
  CHECK(grams == std::vector<std::string>{"the", "stock", "fell", "the stock", "stock fell"});
}

TEST_CASE("gram extraction rejects a bad range") {
  CHECK_THROWS_AS(extract_ngrams("x", NgramFamily::CharGrams, 0, 2), Error);
  CHECK_THROWS_AS(extract_ngrams("x", NgramFamily::CharGrams, 3, 2), Error);
}

TEST_CASE("document frequency above the ratio drops a gram") {
  NgramConfig cfg;
  cfg.n_min = 1;
  cfg.n_max = 1;
  cfg.max_df_ratio = 0.5;  // 4 docs -> grams in more than 2 docs are dropped
  cfg.max_features = 0;
  auto model = fit_vectorizer({"alpha beta", "alpha beta", "alpha gamma", "delta"},
                              NgramFamily::WordGrams, cfg);
  CHECK(model.vocabulary == std::vector<std::string>{"beta", "delta", "gamma"});
}

TEST_CASE("min_df filters as an absolute count or a fraction") {
  NgramConfig cfg;
  cfg.n_min = 1;
  cfg.n_max = 1;
  cfg.max_df_ratio = 1.0;
  cfg.max_features = 0;
  std::vector<std::string> docs = {"alpha beta", "alpha beta", "alpha gamma", "delta"};

  cfg.min_df = 2;  // absolute
  CHECK(fit_vectorizer(docs, NgramFamily::WordGrams, cfg).vocabulary ==
        std::vector<std::string>{"alpha", "beta"});

  cfg.min_df = 0.5;  // fraction of 4 docs -> 2
  CHECK(fit_vectorizer(docs, NgramFamily::WordGrams, cfg).vocabulary ==
        std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("max_features keeps the heaviest grams with lexicographic ties") {
  NgramConfig cfg;
  cfg.n_min = 1;
  cfg.n_max = 1;
  cfg.max_df_ratio = 1.0;
  cfg.max_features = 2;
  // Totals: x appears twice, y and z once each; the tie breaks toward y.
  auto model = fit_vectorizer({"x x y z"}, NgramFamily::WordGrams, cfg);
  CHECK(model.vocabulary == std::vector<std::string>{"x", "y"});
}

TEST_CASE("transform counts known grams and ignores the rest") {
  NgramConfig cfg;
  cfg.n_min = 1;
  cfg.n_max = 1;
  cfg.max_df_ratio = 1.0;
  cfg.max_features = 0;
  auto model = fit_vectorizer({"up down up"}, NgramFamily::WordGrams, cfg);
  REQUIRE(model.vocabulary == std::vector<std::string>{"down", "up"});
  SparseVec v = transform_ngrams("up up sideways down", model);
  REQUIRE(v.size() == 2);
  CHECK(v[0].first == 0);  // "down"
  CHECK(v[0].second == 1.0f);
  CHECK(v[1].first == 1);  // "up"
  CHECK(v[1].second == 2.0f);
}

TEST_CASE("vectorizer model survives a json round trip") {
  NgramConfig cfg;
  cfg.n_min = 2;
  cfg.n_max = 3;
  cfg.max_df_ratio = 0.9;
  cfg.max_features = 100;
  auto model = fit_vectorizer({"the stock fell", "the stock rallied"},
                              NgramFamily::CharGrams, cfg, {"d1", "d2"});
  auto back = VectorizerModel::from_json(model.to_json());
  CHECK(back.family == model.family);
  CHECK(back.vocabulary == model.vocabulary);
  CHECK(back.fit_source_ids == std::vector<std::string>{"d1", "d2"});
  CHECK(back.config.n_min == 2);
  CHECK(back.config.n_max == 3);
  CHECK(transform_ngrams("the stock", back) == transform_ngrams("the stock", model));
}

TEST_CASE("vectorizer fitting validates its inputs") {
  NgramConfig cfg;
  CHECK_THROWS_AS(fit_vectorizer({}, NgramFamily::CharGrams, cfg), Error);
  CHECK_THROWS_AS(fit_vectorizer({"x"}, NgramFamily::CharGrams, cfg, {"a", "b"}), Error);
  cfg.n_min = 0;
  CHECK_THROWS_AS(fit_vectorizer({"x"}, NgramFamily::CharGrams, cfg), Error);
}

TEST_CASE("numerical features count NUM and PERC tags only") {
  TaggedDocument doc = tokenize("Profit grew PERC to NUM units by DATE.");
  auto [num, perc] = numerical_features(doc);
  CHECK(num == 1);
  CHECK(perc == 1);
}

TEST_CASE("temporal tallies count distinct linked groups per analysis") {
  TaggedDocument doc;
  doc.sentences = {{0, 1}};
  std::vector<VerbGroup> groups(3);
  groups[0].tense = Tense::Present;
  groups[1].tense = Tense::Future;
  groups[2].tense = Tense::Past;

  std::vector<TenseLink> dep = {{10, 0, Role::Subject}, {11, 0, Role::Object},
                                {12, 1, Role::Object}};
  std::vector<TenseLink> prox = {{10, 0, Role::Subject}, {12, 2, Role::Subject}};
  TemporalFeatures t = temporal_features(doc, groups, dep, prox);

  CHECK(t.dep_sub[static_cast<size_t>(Tense::Present)] == 1);
  CHECK(t.dep_sub[static_cast<size_t>(Tense::Future)] == 0);
  // Group 0 is linked twice but counts once.
  CHECK(t.dep_sub_obj[static_cast<size_t>(Tense::Present)] == 1);
  CHECK(t.dep_sub_obj[static_cast<size_t>(Tense::Future)] == 1);
  CHECK(t.prox_sub[static_cast<size_t>(Tense::Present)] == 1);
  CHECK(t.prox_sub[static_cast<size_t>(Tense::Past)] == 1);

  CHECK(t.global_code[0] == kGlobalPresent);  // only a Present link
  CHECK(t.global_code[1] == kGlobalFuture);   // tie Present/Future -> Future
  CHECK(t.global_code[2] == kGlobalPast);     // tie Present/Past -> Past
  CHECK(t.global_code[3] == kGlobalPast);
}

TEST_CASE("partition buckets verb groups by sentence third") {
  TaggedDocument doc;
  doc.sentences.assign(7, {0, 0});  // boundaries at ceil(7/3)=3 and ceil(14/3)=5
  std::vector<VerbGroup> groups(5);
  groups[0].sentence = 0;
  groups[0].tense = Tense::Past;
  groups[1].sentence = 2;
  groups[1].tense = Tense::Present;
  groups[2].sentence = 3;
  groups[2].tense = Tense::Future;
  groups[3].sentence = 4;
  groups[3].tense = Tense::Future;
  groups[4].sentence = 6;
  groups[4].tense = Tense::Past;

  TemporalFeatures t = temporal_features(doc, groups, {}, {});
  CHECK(t.partition[0][static_cast<size_t>(Tense::Past)] == 1);
  CHECK(t.partition[0][static_cast<size_t>(Tense::Present)] == 1);
  CHECK(t.partition[1][static_cast<size_t>(Tense::Future)] == 2);
  CHECK(t.partition[2][static_cast<size_t>(Tense::Past)] == 1);

  int sum = 0;
  for (const auto& third : t.partition)
    for (int c : third) sum += c;
  CHECK(sum == static_cast<int>(groups.size()));
}

TEST_CASE("dense assembly lays out counts one-hots and partitions") {
  TaggedDocument doc;
  doc.sentences = {{0, 1}};
  std::vector<VerbGroup> groups(3);
  groups[0].tense = Tense::Present;
  groups[1].tense = Tense::Future;
  groups[2].tense = Tense::Past;
  std::vector<TenseLink> dep = {{10, 0, Role::Subject}, {11, 0, Role::Object},
                                {12, 1, Role::Object}};
  std::vector<TenseLink> prox = {{10, 0, Role::Subject}, {12, 2, Role::Subject}};
  TemporalFeatures t = temporal_features(doc, groups, dep, prox);

  std::vector<float> v = assemble_dense(4, 2, t);
  REQUIRE(static_cast<int>(v.size()) == kDenseWidth);
  CHECK(v[0] == 4.0f);  // NUM
  CHECK(v[1] == 2.0f);  // PERC
  CHECK(v[2] == 1.0f);  // PRS_DEP_SUB
  CHECK(v[3] == 0.0f);  // PST_DEP_SUB
  CHECK(v[4] == 0.0f);  // FUT_DEP_SUB
  // GLOBAL_DEP_SUB one-hot (None, Past, Present, Future) -> Present.
  CHECK(v[5] == 0.0f);
  CHECK(v[6] == 0.0f);
  CHECK(v[7] == 1.0f);
  CHECK(v[8] == 0.0f);
  // GLOBAL_DEP_SUB_OBJ -> Future.
  CHECK(v[15] == 1.0f);
  // GLOBAL_PROX_SUB -> Past.
  CHECK(v[20] == 1.0f);
  // All partition cells empty except none (groups carry sentence 0, third 0).
  float tail = std::accumulate(v.begin() + 30, v.end(), 0.0f);
  CHECK(tail == 3.0f);  // three groups in the first third
}

TEST_CASE("dense names and candidates tile the dense width") {
  const auto& names = dense_feature_names();
  REQUIRE(static_cast<int>(names.size()) == kDenseWidth);
  CHECK(names[0] == "NUM");
  CHECK(names[1] == "PERC");
  CHECK(names[2] == "PRS_DEP_SUB");
  CHECK(names[5] == "GLOBAL_DEP_SUB=None");
  CHECK(names[8] == "GLOBAL_DEP_SUB=Future");
  CHECK(names[38] == "FUT_FINAL");

  const auto& candidates = temporal_candidates();
  REQUIRE(candidates.size() == 27);
  std::set<int> covered;
  for (const auto& c : candidates)
    for (int col : c.dense_cols) {
      CHECK(covered.insert(col).second);  // disjoint
      CHECK(col >= 0);
      CHECK(col < kDenseWidth);
    }
  CHECK(static_cast<int>(covered.size()) == kDenseWidth);

  // GLOBAL candidates own their whole one-hot block.
  for (const auto& c : candidates) {
    if (c.name.rfind("GLOBAL_", 0) == 0)
      CHECK(c.dense_cols.size() == 4);
    else
      CHECK(c.dense_cols.size() == 1);
  }
}

TEST_CASE("analysis of a two-sentence item fills the dense tail end to end") {
  static Lingua lingua(testing::data_dir());
  TaggedDocument doc = tokenize("TICKER will rally. Analysts sold TICKER.");
  auto analysis = lingua.analyze(doc);
  REQUIRE(analysis.groups.size() == 2);

  TemporalFeatures t =
      temporal_features(doc, analysis.groups, analysis.dependency, analysis.proximity);
  CHECK(t.dep_sub[static_cast<size_t>(Tense::Future)] == 1);
  CHECK(t.dep_sub_obj[static_cast<size_t>(Tense::Future)] == 1);
  CHECK(t.dep_sub_obj[static_cast<size_t>(Tense::Past)] == 1);
  CHECK(t.global_code[0] == kGlobalFuture);
  CHECK(t.global_code[1] == kGlobalFuture);  // Future/Past tie -> Future
  // Two sentences split as thirds 0 and 1.
  CHECK(t.partition[0][static_cast<size_t>(Tense::Future)] == 1);
  CHECK(t.partition[1][static_cast<size_t>(Tense::Past)] == 1);
}

TEST_CASE("family names round trip") {
  CHECK(family_name(NgramFamily::CharGrams) == "CHAR_GRAMS");
  CHECK(family_from_name("WORD_TOKENS") == NgramFamily::WordTokens);
  CHECK(family_from_name("WORD_GRAMS") == NgramFamily::WordGrams);
  CHECK_THROWS_AS(family_from_name("BYTE_PAIRS"), Error);
}

}  // TEST_SUITE
