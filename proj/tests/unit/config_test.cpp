#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <newstense/config.hpp>
#include <newstense/error.hpp>

#include "paths.hpp"
#include "synthetic.hpp"

using namespace newstense;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto file = std::filesystem::temp_directory_path() / name;
  std::ofstream out(file);
  out << content;
  return file;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("the vectorizer grid enumerates the full Cartesian product in order") {
  VectorizerGrid grid;
  grid.max_df = {0.5, 1.0};
  grid.min_df = {0, 2};
  grid.ngram_range = {{1, 1}, {2, 3}};
  grid.max_features = {10, 0};

  const std::vector<NgramConfig> configs = enumerate_vectorizer_grid(grid);
  REQUIRE(configs.size() == 16);

  // max_df outermost, max_features innermost.
  CHECK(configs[0].max_df_ratio == doctest::Approx(0.5));
  CHECK(configs[0].min_df == doctest::Approx(0));
  CHECK(configs[0].n_min == 1);
  CHECK(configs[0].n_max == 1);
  CHECK(configs[0].max_features == 10);

  CHECK(configs[1].max_features == 0);
  CHECK(configs[1].n_min == 1);

  CHECK(configs[2].n_min == 2);
  CHECK(configs[2].n_max == 3);
  CHECK(configs[2].max_features == 10);

  CHECK(configs[4].min_df == doctest::Approx(2));
  CHECK(configs[8].max_df_ratio == doctest::Approx(1.0));

  const NgramConfig& last = configs.back();
  CHECK(last.max_df_ratio == doctest::Approx(1.0));
  CHECK(last.min_df == doctest::Approx(2));
  CHECK(last.n_min == 2);
  CHECK(last.n_max == 3);
  CHECK(last.max_features == 0);
}

TEST_CASE("the default tuning grid holds 700 configurations") {
  CHECK(enumerate_vectorizer_grid(VectorizerGrid{}).size() == 700);
}

TEST_CASE("an empty grid dimension is rejected") {
  VectorizerGrid grid;
  grid.ngram_range.clear();
  CHECK_THROWS_WITH_AS(enumerate_vectorizer_grid(grid), doctest::Contains("dimension"), Error);
}

TEST_CASE("tuning rows render to CSV with a single best flag") {
  TuneResult result;
  TuneRow a;
  a.config.max_df_ratio = 0.3;
  a.config.min_df = 0;
  a.config.n_min = 1;
  a.config.n_max = 4;
  a.config.max_features = 10000;
  a.accuracy = 0.625;
  TuneRow b = a;
  b.config.max_features = 0;
  b.accuracy = 0.75;
  result.rows = {a, b};
  result.best_index = 1;

  const std::string csv = result.to_csv();
  CHECK(csv ==
        "max_df,min_df,n_min,n_max,max_features,accuracy,best\n"
        "0.3,0,1,4,10000,0.625000,0\n"
        "0.3,0,1,4,0,0.750000,1\n");
}

TEST_CASE("tune_vectorizer cross-validates each configuration and keeps the earliest best") {
  newstense::testing::SyntheticOptions opt;
  opt.past_items = 12;
  opt.future_items = 8;
  opt.seed = 13;
  const Corpus corpus = newstense::testing::make_synthetic_corpus(opt);
  const Resources res = Resources::load(newstense::testing::data_dir());
  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  std::vector<std::string> ids;
  for (const NewsItem& item : corpus.items) ids.push_back(item.id);
  const std::vector<Label> labels = corpus.labels();
  const FoldPlan folds = stratified_folds(labels, 2, 3);

  PipelineSettings base;
  base.mode = FeatureMode::Ngrams;
  base.chi2_percentile = 1.0;
  base.model.kind = ModelSpec::Kind::ZeroR;
  base.seed = 1;

  VectorizerGrid grid;
  grid.max_df = {1.0};
  grid.min_df = {0};
  grid.ngram_range = {{1, 2}};
  grid.max_features = {100, 0};

  // ZeroR ignores the features entirely, so both rows tie and the earliest wins.
  const TuneResult tuned = tune_vectorizer(base, grid, docs, ids, labels, folds);
  REQUIRE(tuned.rows.size() == 2);
  CHECK(tuned.rows[0].accuracy == doctest::Approx(tuned.rows[1].accuracy));
  CHECK(tuned.best_index == 0);

  double best = -1.0;
  for (const TuneRow& row : tuned.rows) best = std::max(best, row.accuracy);
  CHECK(tuned.rows[tuned.best_index].accuracy == doctest::Approx(best));

  // Exactly one CSV row carries the best flag.
  const std::string csv = tuned.to_csv();
  size_t flagged = 0, pos = 0;
  while ((pos = csv.find(",1\n", pos)) != std::string::npos) {
    ++flagged;
    pos += 3;
  }
  CHECK(flagged == 1);
}

TEST_CASE("the TOML subset parses keys, sections, and values") {
  const std::string text =
      "# top comment\n"
      "corpus = \"news.jsonl\"  # trailing comment\n"
      "folds = 10\n"
      "ratio = 0.25\n"
      "flag = true\n"
      "off = false\n"
      "note = \"a # not a comment\"\n"
      "quoted = \"say \\\"hi\\\"\"\n"
      "\n"
      "[pipeline]\n"
      "mode = \"ngrams_numtemp\"\n"
      "\n"
      "[pipeline.ngram]\n"
      "n_min = 1\n"
      "n_max = 4\n"
      "\n"
      "[tune_grid]\n"
      "max_df = [0.3, 0.5, 1.0]\n"
      "ngram_range = [[1, 2], [2, 4]]\n"
      "empty = []\n";

  const nlohmann::ordered_json j = toml_subset_to_json(text);
  CHECK(j.at("corpus") == "news.jsonl");
  CHECK(j.at("folds") == 10);
  CHECK(j.at("folds").is_number_integer());
  CHECK(j.at("ratio") == doctest::Approx(0.25));
  CHECK(j.at("flag") == true);
  CHECK(j.at("off") == false);
  CHECK(j.at("note") == "a # not a comment");
  CHECK(j.at("quoted") == "say \"hi\"");
  CHECK(j.at("pipeline").at("mode") == "ngrams_numtemp");
  CHECK(j.at("pipeline").at("ngram").at("n_min") == 1);
  CHECK(j.at("pipeline").at("ngram").at("n_max") == 4);
  CHECK(j.at("tune_grid").at("max_df").size() == 3);
  CHECK(j.at("tune_grid").at("ngram_range")[1][1] == 4);
  CHECK(j.at("tune_grid").at("empty").is_array());
  CHECK(j.at("tune_grid").at("empty").empty());
}

TEST_CASE("TOML subset errors carry the offending line number") {
  CHECK_THROWS_WITH_AS(toml_subset_to_json("a = \"unterminated\n"),
                       doctest::Contains("line 1"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("fine = 1\nno equals sign\n"),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("a = 1 trailing\n"),
                       doctest::Contains("trailing"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("[unterminated\n"),
                       doctest::Contains("section"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("= 5\n"), doctest::Contains("empty key"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("a = @@\n"),
                       doctest::Contains("cannot parse value"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("[]\n"), doctest::Contains("empty section"), Error);
  CHECK_THROWS_WITH_AS(toml_subset_to_json("a = [1, 2\n"), doctest::Contains("array"), Error);
}

TEST_CASE("a run config materializes from JSON with defaults") {
  nlohmann::ordered_json j;
  j["corpus"] = "news.jsonl";
  j["data_dir"] = "wordlists";
  j["out_dir"] = "results";
  j["folds"] = 5;
  j["jobs"] = 2;
  j["pipeline"]["mode"] = "ngrams_selected";
  j["pipeline"]["chi2_percentile"] = 0.58;
  j["pipeline"]["selected_candidates"] = {"NUM", "PERC"};
  j["pipeline"]["ngram"]["n_min"] = 1;
  j["pipeline"]["ngram"]["n_max"] = 2;
  j["pipeline"]["model"]["kind"] = "svc";
  j["pipeline"]["model"]["hyper"]["lambda"] = 0.05;
  j["model_grid"]["max_depth"] = {4.0, 8.0};
  j["model_grid"]["min_samples_leaf"] = {1.0};
  j["tune_grid"]["max_df"] = {0.5};
  j["tune_grid"]["ngram_range"] = {{1, 3}};

  const RunConfig c = RunConfig::from_json(j);
  CHECK(c.corpus == "news.jsonl");
  CHECK(c.data_dir == "wordlists");
  CHECK(c.out_dir == "results");
  CHECK(c.folds == 5);
  CHECK(c.jobs == 2);
  CHECK(c.pipeline.mode == FeatureMode::NgramsSelected);
  CHECK(c.pipeline.chi2_percentile == doctest::Approx(0.58));
  CHECK(c.pipeline.selected_candidates == std::vector<std::string>{"NUM", "PERC"});
  CHECK(c.pipeline.ngram.n_min == 1);
  CHECK(c.pipeline.ngram.n_max == 2);
  CHECK(c.pipeline.model.kind == ModelSpec::Kind::LinearSVC);
  CHECK(c.pipeline.model.hyper.at("lambda") == doctest::Approx(0.05));

  REQUIRE(c.model_grid.size() == 2);  // file order preserved
  CHECK(c.model_grid[0].first == "max_depth");
  CHECK(c.model_grid[0].second == std::vector<double>{4.0, 8.0});
  CHECK(c.model_grid[1].first == "min_samples_leaf");

  CHECK(c.tune_grid.max_df == std::vector<double>{0.5});
  REQUIRE(c.tune_grid.ngram_range.size() == 1);
  CHECK(c.tune_grid.ngram_range[0] == std::pair<int, int>{1, 3});
  // Dimensions absent from the file keep their defaults.
  CHECK(c.tune_grid.min_df.size() == 5);
  CHECK(c.tune_grid.max_features.size() == 4);

  // Defaults for everything else.
  const RunConfig d = RunConfig::from_json(nlohmann::ordered_json::object());
  CHECK(d.data_dir == "data");
  CHECK(d.out_dir == "out");
  CHECK(d.folds == 10);
  CHECK(d.jobs == 1);
  CHECK(d.pipeline.mode == FeatureMode::Ngrams);
}

TEST_CASE("the semantic tree path defaults into the data directory") {
  RunConfig c;
  c.data_dir = "wordlists";
  CHECK(c.semantic_tree_path() == std::filesystem::path("wordlists") / "semantic_tree.json");
  c.semantic_tree = "custom/tree.json";
  CHECK(c.semantic_tree_path() == std::filesystem::path("custom/tree.json"));
}

TEST_CASE("malformed run config sections are rejected") {
  nlohmann::ordered_json j;
  j["model_grid"] = 5;
  CHECK_THROWS_WITH_AS(RunConfig::from_json(j), doctest::Contains("model_grid"), Error);

  nlohmann::ordered_json k;
  k["tune_grid"]["ngram_range"] = {1, 2};  // not pairs
  CHECK_THROWS_WITH_AS(RunConfig::from_json(k), doctest::Contains("ngram_range"), Error);
}

TEST_CASE("run configs load from TOML and JSON files alike") {
  const std::string toml =
      "corpus = \"tiny.jsonl\"\n"
      "folds = 3\n"
      "[pipeline]\n"
      "mode = \"ngrams_numtemp\"\n"
      "chi2_percentile = 0.8\n"
      "[pipeline.model]\n"
      "kind = \"zeror\"\n";
  const auto toml_file = write_temp("newstense_config_test.toml", toml);
  const RunConfig from_toml = RunConfig::load(toml_file);
  CHECK(from_toml.corpus == "tiny.jsonl");
  CHECK(from_toml.folds == 3);
  CHECK(from_toml.pipeline.mode == FeatureMode::NgramsNumTemp);
  CHECK(from_toml.pipeline.chi2_percentile == doctest::Approx(0.8));
  CHECK(from_toml.pipeline.model.kind == ModelSpec::Kind::ZeroR);
  std::filesystem::remove(toml_file);

  const std::string json =
      "{\"corpus\": \"tiny.jsonl\", \"folds\": 3,"
      " \"pipeline\": {\"mode\": \"ngrams_numtemp\", \"chi2_percentile\": 0.8,"
      " \"model\": {\"kind\": \"zeror\"}}}";
  const auto json_file = write_temp("newstense_config_test.json", json);
  const RunConfig from_json_file = RunConfig::load(json_file);
  CHECK(from_json_file.corpus == from_toml.corpus);
  CHECK(from_json_file.folds == from_toml.folds);
  CHECK(from_json_file.pipeline.mode == from_toml.pipeline.mode);
  std::filesystem::remove(json_file);

  CHECK_THROWS_WITH_AS(RunConfig::load("/nonexistent/newstense.toml"),
                       doctest::Contains("cannot read"), Error);

  const auto bad = write_temp("newstense_config_bad.json", "{broken");
  CHECK_THROWS_WITH_AS(RunConfig::load(bad), doctest::Contains("JSON"), Error);
  std::filesystem::remove(bad);
}

}  // TEST_SUITE
