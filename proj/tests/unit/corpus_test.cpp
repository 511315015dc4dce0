#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <newstense/corpus.hpp>
#include <newstense/error.hpp>

#include "paths.hpp"
#include "synthetic.hpp"

using namespace newstense;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("label names round trip") {
  CHECK(label_name(Label::Past) == "past");
  CHECK(label_name(Label::Future) == "future");
  CHECK(label_from_name("past") == Label::Past);
  CHECK(label_from_name("FUTURE") == Label::Future);
  CHECK_THROWS_AS(label_from_name("sideways"), Error);
}

TEST_CASE("jsonl save and load round trip") {
  Corpus corpus;
  corpus.items.push_back({"a1", "Shares fell 3% on Monday.", "Boeing", "wire", Label::Past});
  corpus.items.push_back({"a2", "The firm will expand \"globally\".", "Intel", "wire", Label::Future});
  auto path = temp_file("corpus_roundtrip.jsonl");
  corpus.save_jsonl(path);

  Corpus back = Corpus::load_jsonl(path);
  REQUIRE(back.items.size() == 2);
  CHECK(back.items[0].id == "a1");
  CHECK(back.items[0].content == "Shares fell 3% on Monday.");
  CHECK(back.items[0].temporality == Label::Past);
  CHECK(back.items[1].content == "The firm will expand \"globally\".");
  CHECK(back.items[1].ticker == "Intel");
  CHECK(back.items[1].temporality == Label::Future);
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects missing fields with the line number") {
  auto path = temp_file("corpus_missing.jsonl");
  write_text(path,
             "{\"id\":\"a\",\"content\":\"x\",\"ticker\":\"T\",\"source\":\"s\",\"temporality\":\"past\"}\n"
             "{\"id\":\"b\",\"content\":\"y\",\"source\":\"s\",\"temporality\":\"past\"}\n");
  try {
    Corpus::load_jsonl(path);
    FAIL("expected a load error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    CHECK(std::string(e.what()).find("ticker") != std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects duplicate ids") {
  auto path = temp_file("corpus_dup.jsonl");
  write_text(path,
             "{\"id\":\"a\",\"content\":\"x\",\"ticker\":\"T\",\"source\":\"s\",\"temporality\":\"past\"}\n"
             "{\"id\":\"a\",\"content\":\"y\",\"ticker\":\"T\",\"source\":\"s\",\"temporality\":\"future\"}\n");
  CHECK_THROWS_AS(Corpus::load_jsonl(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects unknown labels") {
  auto path = temp_file("corpus_label.jsonl");
  write_text(path,
             "{\"id\":\"a\",\"content\":\"x\",\"ticker\":\"T\",\"source\":\"s\",\"temporality\":\"soon\"}\n");
  CHECK_THROWS_AS(Corpus::load_jsonl(path), Error);
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects a missing file") {
  CHECK_THROWS_AS(Corpus::load_jsonl("/nonexistent/corpus.jsonl"), Error);
}

TEST_CASE("labels extracts the temporality column") {
  Corpus corpus;
  corpus.items.push_back({"a", "x", "T", "s", Label::Future});
  corpus.items.push_back({"b", "y", "T", "s", Label::Past});
  auto labels = corpus.labels();
  REQUIRE(labels.size() == 2);
  CHECK(labels[0] == Label::Future);
  CHECK(labels[1] == Label::Past);
}

TEST_CASE("class distribution summarizes sizes per label") {
  Corpus corpus;
  // One-sentence and three-sentence past items; one future item.
  corpus.items.push_back({"a", "Shares fell.", "T", "s", Label::Past});
  corpus.items.push_back(
      {"b", "Shares fell. Investors sold early. Prices dropped.", "T", "s", Label::Past});
  corpus.items.push_back({"c", "Shares will rally.", "T", "s", Label::Future});
  Lingua lingua(testing::data_dir());
  DistributionSummary summary = class_distribution(corpus, lingua);
  CHECK(summary.total == 3);
  const ClassStats& past = summary.per_label[static_cast<size_t>(Label::Past)];
  const ClassStats& future = summary.per_label[static_cast<size_t>(Label::Future)];
  CHECK(past.count == 2);
  CHECK(future.count == 1);
  CHECK(past.sentences_mean == doctest::Approx(2.0));  // (1 + 3) / 2
  CHECK(past.sentences_std == doctest::Approx(1.0));   // population std
  CHECK(future.sentences_mean == doctest::Approx(1.0));
  CHECK(past.words_mean == doctest::Approx(4.5));  // (2 + 7) / 2
}

TEST_CASE("stratified folds cover every item exactly once") {
  auto corpus = testing::make_synthetic_corpus({60, 40, 3, 0.0});
  auto labels = corpus.labels();
  FoldPlan plan = stratified_folds(labels, 10, 42);
  REQUIRE(plan.assignment.size() == labels.size());
  std::vector<int> seen(labels.size(), 0);
  for (uint32_t f = 0; f < 10; ++f) {
    for (uint32_t idx : plan.test_indices(f)) ++seen[idx];
    for (uint32_t idx : plan.train_indices(f)) ++seen[idx];
  }
  // Each item appears once as test and k-1 times as train.
  for (int s : seen) CHECK(s == 10);
}

TEST_CASE("stratified folds balance class counts within one item") {
  auto corpus = testing::make_synthetic_corpus({61, 39, 3, 0.0});
  auto labels = corpus.labels();
  const int k = 7;
  FoldPlan plan = stratified_folds(labels, k, 1);
  std::map<uint32_t, std::array<int, 2>> counts;
  for (size_t i = 0; i < labels.size(); ++i)
    counts[plan.assignment[i]][static_cast<size_t>(labels[i])]++;
  for (int cls = 0; cls < 2; ++cls) {
    int lo = 1 << 30, hi = -1;
    for (uint32_t f = 0; f < k; ++f) {
      lo = std::min(lo, counts[f][cls]);
      hi = std::max(hi, counts[f][cls]);
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("fold assignment depends on the seed but not the call") {
  std::vector<Label> labels(50, Label::Past);
  for (size_t i = 0; i < 20; ++i) labels[i] = Label::Future;
  FoldPlan a = stratified_folds(labels, 5, 7);
  FoldPlan b = stratified_folds(labels, 5, 7);
  FoldPlan c = stratified_folds(labels, 5, 8);
  CHECK(a.assignment == b.assignment);
  CHECK(a.assignment != c.assignment);
}

TEST_CASE("fold construction rejects invalid k") {
  std::vector<Label> labels(10, Label::Past);
  CHECK_THROWS_AS(stratified_folds(labels, 1, 0), Error);
  CHECK_THROWS_AS(stratified_folds(labels, 11, 0), Error);
}

}  // TEST_SUITE
