#include <doctest.h>

#include <string>
#include <vector>

#include <newstense/error.hpp>
#include <newstense/select.hpp>

using namespace newstense;

namespace {

// 40 rows: the first 20 Past, the rest Future. One weak sparse indicator
// column that fires on 15 Future and 5 Past rows.
struct ToySetup {
  FeatureMatrix base;
  std::vector<std::vector<float>> dense;
  std::vector<Label> y;
};

ToySetup make_toy() {
  ToySetup s;
  s.base.sparse_width = 1;
  for (int i = 0; i < 40; ++i) {
    const bool future = i >= 20;
    s.y.push_back(future ? Label::Future : Label::Past);
    const bool weak_on = future ? (i % 4 != 3) : (i % 4 == 0);  // 15 / 5 rows
    SparseVec row;
    if (weak_on) row.emplace_back(0u, 1.0f);
    s.base.sparse_rows.push_back(std::move(row));
    // Dense candidates: a perfect indicator and a constant.
    s.dense.push_back({future ? 1.0f : 0.0f, 1.0f});
  }
  return s;
}

}  // namespace

TEST_SUITE("select") {

TEST_CASE("chi2 matches the two-class hand computation") {
  FeatureMatrix x;
  x.sparse_width = 1;
  x.sparse_rows = {{{0, 2.0f}}, {}, {}, {}};
  x.dense_rows = {{1.0f}, {1.0f}, {1.0f}, {1.0f}};
  std::vector<Label> y = {Label::Past, Label::Past, Label::Future, Label::Future};

  auto scores = chi2_scores(x, y);
  REQUIRE(scores.size() == 2);
  // Column 0: total 2 splits 2/0 against expected 1/1.
  CHECK(scores[0] == doctest::Approx(2.0));
  // A perfectly balanced column carries no signal.
  CHECK(scores[1] == doctest::Approx(0.0));
}

TEST_CASE("chi2 respects uneven class priors") {
  FeatureMatrix x;
  x.sparse_width = 1;
  x.sparse_rows = {{}, {}, {}, {{0, 4.0f}}};
  std::vector<Label> y = {Label::Past, Label::Past, Label::Past, Label::Future};
  // total 4, expected (3, 1), observed (0, 4): 9/3 + 9/1.
  CHECK(chi2_scores(x, y)[0] == doctest::Approx(12.0));
}

TEST_CASE("chi2 scores an all-zero column as zero") {
  FeatureMatrix x;
  x.sparse_width = 2;
  x.sparse_rows = {{{0, 1.0f}}, {{0, 1.0f}}};
  std::vector<Label> y = {Label::Past, Label::Future};
  CHECK(chi2_scores(x, y)[1] == 0.0);
}

TEST_CASE("chi2 rejects mismatched labels") {
  FeatureMatrix x;
  x.sparse_width = 1;
  x.sparse_rows = {{}};
  CHECK_THROWS_AS(chi2_scores(x, {Label::Past, Label::Future}), Error);
}

TEST_CASE("percentile selection floors the kept count") {
  std::vector<double> scores = {5, 1, 3, 3, 2};
  SelectionMask half = select_percentile(scores, 0.5);  // floor(2.5) = 2
  CHECK(half.kept_columns == std::vector<uint32_t>{0, 2});  // tie 3/3 -> lower id

  SelectionMask all = select_percentile(scores, 1.0);
  CHECK(all.kept_columns.size() == 5);

  SelectionMask none = select_percentile(scores, 0.19);  // floor(0.95) = 0
  CHECK(none.kept_columns.empty());
}

TEST_CASE("percentile selection survives inexact products") {
  // 0.58 * 50 lands at 28.999999999999996 in doubles; the epsilon keeps the
  // intended 29.
  std::vector<double> scores(50);
  for (size_t i = 0; i < scores.size(); ++i) scores[i] = 50.0 - static_cast<double>(i);
  SelectionMask mask = select_percentile(scores, 0.58);
  CHECK(mask.kept_columns.size() == 29);
  CHECK(mask.kept_columns.front() == 0);
  CHECK(mask.kept_columns.back() == 28);
}

TEST_CASE("percentile selection validates its range") {
  CHECK_THROWS_AS(select_percentile({1.0}, 0.0), Error);
  CHECK_THROWS_AS(select_percentile({1.0}, 1.5), Error);
}

TEST_CASE("masking renumbers sparse columns and keeps the dense tail") {
  FeatureMatrix x;
  x.sparse_width = 3;
  x.sparse_rows = {{{0, 1.0f}, {1, 5.0f}, {2, 3.0f}}, {{1, 2.0f}}};
  x.dense_rows = {{7.0f}, {8.0f}};

  SelectionMask mask;
  mask.kept_columns = {0, 2};
  FeatureMatrix out = apply_mask_sparse(x, mask);
  CHECK(out.sparse_width == 2);
  REQUIRE(out.sparse_rows.size() == 2);
  CHECK(out.sparse_rows[0] == SparseVec{{0, 1.0f}, {1, 3.0f}});
  CHECK(out.sparse_rows[1].empty());
  CHECK(out.dense_rows == x.dense_rows);
  CHECK(out.cols() == 3);
}

TEST_CASE("masking rejects columns outside the sparse block") {
  FeatureMatrix x;
  x.sparse_width = 2;
  x.sparse_rows = {{}};
  x.dense_rows = {{1.0f}};
  SelectionMask mask;
  mask.kept_columns = {2};
  CHECK_THROWS_AS(apply_mask_sparse(x, mask), Error);
}

TEST_CASE("selection mask survives a json round trip") {
  SelectionMask mask;
  mask.kept_columns = {1, 4, 9};
  mask.scores = {0.1, 2.5, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0, 7.0};
  mask.percentile = 0.3;
  SelectionMask back = SelectionMask::from_json(mask.to_json());
  CHECK(back.kept_columns == mask.kept_columns);
  CHECK(back.scores == mask.scores);
  CHECK(back.percentile == mask.percentile);

  nlohmann::json stale = mask.to_json();
  stale["version"] = 99;
  CHECK_THROWS_AS(SelectionMask::from_json(stale), Error);
}

TEST_CASE("candidate screening keeps improvements and drops noise") {
  ToySetup s = make_toy();
  FoldPlan folds = stratified_folds(s.y, 4, 11);
  ModelSpec model;
  model.kind = ModelSpec::Kind::LinearSVC;
  model.seed = 3;

  std::vector<CandidateSpec> candidates = {{"GOOD", {0}}, {"CONST", {1}}};
  CombinatorialResult result =
      combinatorial_select(s.base, s.dense, candidates, s.y, folds, model, 0.01);

  REQUIRE(result.rows.size() == 2);
  CHECK(result.base_macro_precision < 0.9);
  CHECK(result.rows[0].macro_precision > result.base_macro_precision);
  CHECK(result.rows[0].macro_precision > 0.9);  // the perfect column separates
  CHECK(result.rows[0].retained);
  CHECK_FALSE(result.rows[1].retained);  // a constant adds nothing
  CHECK(result.retained == std::vector<uint32_t>{0});

  std::string csv = result.to_csv();
  CHECK(csv.find("candidate,macro_precision") != std::string::npos);
  CHECK(csv.find("BASE,") != std::string::npos);
  CHECK(csv.find("GOOD,") != std::string::npos);
  CHECK(csv.find(",1\n") != std::string::npos);
}

TEST_CASE("candidates are judged independently of order") {
  ToySetup s = make_toy();
  FoldPlan folds = stratified_folds(s.y, 4, 11);
  ModelSpec model;
  model.kind = ModelSpec::Kind::LinearSVC;
  model.seed = 3;

  std::vector<CandidateSpec> forward = {{"GOOD", {0}}, {"CONST", {1}}};
  std::vector<CandidateSpec> swapped = {{"CONST", {1}}, {"GOOD", {0}}};
  auto a = combinatorial_select(s.base, s.dense, forward, s.y, folds, model, 0.01);
  auto b = combinatorial_select(s.base, s.dense, swapped, s.y, folds, model, 0.01);

  REQUIRE(a.retained.size() == 1);
  REQUIRE(b.retained.size() == 1);
  CHECK(a.rows[a.retained[0]].name == "GOOD");
  CHECK(b.rows[b.retained[0]].name == "GOOD");
  CHECK(a.rows[0].macro_precision == doctest::Approx(b.rows[1].macro_precision));
}

TEST_CASE("screening validates row alignment") {
  ToySetup s = make_toy();
  s.dense.pop_back();
  FoldPlan folds = stratified_folds(s.y, 4, 11);
  ModelSpec model;
  CHECK_THROWS_AS(
      combinatorial_select(s.base, s.dense, {{"GOOD", {0}}}, s.y, folds, model, 0.01), Error);
}

}  // TEST_SUITE
