#include "newstense/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include "newstense/error.hpp"

namespace newstense {

Resources Resources::load(const std::filesystem::path& data_dir) {
  return Resources{LexiconSet::load_dir(data_dir), Lingua(data_dir)};
}

ProcessedDoc preprocess(const std::string& content, const std::string& main_ticker,
                        const Resources& res) {
  ProcessedDoc out;
  out.doc = tokenize(content);
  out.norm_stats = normalize_numerics(out.doc);
  tag_entities(out.doc, res.lexicons);
  out.asset_stats = tag_assets(out.doc, res.lexicons, main_ticker);
  out.referential_resolved = resolve_referential(out.doc, res.lexicons);
  out.analysis = res.lingua.analyze(out.doc);
  return out;
}

std::vector<ProcessedDoc> preprocess_corpus(const Corpus& corpus, const Resources& res) {
  std::vector<ProcessedDoc> docs;
  docs.reserve(corpus.items.size());
  for (const NewsItem& item : corpus.items) docs.push_back(preprocess(item.content, item.ticker, res));
  return docs;
}

std::string_view feature_mode_name(FeatureMode m) {
  switch (m) {
    case FeatureMode::Ngrams: return "ngrams";
    case FeatureMode::NgramsNumTemp: return "ngrams_numtemp";
    case FeatureMode::NgramsSelected: return "ngrams_selected";
  }
  return "ngrams";
}

FeatureMode feature_mode_from_name(std::string_view name) {
  if (name == "ngrams") return FeatureMode::Ngrams;
  if (name == "ngrams_numtemp") return FeatureMode::NgramsNumTemp;
  if (name == "ngrams_selected") return FeatureMode::NgramsSelected;
  throw Error("unknown feature mode '" + std::string(name) +
              "' (expected ngrams, ngrams_numtemp, or ngrams_selected)");
}

nlohmann::json PipelineSettings::to_json() const {
  nlohmann::json fams = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    if (families[i]) fams.push_back(std::string(family_name(static_cast<NgramFamily>(i))));
  return nlohmann::json{{"ngram", ngram_config_to_json(ngram)},
                        {"families", fams},
                        {"mode", std::string(feature_mode_name(mode))},
                        {"chi2_percentile", chi2_percentile},
                        {"selected_candidates", selected_candidates},
                        {"gap_tolerance", gap_tolerance},
                        {"model", model.to_json()},
                        {"seed", seed}};
}

PipelineSettings PipelineSettings::from_json(const nlohmann::json& j) {
  PipelineSettings s;
  if (j.contains("ngram")) s.ngram = ngram_config_from_json(j.at("ngram"));
  if (j.contains("families")) {
    s.families = {false, false, false};
    for (const auto& f : j.at("families"))
      s.families[static_cast<int>(family_from_name(f.get<std::string>()))] = true;
  }
  if (j.contains("mode")) s.mode = feature_mode_from_name(j.at("mode").get<std::string>());
  s.chi2_percentile = j.value("chi2_percentile", s.chi2_percentile);
  if (j.contains("selected_candidates"))
    s.selected_candidates = j.at("selected_candidates").get<std::vector<std::string>>();
  s.gap_tolerance = j.value("gap_tolerance", s.gap_tolerance);
  if (j.contains("model")) s.model = ModelSpec::from_json(j.at("model"));
  s.seed = j.value("seed", s.seed);
  return s;
}

namespace {

// Scrubbed text and the full dense tail, computed once per document.
struct Precomputed {
  std::vector<std::string> texts;
  std::vector<std::vector<float>> dense;
};

Precomputed precompute(const std::vector<ProcessedDoc>& docs) {
  Precomputed pre;
  pre.texts.reserve(docs.size());
  pre.dense.reserve(docs.size());
  for (const ProcessedDoc& d : docs) {
    pre.texts.push_back(scrub_for_ngrams(d.doc));
    const auto [num, perc] = numerical_features(d.doc);
    const TemporalFeatures tf =
        temporal_features(d.doc, d.analysis.groups, d.analysis.dependency, d.analysis.proximity);
    pre.dense.push_back(assemble_dense(num, perc, tf));
  }
  return pre;
}

SparseVec pooled_transform(const std::vector<VectorizerModel>& vecs, const std::string& text) {
  SparseVec row;
  uint32_t offset = 0;
  for (const VectorizerModel& v : vecs) {
    for (const auto& [col, val] : transform_ngrams(text, v)) row.emplace_back(offset + col, val);
    offset += static_cast<uint32_t>(v.vocabulary.size());
  }
  return row;  // blocks are sorted and offsets increase, so the row is sorted
}

uint32_t pooled_width(const std::vector<VectorizerModel>& vecs) {
  uint32_t w = 0;
  for (const VectorizerModel& v : vecs) w += static_cast<uint32_t>(v.vocabulary.size());
  return w;
}

std::vector<std::string> pooled_names(const std::vector<VectorizerModel>& vecs) {
  std::vector<std::string> names;
  names.reserve(pooled_width(vecs));
  for (const VectorizerModel& v : vecs) {
    const std::string prefix = std::string(family_name(v.family)) + ":";
    for (const std::string& gram : v.vocabulary) names.push_back(prefix + gram);
  }
  return names;
}

std::vector<uint32_t> dense_cols_for(const PipelineSettings& s) {
  switch (s.mode) {
    case FeatureMode::Ngrams: return {};
    case FeatureMode::NgramsNumTemp: {
      std::vector<uint32_t> all(kDenseWidth);
      std::iota(all.begin(), all.end(), 0u);
      return all;
    }
    case FeatureMode::NgramsSelected: {
      std::set<uint32_t> cols;
      const auto& candidates = temporal_candidates();
      for (const std::string& name : s.selected_candidates) {
        auto it = std::find_if(candidates.begin(), candidates.end(),
                               [&](const CandidateSpec& c) { return c.name == name; });
        if (it == candidates.end()) throw Error("unknown feature candidate '" + name + "'");
        for (int c : it->dense_cols) cols.insert(static_cast<uint32_t>(c));
      }
      return {cols.begin(), cols.end()};
    }
  }
  return {};
}

FittedFeatures fit_features_impl(const PipelineSettings& s, const std::vector<std::string>& texts,
                                 const std::vector<std::string>& ids,
                                 const std::vector<Label>& labels) {
  FittedFeatures fitted;
  for (int i = 0; i < 3; ++i)
    if (s.families[i])
      fitted.vectorizers.push_back(
          fit_vectorizer(texts, static_cast<NgramFamily>(i), s.ngram, ids));

  const uint32_t width = pooled_width(fitted.vectorizers);
  std::vector<std::string> names = pooled_names(fitted.vectorizers);

  if (s.chi2_percentile < 1.0 && width > 0) {
    if (labels.size() != texts.size())
      throw Error("fit_features: chi-squared selection needs one label per document");
    FeatureMatrix m;
    m.sparse_width = width;
    m.sparse_rows.reserve(texts.size());
    for (const std::string& t : texts) m.sparse_rows.push_back(pooled_transform(fitted.vectorizers, t));
    fitted.mask = select_percentile(chi2_scores(m, labels), s.chi2_percentile);
    fitted.has_mask = true;
    std::vector<std::string> kept;
    kept.reserve(fitted.mask.kept_columns.size());
    for (uint32_t c : fitted.mask.kept_columns) kept.push_back(std::move(names[c]));
    names = std::move(kept);
  }

  fitted.dense_cols = dense_cols_for(s);
  for (uint32_t c : fitted.dense_cols) names.push_back(dense_feature_names()[c]);
  fitted.header = std::move(names);
  return fitted;
}

FeatureMatrix transform_impl(const FittedFeatures& fitted, const Precomputed& pre,
                             const std::vector<uint32_t>& rows) {
  FeatureMatrix m;
  m.sparse_width = pooled_width(fitted.vectorizers);
  m.sparse_rows.reserve(rows.size());
  for (uint32_t r : rows) m.sparse_rows.push_back(pooled_transform(fitted.vectorizers, pre.texts[r]));
  if (fitted.has_mask) m = apply_mask_sparse(m, fitted.mask);
  if (!fitted.dense_cols.empty()) {
    m.dense_rows.reserve(rows.size());
    for (uint32_t r : rows) {
      std::vector<float> sub;
      sub.reserve(fitted.dense_cols.size());
      for (uint32_t c : fitted.dense_cols) sub.push_back(pre.dense[r][c]);
      m.dense_rows.push_back(std::move(sub));
    }
  }
  return m;
}

std::vector<uint32_t> all_rows(size_t n) {
  std::vector<uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

}  // namespace

FittedFeatures fit_features(const PipelineSettings& settings,
                            const std::vector<ProcessedDoc>& docs,
                            const std::vector<std::string>& doc_ids,
                            const std::vector<Label>& labels) {
  std::vector<std::string> texts;
  texts.reserve(docs.size());
  for (const ProcessedDoc& d : docs) texts.push_back(scrub_for_ngrams(d.doc));
  return fit_features_impl(settings, texts, doc_ids, labels);
}

FeatureMatrix transform_features(const FittedFeatures& fitted,
                                 const std::vector<ProcessedDoc>& docs) {
  return transform_impl(fitted, precompute(docs), all_rows(docs.size()));
}

nlohmann::json FittedFeatures::to_json() const {
  nlohmann::json vecs = nlohmann::json::array();
  for (const VectorizerModel& v : vectorizers) vecs.push_back(v.to_json());
  nlohmann::json j{{"vectorizers", vecs},
                   {"has_mask", has_mask},
                   {"dense_cols", dense_cols},
                   {"header", header}};
  if (has_mask) j["mask"] = mask.to_json();
  return j;
}

FittedFeatures FittedFeatures::from_json(const nlohmann::json& j) {
  FittedFeatures f;
  for (const auto& v : j.at("vectorizers")) f.vectorizers.push_back(VectorizerModel::from_json(v));
  f.has_mask = j.at("has_mask").get<bool>();
  if (f.has_mask) f.mask = SelectionMask::from_json(j.at("mask"));
  f.dense_cols = j.at("dense_cols").get<std::vector<uint32_t>>();
  f.header = j.at("header").get<std::vector<std::string>>();
  return f;
}

nlohmann::json PipelineModel::to_json() const {
  return nlohmann::json{{"version", kSchemaVersion},
                        {"settings", settings.to_json()},
                        {"features", features.to_json()},
                        {"model", model.to_json()}};
}

PipelineModel PipelineModel::from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kSchemaVersion)
    throw Error("pipeline model: unsupported or missing version");
  PipelineModel m;
  m.settings = PipelineSettings::from_json(j.at("settings"));
  m.features = FittedFeatures::from_json(j.at("features"));
  m.model = TrainedModel::from_json(j.at("model"));
  return m;
}

void PipelineModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw Error("cannot write model file: " + file.string());
  out << to_json().dump(2) << '\n';
}

PipelineModel PipelineModel::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read model file: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file " + file.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

PipelineModel fit_pipeline(const PipelineSettings& settings, const Corpus& corpus,
                           const Resources& res) {
  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  std::vector<std::string> ids;
  ids.reserve(corpus.items.size());
  for (const NewsItem& item : corpus.items) ids.push_back(item.id);
  const std::vector<Label> labels = corpus.labels();

  PipelineModel pm;
  pm.settings = settings;
  pm.features = fit_features(settings, docs, ids, labels);
  const FeatureMatrix x = transform_features(pm.features, docs);

  ModelSpec spec = settings.model;
  spec.seed = settings.seed;  // the pipeline seed is authoritative
  pm.model = train_model(spec, x, labels, pm.features.header);
  return pm;
}

PipelinePrediction predict_pipeline(const PipelineModel& model, const std::string& content,
                                    const std::string& main_ticker, const Resources& res) {
  PipelinePrediction out;
  out.processed = preprocess(content, main_ticker, res);

  std::vector<ProcessedDoc> one;
  one.push_back(out.processed);
  const Precomputed pre = precompute(one);
  const FeatureMatrix x = transform_impl(model.features, pre, {0});

  const Prediction p = predict(model.model, x);
  out.label = p.labels[0];
  out.margin = p.margins[0];
  out.dense = pre.dense[0];
  return out;
}

CvOutcome cross_validate_processed(const PipelineSettings& settings,
                                   const std::vector<ProcessedDoc>& docs,
                                   const std::vector<std::string>& ids,
                                   const std::vector<Label>& labels, const FoldPlan& folds,
                                   std::string row_name, int jobs) {
  const size_t n = docs.size();
  if (ids.size() != n || labels.size() != n || folds.assignment.size() != n)
    throw Error("cross_validate: documents, ids, labels and fold plan must align");

  using clock = std::chrono::steady_clock;
  const Precomputed pre = precompute(docs);

  CvOutcome out;
  out.pooled.assign(n, Label::Past);
  out.row.name = row_name.empty() ? model_kind_name(settings.model.kind) : std::move(row_name);
  out.fold_fit_ids.resize(folds.k);
  std::vector<double> fold_train_s(folds.k, 0.0), fold_test_s(folds.k, 0.0);

  auto run_fold = [&](int f) {
    const std::vector<uint32_t> train_ids = folds.train_indices(f);
    const std::vector<uint32_t> test_ids = folds.test_indices(f);

    std::vector<std::string> texts_sub, ids_sub;
    std::vector<Label> labels_sub;
    texts_sub.reserve(train_ids.size());
    ids_sub.reserve(train_ids.size());
    labels_sub.reserve(train_ids.size());
    for (uint32_t r : train_ids) {
      texts_sub.push_back(pre.texts[r]);
      ids_sub.push_back(ids[r]);
      labels_sub.push_back(labels[r]);
    }

    const auto t0 = clock::now();
    const FittedFeatures fitted = fit_features_impl(settings, texts_sub, ids_sub, labels_sub);
    const FeatureMatrix x_train = transform_impl(fitted, pre, train_ids);
    ModelSpec spec = settings.model;
    spec.seed = settings.seed + static_cast<uint64_t>(f);  // decorrelate folds
    const TrainedModel model = train_model(spec, x_train, labels_sub, fitted.header);
    const auto t1 = clock::now();

    const FeatureMatrix x_test = transform_impl(fitted, pre, test_ids);
    const Prediction p = predict(model, x_test);
    const auto t2 = clock::now();

    // Folds write disjoint slots, so this is safe under parallel execution.
    for (size_t i = 0; i < test_ids.size(); ++i) out.pooled[test_ids[i]] = p.labels[i];
    fold_train_s[f] = std::chrono::duration<double>(t1 - t0).count();
    fold_test_s[f] = std::chrono::duration<double>(t2 - t1).count();
    out.fold_fit_ids[f] = std::move(ids_sub);
  };

  const int workers = std::max(1, std::min(jobs, folds.k));
  if (workers == 1) {
    for (int f = 0; f < folds.k; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{0};
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (int f = next.fetch_add(1); f < folds.k; f = next.fetch_add(1)) run_fold(f);
      });
    for (std::thread& t : pool) t.join();
  }

  for (int f = 0; f < folds.k; ++f) {  // summed in fold order for determinism
    out.row.train_seconds += fold_train_s[f];
    out.row.test_seconds += fold_test_s[f];
  }
  out.row.metrics = evaluate(out.pooled, labels);
  return out;
}

CvOutcome cross_validate(const PipelineSettings& settings, const Corpus& corpus,
                         const Resources& res, const FoldPlan& folds, std::string row_name,
                         int jobs) {
  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  std::vector<std::string> ids;
  ids.reserve(corpus.items.size());
  for (const NewsItem& item : corpus.items) ids.push_back(item.id);
  return cross_validate_processed(settings, docs, ids, corpus.labels(), folds,
                                  std::move(row_name), jobs);
}

}  // namespace newstense
