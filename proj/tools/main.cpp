// newstense: classify whether a financial news story talks about what
// already happened or what is expected to happen.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "newstense/baseline.hpp"
#include "newstense/config.hpp"
#include "newstense/error.hpp"
#include "newstense/pipeline.hpp"

namespace fs = std::filesystem;
using namespace newstense;

namespace {

// Validation problems (bad flags, unreadable files) exit 1; failures during
// processing exit 2.
struct UsageError : Error {
  using Error::Error;
};

struct Overrides {
  std::string config_path;
  std::optional<std::string> corpus, data_dir, out_dir, tree;
  std::optional<int> folds, jobs;
  std::optional<uint64_t> seed;
  std::optional<std::string> mode, model_kind;
  std::optional<double> chi2_percentile, gap_tolerance;
};

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    try {
      cfg = RunConfig::load(o.config_path);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (o.corpus) cfg.corpus = *o.corpus;
  if (o.data_dir) cfg.data_dir = *o.data_dir;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.tree) cfg.semantic_tree = *o.tree;
  if (o.folds) cfg.folds = *o.folds;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.seed) cfg.pipeline.seed = *o.seed;
  if (o.mode) cfg.pipeline.mode = feature_mode_from_name(*o.mode);
  if (o.model_kind) cfg.pipeline.model.kind = model_kind_from_name(*o.model_kind);
  if (o.chi2_percentile) cfg.pipeline.chi2_percentile = *o.chi2_percentile;
  if (o.gap_tolerance) cfg.pipeline.gap_tolerance = *o.gap_tolerance;

  if (cfg.folds < 2) throw UsageError("--folds must be at least 2");
  if (cfg.jobs < 1) throw UsageError("--jobs must be at least 1");
  return cfg;
}

Corpus load_corpus_checked(const RunConfig& cfg) {
  if (cfg.corpus.empty())
    throw UsageError("no corpus given: pass --corpus or set 'corpus' in the config");
  if (!fs::exists(cfg.corpus))
    throw UsageError("corpus file not found: " + cfg.corpus.string());
  try {
    return Corpus::load_jsonl(cfg.corpus);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Resources load_resources_checked(const RunConfig& cfg) {
  if (!fs::is_directory(cfg.data_dir))
    throw UsageError("data directory not found: " + cfg.data_dir.string());
  try {
    return Resources::load(cfg.data_dir);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return cfg.out_dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::vector<std::string> corpus_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.items.size());
  for (const NewsItem& item : corpus.items) ids.push_back(item.id);
  return ids;
}

std::vector<std::vector<float>> dense_rows_of(const std::vector<ProcessedDoc>& docs) {
  std::vector<std::vector<float>> rows;
  rows.reserve(docs.size());
  for (const ProcessedDoc& d : docs) {
    const auto [num, perc] = numerical_features(d.doc);
    rows.push_back(assemble_dense(
        num, perc,
        temporal_features(d.doc, d.analysis.groups, d.analysis.dependency, d.analysis.proximity)));
  }
  return rows;
}

// --- subcommand bodies -----------------------------------------------------

int run_inspect(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);
  const DistributionSummary d = class_distribution(corpus, res.lingua);

  std::printf("%-8s %6s %10s %9s %10s %9s\n", "label", "items", "sent.mean", "sent.std",
              "word.mean", "word.std");
  for (int c = 0; c < 2; ++c) {
    const ClassStats& s = d.per_label[c];
    std::printf("%-8s %6zu %10.2f %9.2f %10.2f %9.2f\n",
                std::string(label_name(static_cast<Label>(c))).c_str(), s.count, s.sentences_mean,
                s.sentences_std, s.words_mean, s.words_std);
  }
  std::printf("%-8s %6zu\n", "total", d.total);

  nlohmann::json j;
  for (int c = 0; c < 2; ++c) {
    const ClassStats& s = d.per_label[c];
    j[std::string(label_name(static_cast<Label>(c)))] = {{"items", s.count},
                                                         {"sentences_mean", s.sentences_mean},
                                                         {"sentences_std", s.sentences_std},
                                                         {"words_mean", s.words_mean},
                                                         {"words_std", s.words_std}};
  }
  j["total"] = d.total;
  write_file(out_path(cfg, "inspect.json"), j.dump(2) + "\n");
  return 0;
}

int run_preprocess(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  std::ofstream out(out_path(cfg, "preprocessed.jsonl"));
  if (!out) throw Error("cannot write preprocessed.jsonl");
  for (const NewsItem& item : corpus.items) {
    const ProcessedDoc pd = preprocess(item.content, item.ticker, res);
    nlohmann::ordered_json groups = nlohmann::ordered_json::array();
    for (const VerbGroup& g : pd.analysis.groups)
      groups.push_back({{"begin", g.begin},
                        {"end", g.end},
                        {"tense", std::string(tense_name(g.tense))},
                        {"sentence", g.sentence}});
    nlohmann::ordered_json j{{"id", item.id},
                             {"rendered", render(pd.doc)},
                             {"sentences", pd.doc.sentences.size()},
                             {"clauses", pd.doc.clauses.size()},
                             {"verb_groups", groups},
                             {"num", pd.norm_stats.num},
                             {"perc", pd.norm_stats.perc},
                             {"date", pd.norm_stats.date},
                             {"referential_resolved", pd.referential_resolved},
                             {"notes", pd.norm_stats.notes}};
    out << j.dump() << '\n';
  }
  std::printf("preprocessed %zu documents -> %s\n", corpus.items.size(),
              (cfg.out_dir / "preprocessed.jsonl").string().c_str());
  return 0;
}

int run_features(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  const FittedFeatures fitted =
      fit_features(cfg.pipeline, docs, corpus_ids(corpus), corpus.labels());
  const FeatureMatrix x = transform_features(fitted, docs);

  std::string header = "column,name\n";
  for (size_t c = 0; c < fitted.header.size(); ++c)
    header += std::to_string(c) + "," + csv_quote(fitted.header[c]) + "\n";
  write_file(out_path(cfg, "feature_header.csv"), header);

  std::ofstream out(out_path(cfg, "features.csv"));
  if (!out) throw Error("cannot write features.csv");
  out << "row,id,column,value\n";  // sparse triplets; absent cells are zero
  size_t nnz = 0;
  char buf[64];
  for (size_t r = 0; r < x.rows(); ++r) {
    const std::string id = csv_quote(corpus.items[r].id);
    if (!x.sparse_rows.empty()) {
      for (const auto& [col, v] : x.sparse_rows[r]) {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%u,%g\n", r, id.c_str(), col, v);
        out << buf;
        ++nnz;
      }
    }
    if (!x.dense_rows.empty()) {
      for (size_t j = 0; j < x.dense_rows[r].size(); ++j) {
        if (x.dense_rows[r][j] == 0.0f) continue;
        std::snprintf(buf, sizeof(buf), "%zu,%s,%u,%g\n", r, id.c_str(),
                      x.sparse_width + static_cast<uint32_t>(j), x.dense_rows[r][j]);
        out << buf;
        ++nnz;
      }
    }
  }
  std::printf("features: %zu rows x %u columns, %zu nonzeros -> %s\n", x.rows(), x.cols(), nnz,
              (cfg.out_dir / "features.csv").string().c_str());
  return 0;
}

int run_tune(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  const std::vector<Label> labels = corpus.labels();
  const FoldPlan folds = stratified_folds(labels, cfg.folds, cfg.pipeline.seed);

  const TuneResult result =
      tune_vectorizer(cfg.pipeline, cfg.tune_grid, docs, corpus_ids(corpus), labels, folds);
  write_file(out_path(cfg, "tune.csv"), result.to_csv());

  const TuneRow& best = result.rows[result.best_index];
  std::printf("tuned %zu vectorizer configurations\n", result.rows.size());
  std::printf("best: max_df=%g min_df=%g ngram=(%d,%d) max_features=%d accuracy=%.4f\n",
              best.config.max_df_ratio, best.config.min_df, best.config.n_min, best.config.n_max,
              best.config.max_features, best.accuracy);
  return 0;
}

int run_select(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  const std::vector<Label> labels = corpus.labels();

  // N-gram block without the chi-squared mask, so the report can show every
  // column's score next to the keep/drop outcome.
  PipelineSettings ngrams_only = cfg.pipeline;
  ngrams_only.mode = FeatureMode::Ngrams;
  ngrams_only.chi2_percentile = 1.0;
  const FittedFeatures fitted =
      fit_features(ngrams_only, docs, corpus_ids(corpus), labels);
  const FeatureMatrix pooled = transform_features(fitted, docs);

  const std::vector<double> scores = chi2_scores(pooled, labels);
  const SelectionMask mask = select_percentile(scores, cfg.pipeline.chi2_percentile);

  std::string chi2_csv = "column,name,score,kept\n";
  {
    std::vector<char> kept(scores.size(), 0);
    for (uint32_t c : mask.kept_columns) kept[c] = 1;
    char buf[64];
    for (size_t c = 0; c < scores.size(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.9g,%d\n", scores[c], kept[c] ? 1 : 0);
      chi2_csv += std::to_string(c) + "," + csv_quote(fitted.header[c]) + buf;
    }
  }
  write_file(out_path(cfg, "chi2.csv"), chi2_csv);

  const FeatureMatrix base = apply_mask_sparse(pooled, mask);
  const FoldPlan folds = stratified_folds(labels, cfg.folds, cfg.pipeline.seed);
  const CombinatorialResult result =
      combinatorial_select(base, dense_rows_of(docs), temporal_candidates(), labels, folds,
                           cfg.pipeline.model, cfg.pipeline.gap_tolerance);
  write_file(out_path(cfg, "candidates.csv"), result.to_csv());

  std::vector<std::string> names;
  for (uint32_t i : result.retained) names.push_back(temporal_candidates()[i].name);
  write_file(out_path(cfg, "selected.json"),
             nlohmann::json{{"selected_candidates", names}}.dump(2) + "\n");

  std::printf("chi2: kept %zu of %zu n-gram columns (percentile %.2f)\n",
              mask.kept_columns.size(), scores.size(), cfg.pipeline.chi2_percentile);
  std::printf("combinatorial: retained %zu of %zu candidates\n", result.retained.size(),
              temporal_candidates().size());
  for (const std::string& n : names) std::printf("  + %s\n", n.c_str());
  return 0;
}

int run_train(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  const PipelineModel model = fit_pipeline(cfg.pipeline, corpus, res);
  const fs::path path = out_path(cfg, "model.json");
  model.save(path);
  std::printf("trained %s on %zu documents, %zu feature columns -> %s\n",
              model_kind_name(cfg.pipeline.model.kind), corpus.items.size(),
              model.features.header.size(), path.string().c_str());
  return 0;
}

int run_evaluate(const RunConfig& cfg, const std::string& models_flag, bool no_timings) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);

  std::vector<ModelSpec::Kind> kinds;
  if (models_flag.empty()) {
    kinds.push_back(cfg.pipeline.model.kind);
  } else {
    std::stringstream ss(models_flag);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) kinds.push_back(model_kind_from_name(part));
    }
    if (kinds.empty()) throw UsageError("--models given but no model names parsed");
  }

  const std::vector<ProcessedDoc> docs = preprocess_corpus(corpus, res);
  const std::vector<std::string> ids = corpus_ids(corpus);
  const std::vector<Label> labels = corpus.labels();
  const FoldPlan folds = stratified_folds(labels, cfg.folds, cfg.pipeline.seed);

  EvalReport report;
  report.include_timings = !no_timings;
  for (ModelSpec::Kind kind : kinds) {
    PipelineSettings s = cfg.pipeline;
    if (kind != cfg.pipeline.model.kind) s.model = ModelSpec{kind, {}, cfg.pipeline.seed};
    s.model.kind = kind;
    report.rows.push_back(
        cross_validate_processed(s, docs, ids, labels, folds, "", cfg.jobs).row);
  }

  const std::string text = report.render_text();
  std::fputs(text.c_str(), stdout);
  write_file(out_path(cfg, "report.txt"), text);
  write_file(out_path(cfg, "report.json"), report.to_json().dump(2) + "\n");
  return 0;
}

int run_baseline_cmd(const RunConfig& cfg) {
  const Corpus corpus = load_corpus_checked(cfg);
  const Resources res = load_resources_checked(cfg);
  const fs::path tree_path = cfg.semantic_tree_path();
  if (!fs::exists(tree_path))
    throw UsageError("semantic tree file not found: " + tree_path.string());
  const SemanticTree tree = SemanticTree::load(tree_path);

  const auto t0 = std::chrono::steady_clock::now();
  const BaselineOutput out = run_baseline(corpus, tree, res);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  EvalReport report;
  report.rows.push_back(EvalRow{"baseline", out.metrics, 0.0, elapsed});
  std::fputs(report.render_text().c_str(), stdout);

  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (size_t i = 0; i < out.items.size(); ++i) {
    const BaselineItemTrace& t = out.items[i];
    items.push_back({{"id", corpus.items[i].id},
                     {"prediction", std::string(label_name(t.prediction))},
                     {"past", t.tally.past},
                     {"present", t.tally.present},
                     {"future", t.tally.future},
                     {"present_followed_by_number", t.tally.present_followed_by_number},
                     {"summary_sentences", t.summary}});
  }
  nlohmann::ordered_json j{{"metrics", out.metrics.to_json()}, {"items", items}};
  write_file(out_path(cfg, "baseline.json"), j.dump(2) + "\n");
  return 0;
}

int run_predict(const RunConfig& cfg, const std::string& model_file, const std::string& ticker,
                const std::string& text_flag, const std::string& input_file, bool as_json) {
  const fs::path model_path = model_file.empty() ? cfg.out_dir / "model.json" : fs::path(model_file);
  if (!fs::exists(model_path))
    throw UsageError("model file not found: " + model_path.string() +
                     " (train one first or pass --model-file)");
  const Resources res = load_resources_checked(cfg);

  std::string content;
  if (!text_flag.empty()) {
    content = text_flag;
  } else if (!input_file.empty()) {
    std::ifstream in(input_file);
    if (!in) throw UsageError("cannot read input file: " + input_file);
    std::stringstream ss;
    ss << in.rdbuf();
    content = ss.str();
  } else {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    content = ss.str();
  }

  PipelineModel model = PipelineModel::load(model_path);
  const PipelinePrediction p = predict_pipeline(model, content, ticker, res);

  if (as_json) {
    nlohmann::ordered_json audit = nlohmann::ordered_json::object();
    const auto& names = dense_feature_names();
    for (size_t i = 0; i < p.dense.size(); ++i) audit[names[i]] = p.dense[i];
    nlohmann::ordered_json j{{"label", std::string(label_name(p.label))},
                             {"margin", p.margin},
                             {"temporal_audit", audit}};
    std::printf("%s\n", j.dump(2).c_str());
    return 0;
  }

  std::printf("label: %s\n", std::string(label_name(p.label)).c_str());
  std::printf("margin: %+.6f  (positive leans future)\n", p.margin);
  std::printf("temporal audit:\n");
  const auto& names = dense_feature_names();
  for (size_t i = 0; i < p.dense.size(); ++i) {
    if (p.dense[i] == 0.0f) continue;  // print only the active values
    std::printf("  %-24s %g\n", names[i].c_str(), p.dense[i]);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newstense: past-vs-future classification of financial news"};
  app.require_subcommand(1);

  Overrides o;
  app.add_option("--config", o.config_path, "config file (JSON, or TOML subset by extension)");
  app.add_option("--corpus", o.corpus, "JSONL corpus path");
  app.add_option("--data-dir", o.data_dir, "directory with word lists and verb tables");
  app.add_option("--out-dir", o.out_dir, "directory for outputs");
  app.add_option("--tree", o.tree, "semantic tree JSON (baseline)");
  app.add_option("--folds", o.folds, "cross-validation folds");
  app.add_option("--jobs", o.jobs, "worker threads for fold execution");
  app.add_option("--seed", o.seed, "master random seed");
  app.add_option("--mode", o.mode, "feature mode: ngrams | ngrams_numtemp | ngrams_selected");
  app.add_option("--model", o.model_kind, "model kind: zeror | dt | rf | svc");
  app.add_option("--chi2-percentile", o.chi2_percentile, "fraction of n-gram columns kept");
  app.add_option("--gap-tolerance", o.gap_tolerance,
                 "allowed widening of the past/future precision gap in selection");

  app.add_subcommand("inspect", "corpus statistics per label");
  app.add_subcommand("preprocess", "emit tagged documents as JSONL");
  app.add_subcommand("features", "emit the feature matrix (sparse CSV) and its header");
  app.add_subcommand("tune", "grid-search vectorizer settings by cross-validation");
  app.add_subcommand("select", "chi-squared and candidate screening reports");
  app.add_subcommand("train", "fit the configured pipeline and save the model");
  auto* cmd_eval = app.add_subcommand("evaluate", "k-fold cross-validation report");
  std::string models_flag;
  bool no_timings = false;
  cmd_eval->add_option("--models", models_flag, "comma-separated model kinds to compare");
  cmd_eval->add_flag("--no-timings", no_timings, "omit wall-clock columns (stable output)");
  app.add_subcommand("baseline", "rule-based classifier run and metrics");
  auto* cmd_predict = app.add_subcommand("predict", "classify one document with a saved model");
  std::string ticker, text_flag, input_file, model_file;
  bool predict_json = false;
  cmd_predict->add_option("--ticker", ticker, "main asset name the story is about")->required();
  cmd_predict->add_option("--text", text_flag, "document text inline");
  cmd_predict->add_option("--input", input_file, "read the document from a file (default: stdin)");
  cmd_predict->add_option("--model-file", model_file, "saved model (default: <out-dir>/model.json)");
  cmd_predict->add_flag("--json", predict_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = resolve_config(o);
    if (app.got_subcommand("inspect")) return run_inspect(cfg);
    if (app.got_subcommand("preprocess")) return run_preprocess(cfg);
    if (app.got_subcommand("features")) return run_features(cfg);
    if (app.got_subcommand("tune")) return run_tune(cfg);
    if (app.got_subcommand("select")) return run_select(cfg);
    if (app.got_subcommand("train")) return run_train(cfg);
    if (app.got_subcommand("evaluate")) return run_evaluate(cfg, models_flag, no_timings);
    if (app.got_subcommand("baseline")) return run_baseline_cmd(cfg);
    if (app.got_subcommand("predict"))
      return run_predict(cfg, model_file, ticker, text_flag, input_file, predict_json);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
