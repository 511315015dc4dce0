#include "newstense/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "newstense/error.hpp"

namespace newstense {

std::vector<NgramConfig> enumerate_vectorizer_grid(const VectorizerGrid& grid) {
  if (grid.max_df.empty() || grid.min_df.empty() || grid.ngram_range.empty() ||
      grid.max_features.empty())
    throw Error("vectorizer grid: every dimension needs at least one value");

  std::vector<NgramConfig> out;
  out.reserve(grid.max_df.size() * grid.min_df.size() * grid.ngram_range.size() *
              grid.max_features.size());
  for (double max_df : grid.max_df)
    for (double min_df : grid.min_df)
      for (const auto& [n_min, n_max] : grid.ngram_range)
        for (int max_features : grid.max_features) {
          NgramConfig c;
          c.max_df_ratio = max_df;
          c.min_df = min_df;
          c.n_min = n_min;
          c.n_max = n_max;
          c.max_features = max_features;
          out.push_back(c);
        }
  return out;
}

std::string TuneResult::to_csv() const {
  std::string out = "max_df,min_df,n_min,n_max,max_features,accuracy,best\n";
  char buf[160];
  for (size_t i = 0; i < rows.size(); ++i) {
    const TuneRow& r = rows[i];
    std::snprintf(buf, sizeof(buf), "%g,%g,%d,%d,%d,%.6f,%d\n", r.config.max_df_ratio,
                  r.config.min_df, r.config.n_min, r.config.n_max, r.config.max_features,
                  r.accuracy, i == best_index ? 1 : 0);
    out += buf;
  }
  return out;
}

TuneResult tune_vectorizer(const PipelineSettings& base, const VectorizerGrid& grid,
                           const std::vector<ProcessedDoc>& docs,
                           const std::vector<std::string>& ids, const std::vector<Label>& labels,
                           const FoldPlan& folds) {
  TuneResult result;
  double best = -1.0;
  for (const NgramConfig& cfg : enumerate_vectorizer_grid(grid)) {
    PipelineSettings s = base;
    s.ngram = cfg;
    const CvOutcome cv = cross_validate_processed(s, docs, ids, labels, folds);
    TuneRow row{cfg, cv.row.metrics.accuracy()};
    if (row.accuracy > best) {
      best = row.accuracy;
      result.best_index = result.rows.size();
    }
    result.rows.push_back(row);
  }
  return result;
}

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error("config line " + std::to_string(line) + ": " + what);
}

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

nlohmann::ordered_json parse_value(const std::string& s, size_t& i, int line);

nlohmann::ordered_json parse_string(const std::string& s, size_t& i, int line) {
  ++i;  // opening quote
  std::string out;
  while (i < s.size() && s[i] != '"') {
    if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '"' || s[i + 1] == '\\')) ++i;
    out += s[i++];
  }
  if (i >= s.size()) fail(line, "unterminated string");
  ++i;  // closing quote
  return out;
}

nlohmann::ordered_json parse_array(const std::string& s, size_t& i, int line) {
  ++i;  // '['
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  skip_ws(s, i);
  if (i < s.size() && s[i] == ']') {
    ++i;
    return arr;
  }
  while (true) {
    arr.push_back(parse_value(s, i, line));
    skip_ws(s, i);
    if (i < s.size() && s[i] == ',') {
      ++i;
      skip_ws(s, i);
      continue;
    }
    if (i < s.size() && s[i] == ']') {
      ++i;
      return arr;
    }
    fail(line, "expected ',' or ']' in array");
  }
}

nlohmann::ordered_json parse_value(const std::string& s, size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) fail(line, "missing value");
  if (s[i] == '"') return parse_string(s, i, line);
  if (s[i] == '[') return parse_array(s, i, line);

  size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != ' ' && s[i] != '\t') ++i;
  const std::string tok = s.substr(start, i - start);
  if (tok == "true") return true;
  if (tok == "false") return false;

  try {
    size_t used = 0;
    if (tok.find_first_of(".eE") == std::string::npos) {
      const long long v = std::stoll(tok, &used);
      if (used == tok.size()) return v;
    } else {
      const double v = std::stod(tok, &used);
      if (used == tok.size()) return v;
    }
  } catch (const std::exception&) {
    // falls through to the error below
  }
  fail(line, "cannot parse value '" + tok + "'");
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

nlohmann::ordered_json toml_subset_to_json(const std::string& text) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  nlohmann::ordered_json* section = &root;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      const std::string path = trim(line.substr(1, line.size() - 2));
      if (path.empty()) fail(line_no, "empty section name");
      section = &root;
      size_t start = 0;
      while (start <= path.size()) {
        const size_t dot = path.find('.', start);
        const std::string part =
            trim(dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start));
        if (part.empty()) fail(line_no, "empty section name component");
        section = &((*section)[part]);
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(line_no, "empty key");

    const std::string rest = line.substr(eq + 1);
    size_t i = 0;
    nlohmann::ordered_json value = parse_value(rest, i, line_no);
    skip_ws(rest, i);
    if (i != rest.size()) fail(line_no, "trailing characters after value");
    (*section)[key] = std::move(value);
  }
  return root;
}

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
  RunConfig c;
  if (j.contains("corpus")) c.corpus = j.at("corpus").get<std::string>();
  if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
  if (j.contains("semantic_tree")) c.semantic_tree = j.at("semantic_tree").get<std::string>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  c.folds = j.value("folds", c.folds);
  c.jobs = j.value("jobs", c.jobs);

  if (j.contains("pipeline")) {
    const nlohmann::json plain = j.at("pipeline");
    c.pipeline = PipelineSettings::from_json(plain);
  }

  if (j.contains("model_grid")) {
    const auto& grid = j.at("model_grid");
    if (!grid.is_object()) throw Error("config: model_grid must map parameter -> value array");
    for (const auto& [name, values] : grid.items())
      c.model_grid.emplace_back(name, values.get<std::vector<double>>());
  }

  if (j.contains("tune_grid")) {
    const auto& g = j.at("tune_grid");
    if (g.contains("max_df")) c.tune_grid.max_df = g.at("max_df").get<std::vector<double>>();
    if (g.contains("min_df")) c.tune_grid.min_df = g.at("min_df").get<std::vector<double>>();
    if (g.contains("max_features"))
      c.tune_grid.max_features = g.at("max_features").get<std::vector<int>>();
    if (g.contains("ngram_range")) {
      c.tune_grid.ngram_range.clear();
      for (const auto& pair : g.at("ngram_range")) {
        if (!pair.is_array() || pair.size() != 2)
          throw Error("config: ngram_range entries must be [min, max] pairs");
        c.tune_grid.ngram_range.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
      }
    }
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read config file: " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::ordered_json j;
  if (file.extension() == ".toml") {
    j = toml_subset_to_json(buffer.str());
  } else {
    try {
      j = nlohmann::ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
      throw Error("config file " + file.string() + " is not valid JSON: " + e.what());
    }
  }
  return from_json(j);
}

}  // namespace newstense
