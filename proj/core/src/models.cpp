#include "newstense/models.hpp"

#include <numeric>

#include "models_impl.hpp"
#include "newstense/error.hpp"
#include "newstense/eval.hpp"

namespace newstense {

const char* model_kind_name(ModelSpec::Kind k) {
  switch (k) {
    case ModelSpec::Kind::ZeroR: return "zeror";
    case ModelSpec::Kind::DecisionTree: return "dt";
    case ModelSpec::Kind::RandomForest: return "rf";
    case ModelSpec::Kind::LinearSVC: return "svc";
  }
  return "zeror";
}

ModelSpec::Kind model_kind_from_name(const std::string& name) {
  if (name == "zeror") return ModelSpec::Kind::ZeroR;
  if (name == "dt") return ModelSpec::Kind::DecisionTree;
  if (name == "rf") return ModelSpec::Kind::RandomForest;
  if (name == "svc") return ModelSpec::Kind::LinearSVC;
  throw Error("unknown model kind '" + name + "' (expected zeror, dt, rf, or svc)");
}

nlohmann::json ModelSpec::to_json() const {
  return nlohmann::json{{"kind", model_kind_name(kind)}, {"seed", seed}, {"hyper", hyper}};
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  ModelSpec s;
  s.kind = model_kind_from_name(j.at("kind").get<std::string>());
  s.seed = j.value("seed", s.seed);
  if (j.contains("hyper")) s.hyper = j.at("hyper").get<std::map<std::string, double>>();
  return s;
}

namespace {

Label majority_label(const std::array<uint32_t, 2>& counts) {
  // Ties go to Future.
  return counts[static_cast<int>(Label::Future)] >= counts[static_cast<int>(Label::Past)]
             ? Label::Future
             : Label::Past;
}

nlohmann::json tree_to_json(const DecisionTreeModel& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const TreeNode& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.counts[0], n.counts[1]});
  return nlohmann::json{{"nodes", nodes}};
}

DecisionTreeModel tree_from_json(const nlohmann::json& j) {
  DecisionTreeModel t;
  for (const auto& row : j.at("nodes")) {
    TreeNode n;
    n.feature = row.at(0).get<int32_t>();
    n.threshold = row.at(1).get<float>();
    n.left = row.at(2).get<int32_t>();
    n.right = row.at(3).get<int32_t>();
    n.counts = {row.at(4).get<uint32_t>(), row.at(5).get<uint32_t>()};
    t.nodes.push_back(n);
  }
  return t;
}

}  // namespace

Label DecisionTreeModel::predict_row(const FeatureMatrix& x, size_t row) const {
  size_t i = 0;
  while (nodes[i].feature >= 0)
    i = x.at(row, static_cast<uint32_t>(nodes[i].feature)) <= nodes[i].threshold
            ? static_cast<size_t>(nodes[i].left)
            : static_cast<size_t>(nodes[i].right);
  return majority_label(nodes[i].counts);
}

double DecisionTreeModel::future_share(const FeatureMatrix& x, size_t row) const {
  size_t i = 0;
  while (nodes[i].feature >= 0)
    i = x.at(row, static_cast<uint32_t>(nodes[i].feature)) <= nodes[i].threshold
            ? static_cast<size_t>(nodes[i].left)
            : static_cast<size_t>(nodes[i].right);
  const auto& c = nodes[i].counts;
  const double total = c[0] + c[1];
  return total > 0 ? c[static_cast<int>(Label::Future)] / total : 0.5;
}

double SvcModel::margin_row(const FeatureMatrix& x, size_t row) const {
  double m = bias;
  if (!x.sparse_rows.empty())
    for (const auto& [col, v] : x.sparse_rows[row]) m += static_cast<double>(weights[col]) * v;
  if (!x.dense_rows.empty()) {
    const auto& d = x.dense_rows[row];
    for (size_t j = 0; j < d.size(); ++j)
      m += static_cast<double>(weights[x.sparse_width + j]) * d[j];
  }
  return m;
}

TrainedModel train_model(const ModelSpec& spec, const FeatureMatrix& x, const std::vector<Label>& y,
                         std::vector<std::string> feature_header) {
  if (x.rows() == 0 || x.rows() != y.size())
    throw Error("train_model: matrix rows and labels must be non-empty and match");
  if (!feature_header.empty() && feature_header.size() != x.cols())
    throw Error("train_model: feature header size does not match the column count");

  TrainedModel model;
  model.spec = spec;
  model.feature_header = std::move(feature_header);

  switch (spec.kind) {
    case ModelSpec::Kind::ZeroR: {
      ZeroRModel z;
      for (Label l : y) z.class_counts[static_cast<int>(l)] += 1;
      z.majority = majority_label(z.class_counts);
      model.payload = z;
      break;
    }
    case ModelSpec::Kind::DecisionTree: {
      std::vector<uint32_t> rows(x.rows());
      std::iota(rows.begin(), rows.end(), 0u);
      model.payload = impl::fit_tree(x, y, rows, static_cast<int>(spec.get("max_depth", 10)),
                                     static_cast<int>(spec.get("min_samples_leaf", 1)), nullptr, 0);
      break;
    }
    case ModelSpec::Kind::RandomForest: {
      model.payload = impl::fit_forest(x, y, static_cast<uint32_t>(spec.get("trees", 51)),
                                       static_cast<int>(spec.get("max_depth", 10)),
                                       static_cast<int>(spec.get("min_samples_leaf", 1)), spec.seed);
      break;
    }
    case ModelSpec::Kind::LinearSVC: {
      model.payload = impl::fit_svc(x, y, spec.get("lambda", 0.1), spec.get("tol", 1e-4),
                                    static_cast<uint32_t>(spec.get("max_epochs", 1000)));
      break;
    }
  }
  return model;
}

Prediction predict(const TrainedModel& model, const FeatureMatrix& x) {
  const size_t n = x.rows();
  Prediction out;
  out.labels.reserve(n);
  out.margins.reserve(n);

  if (const auto* z = std::get_if<ZeroRModel>(&model.payload)) {
    const double m = z->majority == Label::Future ? 1.0 : -1.0;
    out.labels.assign(n, z->majority);
    out.margins.assign(n, m);
  } else if (const auto* t = std::get_if<DecisionTreeModel>(&model.payload)) {
    for (size_t i = 0; i < n; ++i) {
      const double share = t->future_share(x, i);
      out.margins.push_back(2.0 * share - 1.0);
      out.labels.push_back(share >= 0.5 ? Label::Future : Label::Past);
    }
  } else if (const auto* f = std::get_if<ForestModel>(&model.payload)) {
    for (size_t i = 0; i < n; ++i) {
      int future_votes = 0;
      for (const DecisionTreeModel& tree : f->trees)
        if (tree.predict_row(x, i) == Label::Future) ++future_votes;
      const int past_votes = static_cast<int>(f->trees.size()) - future_votes;
      out.margins.push_back(f->trees.empty()
                                ? 0.0
                                : static_cast<double>(future_votes - past_votes) /
                                      static_cast<double>(f->trees.size()));
      out.labels.push_back(future_votes >= past_votes ? Label::Future : Label::Past);
    }
  } else {
    const auto& svc = std::get<SvcModel>(model.payload);
    for (size_t i = 0; i < n; ++i) {
      const double m = svc.margin_row(x, i);
      out.margins.push_back(m);
      out.labels.push_back(m >= 0.0 ? Label::Future : Label::Past);
    }
  }
  return out;
}

nlohmann::json TrainedModel::to_json() const {
  nlohmann::json payload_json;
  if (const auto* z = std::get_if<ZeroRModel>(&payload)) {
    payload_json = {{"class_counts", z->class_counts}, {"majority", label_name(z->majority)}};
  } else if (const auto* t = std::get_if<DecisionTreeModel>(&payload)) {
    payload_json = tree_to_json(*t);
  } else if (const auto* f = std::get_if<ForestModel>(&payload)) {
    nlohmann::json trees = nlohmann::json::array();
    for (const DecisionTreeModel& tree : f->trees) trees.push_back(tree_to_json(tree));
    payload_json = {{"trees", trees}};
  } else {
    const auto& svc = std::get<SvcModel>(payload);
    payload_json = {{"weights", svc.weights},
                    {"bias", svc.bias},
                    {"epochs_run", svc.epochs_run},
                    {"final_objective", svc.final_objective}};
  }
  return nlohmann::json{{"version", kSchemaVersion},
                        {"spec", spec.to_json()},
                        {"feature_header", feature_header},
                        {"payload", payload_json}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kSchemaVersion)
    throw Error("trained model: unsupported or missing version");
  TrainedModel m;
  m.spec = ModelSpec::from_json(j.at("spec"));
  m.feature_header = j.at("feature_header").get<std::vector<std::string>>();
  const nlohmann::json& p = j.at("payload");
  switch (m.spec.kind) {
    case ModelSpec::Kind::ZeroR: {
      ZeroRModel z;
      z.class_counts = p.at("class_counts").get<std::array<uint32_t, 2>>();
      z.majority = label_from_name(p.at("majority").get<std::string>());
      m.payload = z;
      break;
    }
    case ModelSpec::Kind::DecisionTree:
      m.payload = tree_from_json(p);
      break;
    case ModelSpec::Kind::RandomForest: {
      ForestModel f;
      for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t));
      m.payload = std::move(f);
      break;
    }
    case ModelSpec::Kind::LinearSVC: {
      SvcModel s;
      s.weights = p.at("weights").get<std::vector<float>>();
      s.bias = p.at("bias").get<float>();
      s.epochs_run = p.at("epochs_run").get<uint32_t>();
      s.final_objective = p.at("final_objective").get<double>();
      m.payload = std::move(s);
      break;
    }
  }
  return m;
}

GridResult grid_search(const ModelSpec& base,
                       const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                       const FeatureMatrix& x, const std::vector<Label>& y, const FoldPlan& folds) {
  for (const auto& [name, values] : grid)
    if (values.empty()) throw Error("grid_search: dimension '" + name + "' has no values");

  size_t total = 1;
  for (const auto& dim : grid) total *= dim.second.size();

  GridResult result;
  result.best = base;
  double best_mean = -1.0;

  for (size_t idx = 0; idx < total; ++idx) {
    // Decompose idx so the first dimension varies slowest (outermost loop).
    GridRow row;
    size_t rem = idx;
    for (size_t d = grid.size(); d-- > 0;) {
      const auto& [name, values] = grid[d];
      row.params[name] = values[rem % values.size()];
      rem /= values.size();
    }

    ModelSpec spec = base;
    for (const auto& [name, value] : row.params) spec.hyper[name] = value;

    for (int f = 0; f < folds.k; ++f) {
      const std::vector<uint32_t> train_ids = folds.train_indices(f);
      const std::vector<uint32_t> test_ids = folds.test_indices(f);
      std::vector<Label> y_train, y_test;
      y_train.reserve(train_ids.size());
      y_test.reserve(test_ids.size());
      for (uint32_t r : train_ids) y_train.push_back(y[r]);
      for (uint32_t r : test_ids) y_test.push_back(y[r]);

      TrainedModel m = train_model(spec, x.gather(train_ids), y_train);
      Prediction p = predict(m, x.gather(test_ids));
      row.fold_accuracy.push_back(evaluate(p.labels, y_test).accuracy());
    }
    double sum = 0.0;
    for (double a : row.fold_accuracy) sum += a;
    row.mean_accuracy = sum / static_cast<double>(row.fold_accuracy.size());

    if (row.mean_accuracy > best_mean) {  // ties keep the earliest combination
      best_mean = row.mean_accuracy;
      result.best = spec;
      result.best_index = result.rows.size();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace newstense
