#include "newstense/eval.hpp"

#include <cstdio>

#include "newstense/error.hpp"

namespace newstense {

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

uint32_t Metrics::total() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

double Metrics::accuracy() const {
  return ratio(confusion[0][0] + confusion[1][1], total());
}

double Metrics::precision(Label c) const {
  const int p = static_cast<int>(c);
  return ratio(confusion[p][p], confusion[0][p] + confusion[1][p]);
}

double Metrics::recall(Label c) const {
  const int g = static_cast<int>(c);
  return ratio(confusion[g][g], confusion[g][0] + confusion[g][1]);
}

double Metrics::macro_precision() const {
  return 0.5 * (precision(Label::Past) + precision(Label::Future));
}

double Metrics::macro_recall() const {
  return 0.5 * (recall(Label::Past) + recall(Label::Future));
}

nlohmann::json Metrics::to_json() const {
  return nlohmann::json{
      {"confusion", {{confusion[0][0], confusion[0][1]}, {confusion[1][0], confusion[1][1]}}},
      {"accuracy", accuracy()},
      {"macro_precision", macro_precision()},
      {"macro_recall", macro_recall()},
      {"past", {{"precision", precision(Label::Past)}, {"recall", recall(Label::Past)}}},
      {"future", {{"precision", precision(Label::Future)}, {"recall", recall(Label::Future)}}}};
}

Metrics evaluate(const std::vector<Label>& predicted, const std::vector<Label>& gold) {
  if (predicted.empty() || predicted.size() != gold.size())
    throw Error("evaluate: prediction and gold label vectors must be non-empty and equal-sized");
  Metrics m;
  for (size_t i = 0; i < predicted.size(); ++i)
    m.confusion[static_cast<int>(gold[i])][static_cast<int>(predicted[i])] += 1;
  return m;
}

std::string EvalReport::render_text() const {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-14s %8s %8s %8s %8s %8s %8s %8s", "classifier", "acc%",
                "macP%", "macR%", "P.past%", "R.past%", "P.fut%", "R.fut%");
  out += buf;
  if (include_timings) {
    std::snprintf(buf, sizeof(buf), " %9s %9s", "train(s)", "test(s)");
    out += buf;
  }
  out += '\n';

  for (const EvalRow& r : rows) {
    const Metrics& m = r.metrics;
    std::snprintf(buf, sizeof(buf), "%-14s %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f",
                  r.name.c_str(), 100.0 * m.accuracy(), 100.0 * m.macro_precision(),
                  100.0 * m.macro_recall(), 100.0 * m.precision(Label::Past),
                  100.0 * m.recall(Label::Past), 100.0 * m.precision(Label::Future),
                  100.0 * m.recall(Label::Future));
    out += buf;
    if (include_timings) {
      std::snprintf(buf, sizeof(buf), " %9.3f %9.3f", r.train_seconds, r.test_seconds);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const EvalRow& r : rows) {
    nlohmann::json j{{"name", r.name}, {"metrics", r.metrics.to_json()}};
    if (include_timings) {
      j["train_seconds"] = r.train_seconds;
      j["test_seconds"] = r.test_seconds;
    }
    rows_json.push_back(std::move(j));
  }
  return nlohmann::json{{"rows", rows_json}};
}

}  // namespace newstense
