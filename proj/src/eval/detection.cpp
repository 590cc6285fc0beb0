#include <map>
#include <set>

#include "iotsql/common/error.hpp"
#include "iotsql/eval/eval.hpp"

namespace iotsql::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

ClassScore class_score(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassScore s;
  s.precision = ratio(tp, tp + fp);
  s.recall = ratio(tp, tp + fn);
  const double d = s.precision + s.recall;
  s.f1 = d > 0.0 ? 2.0 * s.precision * s.recall / d : 0.0;
  s.support = tp + fn;
  return s;
}

}  // namespace

DetectionReport detection_metrics(const std::vector<bool>& golds, const std::vector<bool>& preds) {
  if (golds.size() != preds.size()) {
    throw Error(Errc::kLengthMismatch,
                std::to_string(golds.size()) + " golds vs " + std::to_string(preds.size()) + " predictions");
  }
  if (golds.empty()) throw Error(Errc::kEmpty, "no predictions to score");
  DetectionReport r;
  r.n = golds.size();
  for (std::size_t i = 0; i < golds.size(); ++i) ++r.confusion[golds[i]][preds[i]];
  const std::size_t tp = r.confusion[1][1], fn = r.confusion[1][0], fp = r.confusion[0][1], tn = r.confusion[0][0];
  r.malicious = class_score(tp, fp, fn);
  r.benign = class_score(tn, fn, fp);
  r.macro_precision = (r.malicious.precision + r.benign.precision) / 2.0;
  r.macro_recall = (r.malicious.recall + r.benign.recall) / 2.0;
  r.macro_f1 = (r.malicious.f1 + r.benign.f1) / 2.0;
  r.accuracy = ratio(tp + tn, r.n);
  return r;
}

DetectionReport score_detection(const std::vector<modelio::DetectionExample>& examples,
                                const std::vector<modelio::PredictionRecord>& predictions) {
  std::map<std::string, bool> pred_by_id;
  for (const auto& p : predictions) {
    if (!pred_by_id.emplace(p.id, modelio::parse_label_payload(p.payload)).second) {
      throw Error(Errc::kDuplicateId, "prediction '" + p.id + "'");
    }
  }
  std::set<std::string> ids;
  std::vector<bool> golds, preds;
  for (const auto& e : examples) {
    ids.insert(e.id);
    auto it = pred_by_id.find(e.id);
    if (it == pred_by_id.end()) throw Error(Errc::kMissingPrediction, "no prediction for '" + e.id + "'");
    golds.push_back(e.gold);
    preds.push_back(it->second);
  }
  for (const auto& p : predictions) {
    if (!ids.count(p.id)) throw Error(Errc::kUnknownId, "prediction '" + p.id + "' matches no example");
  }
  return detection_metrics(golds, preds);
}

}  // namespace iotsql::eval
