#include <cmath>
#include <sstream>

#include "iotsql/common/strings.hpp"
#include "iotsql/eval/eval.hpp"
#include "json.hpp"

namespace iotsql::eval {

using json = nlohmann::ordered_json;

namespace {

// Fixed rounding keeps report bytes stable across platforms.
double r6(double x) { return std::round(x * 1e6) / 1e6; }

json class_json(const ClassScore& s) {
  return {{"precision", r6(s.precision)}, {"recall", r6(s.recall)}, {"f1", r6(s.f1)}, {"support", s.support}};
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string to_json(const SqlEvalReport& r) {
  json j;
  j["comparison"] = {{"columns", "positional, names ignored"},
                     {"rows", "multiset; sequence when the gold query has ORDER BY"},
                     {"numeric_rel_tol", r.options.rel_tol},
                     {"timeout_ms", r.options.timeout.count()},
                     {"logical", "exact match after token normalization"}};
  j["n"] = r.n;
  j["execution_acc"] = r6(r.execution_acc);
  j["logical_acc"] = r6(r.logical_acc);
  json per = json::object();
  for (const auto& [table, s] : r.per_table) {
    per[table] = {{"n", s.n}, {"execution_acc", r6(s.execution_acc())}, {"logical_acc", r6(s.logical_acc())}};
  }
  j["per_table"] = per;
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"id", f.id}, {"reason", f.reason}});
  j["failures"] = fails;
  return j.dump(2) + "\n";
}

std::string to_json(const DetectionReport& r) {
  json j;
  j["n"] = r.n;
  j["macro_precision"] = r6(r.macro_precision);
  j["macro_recall"] = r6(r.macro_recall);
  j["macro_f1"] = r6(r.macro_f1);
  j["accuracy"] = r6(r.accuracy);
  j["confusion"] = {{"tp", r.confusion[1][1]}, {"fn", r.confusion[1][0]}, {"fp", r.confusion[0][1]},
                    {"tn", r.confusion[0][0]}};
  j["malicious"] = class_json(r.malicious);
  j["benign"] = class_json(r.benign);
  return j.dump(2) + "\n";
}

std::string to_text(const SqlEvalReport& r) {
  std::ostringstream os;
  os << "comparison: positional columns, row multisets (ordered if gold has ORDER BY), rel tol "
     << format_double(r.options.rel_tol) << "\n";
  os << "n=" << r.n << "  execution=" << format_fixed(r.execution_acc, 4) << "  logical=" << format_fixed(r.logical_acc, 4)
     << "\n\n";
  os << pad("table", 16) << pad("n", 8) << pad("exec", 10) << "logical\n";
  for (const auto& [table, s] : r.per_table) {
    os << pad(table, 16) << pad(std::to_string(s.n), 8) << pad(format_fixed(s.execution_acc(), 4), 10)
       << format_fixed(s.logical_acc(), 4) << "\n";
  }
  os << "\nfailures: " << r.failures.size() << "\n";
  return os.str();
}

std::string to_text(const DetectionReport& r) {
  std::ostringstream os;
  os << "n=" << r.n << "\n";
  os << pad("", 12) << pad("precision", 11) << pad("recall", 9) << pad("f1", 9) << "support\n";
  auto line = [&](const char* name, const ClassScore& s) {
    os << pad(name, 12) << pad(format_fixed(s.precision, 4), 11) << pad(format_fixed(s.recall, 4), 9)
       << pad(format_fixed(s.f1, 4), 9) << s.support << "\n";
  };
  line("benign", r.benign);
  line("malicious", r.malicious);
  os << pad("macro", 12) << pad(format_fixed(r.macro_precision, 4), 11) << pad(format_fixed(r.macro_recall, 4), 9)
     << format_fixed(r.macro_f1, 4) << "\n";
  os << "confusion: tp=" << r.confusion[1][1] << " fn=" << r.confusion[1][0] << " fp=" << r.confusion[0][1]
     << " tn=" << r.confusion[0][0] << "\n";
  return os.str();
}

}  // namespace iotsql::eval
