#include "iotsql/modelio/modelio.hpp"

#include <set>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "json.hpp"

namespace iotsql::modelio {

using json = nlohmann::ordered_json;

std::string build_sql_input(std::string_view question, const store::LinearizedSchema& schema,
                            std::string_view separator) {
  if (trim(question).empty()) throw Error(Errc::kEmptyQuestion, "question is empty");
  std::string out(question);
  out += separator;
  out += join(schema.tokens, ", ");
  return out;
}

std::string detection_row(const ingest::ConnRecord& r) {
  const auto fields = ingest::conn_fields(r);
  std::string out;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    if (i > 2) out += ' ';
    if (!fields[i]) {
      out += '-';
    } else if (fields[i]->empty()) {
      out += "(empty)";
    } else {
      for (char c : *fields[i]) out += (c == '\t' || c == '\n' || c == '\r') ? ' ' : c;
    }
  }
  return out;
}

DetectionExample build_detection_input(const ingest::ConnRecord& r, std::string id, std::string_view instruction) {
  DetectionExample e;
  e.id = std::move(id);
  e.instruction = std::string(instruction);
  e.row = detection_row(r);
  e.input = e.instruction + " " + e.row;
  e.gold = r.label != ingest::AttackLabel::kBenign;
  return e;
}

std::string_view label_payload(bool malicious) { return malicious ? "Malicious" : "Benign"; }

bool parse_label_payload(std::string_view payload) {
  const std::string l = to_lower(trim(payload));
  if (l == "malicious") return true;
  if (l == "benign") return false;
  throw Error(Errc::kParseError, "label payload '" + std::string(payload) + "' is neither Malicious nor Benign");
}

namespace {

template <typename F>
void for_each_object(std::istream& in, F&& f) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": not an object");
    f(j, line_no);
  }
}

std::string get_string(const json& j, const char* key, std::size_t line_no, Errc missing = Errc::kParseError) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    throw Error(missing, "line " + std::to_string(line_no) + ": missing '" + key + "'");
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": '" + key + "' is not a string");
}

void check_unique(std::set<std::string>& ids, const std::string& id, std::size_t line_no) {
  if (!ids.insert(id).second) throw Error(Errc::kDuplicateId, "'" + id + "' at line " + std::to_string(line_no));
}

}  // namespace

void write_sql_examples(std::ostream& out, const std::vector<SqlExample>& examples) {
  for (const auto& e : examples) out << json{{"id", e.id}, {"input", e.input}, {"gold", e.gold_sql}}.dump() << '\n';
}

std::vector<SqlExample> read_sql_examples(std::istream& in) {
  std::vector<SqlExample> out;
  std::set<std::string> ids;
  for_each_object(in, [&](const json& j, std::size_t line_no) {
    SqlExample e{get_string(j, "id", line_no, Errc::kMissingId), get_string(j, "input", line_no),
                 get_string(j, "gold", line_no)};
    check_unique(ids, e.id, line_no);
    out.push_back(std::move(e));
  });
  return out;
}

void write_detection_examples(std::ostream& out, const std::vector<DetectionExample>& examples) {
  for (const auto& e : examples) {
    out << json{{"id", e.id}, {"input", e.input}, {"gold", label_payload(e.gold)}}.dump() << '\n';
  }
}

std::vector<DetectionExample> read_detection_examples(std::istream& in) {
  std::vector<DetectionExample> out;
  std::set<std::string> ids;
  for_each_object(in, [&](const json& j, std::size_t line_no) {
    DetectionExample e;
    e.id = get_string(j, "id", line_no, Errc::kMissingId);
    e.input = get_string(j, "input", line_no);
    e.gold = parse_label_payload(get_string(j, "gold", line_no));
    if (e.input.starts_with(kDetectionPrompt)) {
      e.instruction = std::string(kDetectionPrompt);
      e.row = e.input.size() > kDetectionPrompt.size() ? e.input.substr(kDetectionPrompt.size() + 1) : "";
    }
    check_unique(ids, e.id, line_no);
    out.push_back(std::move(e));
  });
  return out;
}

std::vector<PredictionRecord> read_predictions(std::istream& in, PredictionKind kind) {
  std::vector<PredictionRecord> out;
  std::set<std::string> ids;
  for_each_object(in, [&](const json& j, std::size_t line_no) {
    PredictionRecord p{get_string(j, "id", line_no, Errc::kMissingId), get_string(j, "payload", line_no)};
    if (kind == PredictionKind::kDetection) {
      try {
        parse_label_payload(p.payload);
      } catch (const Error& e) {
        throw Error(Errc::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    check_unique(ids, p.id, line_no);
    out.push_back(std::move(p));
  });
  return out;
}

void write_predictions(std::ostream& out, const std::vector<PredictionRecord>& preds) {
  for (const auto& p : preds) out << json{{"id", p.id}, {"payload", p.payload}}.dump() << '\n';
}

}  // namespace iotsql::modelio
