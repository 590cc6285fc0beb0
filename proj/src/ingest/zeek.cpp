#include "iotsql/ingest/zeek.hpp"

#include <cmath>
#include <sstream>

#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/store/schema.hpp"
#include "json.hpp"

namespace iotsql::ingest {

std::string_view log_kind_name(LogKind kind) {
  switch (kind) {
    case LogKind::kConn: return "conn";
    case LogKind::kDns: return "dns";
    case LogKind::kHttp: return "http";
    case LogKind::kFiles: return "files";
    case LogKind::kNtp: return "ntp";
    case LogKind::kWeird: return "weird";
  }
  return "conn";
}

LogKind parse_log_kind(std::string_view name) {
  std::string n = to_lower(trim(name));
  if (n.size() > 4 && n.ends_with(".log")) n.resize(n.size() - 4);
  for (LogKind k : kAllLogKinds) {
    if (n == log_kind_name(k)) return k;
  }
  throw Error(Errc::kUnknownKind, std::string(name));
}

std::vector<std::string> zeek_field_names(LogKind kind) {
  const auto& schema = store::default_schema();
  auto idx = schema.find_table(std::string(log_kind_name(kind)) + ".log");
  std::vector<std::string> out;
  for (const auto& c : schema.tables()[*idx].columns) {
    if (c.name == "orig_h" || c.name == "orig_p" || c.name == "resp_h" || c.name == "resp_p") {
      out.push_back("id." + c.name);
    } else {
      out.push_back(c.name);
    }
  }
  return out;
}

std::optional<std::size_t> ParsedLog::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    std::string_view f = fields[i];
    if (iequals(f, name)) return i;
    if (starts_with_ci(f, "id.") && iequals(f.substr(3), name)) return i;
  }
  return std::nullopt;
}

namespace {

struct Directives {
  std::string separator = "\t";
  std::string set_separator = ",";
  std::string empty_field = "(empty)";
  std::string unset_field = "-";
};

std::string unescape_separator(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 3 < s.size() + 0 && s[i + 1] == 'x') {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 2, 2)), nullptr, 16));
      i += 3;
    } else {
      out += s[i];
    }
  }
  return out;
}

// Builds the typed record for a conn row; returns an error message on failure.
std::string build_conn(const ParsedLog& log, const std::vector<Field>& row, ConnRecord& rec) {
  auto get = [&](std::string_view name) -> const Field* {
    auto idx = log.field_index(name);
    return idx ? &row[*idx] : nullptr;
  };
  auto required = [&](std::string_view name) -> std::optional<std::string> {
    const Field* f = get(name);
    if (!f || !*f) return std::nullopt;
    return **f;
  };
  auto text = [&](std::string_view name, std::string& out) -> std::string {
    auto v = required(name);
    if (!v) return std::string(name) + " is unset";
    out = *v;
    return {};
  };
  auto count = [&](std::string_view name, std::int64_t& out) -> std::string {
    auto v = required(name);
    if (!v) return std::string(name) + " is unset";
    auto i = parse_int(*v);
    if (!i) return std::string(name) + " is not an integer: '" + *v + "'";
    out = *i;
    return {};
  };
  auto opt_count = [&](std::string_view name, std::optional<std::int64_t>& out) -> std::string {
    const Field* f = get(name);
    if (!f || !*f) return {};
    auto i = parse_int(**f);
    if (!i) return std::string(name) + " is not an integer: '" + **f + "'";
    out = *i;
    return {};
  };
  auto opt_bool = [&](std::string_view name, std::optional<bool>& out) -> std::string {
    const Field* f = get(name);
    if (!f || !*f) return {};
    if (**f == "T") {
      out = true;
    } else if (**f == "F") {
      out = false;
    } else {
      return std::string(name) + " is not T/F: '" + **f + "'";
    }
    return {};
  };
  auto opt_text = [&](std::string_view name, std::optional<std::string>& out) {
    const Field* f = get(name);
    if (f && *f) out = **f;
  };

  auto ts = required("ts");
  if (!ts) return "ts is unset";
  auto t = parse_epoch_seconds(*ts);
  if (!t) return "bad ts '" + *ts + "'";
  rec.ts = *t;
  std::string err;
  if (!(err = text("uid", rec.uid)).empty()) return err;
  if (!(err = text("orig_h", rec.orig_h)).empty()) return err;
  if (!(err = count("orig_p", rec.orig_p)).empty()) return err;
  if (!(err = text("resp_h", rec.resp_h)).empty()) return err;
  if (!(err = count("resp_p", rec.resp_p)).empty()) return err;
  if (!(err = text("proto", rec.proto)).empty()) return err;
  opt_text("service", rec.service);
  if (const Field* f = get("duration"); f && *f) {
    auto d = parse_double(**f);
    if (!d) return "bad duration '" + **f + "'";
    rec.duration = *d;
  }
  if (!(err = opt_count("orig_bytes", rec.orig_bytes)).empty()) return err;
  if (!(err = opt_count("resp_bytes", rec.resp_bytes)).empty()) return err;
  if (!(err = text("conn_state", rec.conn_state)).empty()) return err;
  if (!(err = opt_bool("local_orig", rec.local_orig)).empty()) return err;
  if (!(err = opt_bool("local_resp", rec.local_resp)).empty()) return err;
  if (!(err = count("missed_bytes", rec.missed_bytes)).empty()) return err;
  opt_text("history", rec.history);
  if (!(err = count("orig_pkts", rec.orig_pkts)).empty()) return err;
  if (!(err = count("orig_ip_bytes", rec.orig_ip_bytes)).empty()) return err;
  if (!(err = count("resp_pkts", rec.resp_pkts)).empty()) return err;
  if (!(err = count("resp_ip_bytes", rec.resp_ip_bytes)).empty()) return err;
  opt_text("tunnel_parents", rec.tunnel_parents);

  const Field* label = get("label");
  const Field* detail = get("detailed-label");
  if (label && *label) {
    try {
      rec.label = parse_iot23_label(**label, detail && *detail ? **detail : "-");
    } catch (const Error& e) {
      return e.what();
    }
  }
  rec.is_malicious = rec.label != AttackLabel::kBenign;
  return conn_violation(rec);
}

void accept_row(ParsedLog& log, std::vector<Field> row, std::size_t line_no) {
  if (log.kind == LogKind::kConn) {
    ConnRecord rec;
    std::string err = build_conn(log, row, rec);
    if (!err.empty()) {
      log.errors.push_back({line_no, Errc::kBadValue, err});
      return;
    }
    log.conn.push_back(std::move(rec));
  }
  log.rows.push_back(std::move(row));
  log.row_lines.push_back(line_no);
}

void parse_tsv_line(ParsedLog& log, const Directives& d, std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells = split(line, d.separator);
  if (cells.size() < log.fields.size() && !cells.empty()) {
    // IoT-23 writes the label columns space-separated inside the last cell.
    auto tail = split_whitespace(cells.back());
    if (cells.size() - 1 + tail.size() == log.fields.size()) {
      cells.pop_back();
      cells.insert(cells.end(), tail.begin(), tail.end());
    }
  }
  if (cells.size() != log.fields.size()) {
    log.errors.push_back({line_no, Errc::kFieldCountMismatch,
                          "expected " + std::to_string(log.fields.size()) + " fields, got " +
                              std::to_string(cells.size())});
    return;
  }
  std::vector<Field> row;
  row.reserve(cells.size());
  for (auto& c : cells) {
    if (c == d.unset_field) {
      row.emplace_back(std::nullopt);
    } else if (c == d.empty_field) {
      row.emplace_back(std::string());
    } else {
      row.emplace_back(std::move(c));
    }
  }
  accept_row(log, std::move(row), line_no);
}

Field json_field(const nlohmann::ordered_json& v) {
  if (v.is_null()) return std::nullopt;
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return std::string(v.get<bool>() ? "T" : "F");
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_float()) return format_fixed(v.get<double>(), 6);
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& e : v) {
      Field f = json_field(e);
      parts.push_back(f ? *f : "-");
    }
    return join(parts, ",");
  }
  return v.dump();
}

void parse_json_line(ParsedLog& log, std::string_view line, std::size_t line_no) {
  nlohmann::ordered_json obj;
  try {
    obj = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    log.errors.push_back({line_no, Errc::kParseError, e.what()});
    return;
  }
  if (!obj.is_object()) {
    log.errors.push_back({line_no, Errc::kParseError, "not a JSON object"});
    return;
  }
  if (log.rows.empty() && log.errors.empty() && log.fields == zeek_field_names(log.kind)) {
    if (obj.contains("label")) log.fields.push_back("label");
    if (obj.contains("detailed-label")) log.fields.push_back("detailed-label");
  }
  std::vector<Field> row;
  for (const auto& f : log.fields) {
    auto it = obj.find(f);
    if (it == obj.end() && f.starts_with("id.")) it = obj.find(f.substr(3));
    row.push_back(it == obj.end() ? Field{} : json_field(*it));
  }
  accept_row(log, std::move(row), line_no);
}

}  // namespace

ParsedLog parse_zeek(std::istream& in, LogKind kind) {
  ParsedLog log;
  log.kind = kind;
  Directives d;
  bool have_fields = false;
  bool json = false;
  bool decided = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!decided) {
      decided = true;
      json = trim(line).front() == '{';
      if (json) log.fields = zeek_field_names(kind);
    }
    if (json) {
      parse_json_line(log, line, line_no);
      continue;
    }
    if (line.front() == '#') {
      if (line.starts_with("#separator")) {
        d.separator = unescape_separator(trim(std::string_view(line).substr(10)));
        continue;
      }
      auto parts = split(line, d.separator);
      const std::string& key = parts[0];
      if (key == "#set_separator" && parts.size() > 1) {
        d.set_separator = parts[1];
      } else if (key == "#empty_field" && parts.size() > 1) {
        d.empty_field = parts[1];
      } else if (key == "#unset_field" && parts.size() > 1) {
        d.unset_field = parts[1];
      } else if (key == "#fields" || starts_with_ci(key, "#fields ")) {
        log.fields.clear();
        std::vector<std::string> raw(parts.begin() + 1, parts.end());
        if (key != "#fields") raw.insert(raw.begin(), key.substr(8));
        for (const auto& r : raw) {
          for (auto& w : split_whitespace(r)) log.fields.push_back(std::move(w));
        }
        have_fields = true;
      }
      continue;
    }
    if (!have_fields) {
      throw Error(Errc::kMissingFieldsHeader, "data at line " + std::to_string(line_no) + " before #fields");
    }
    parse_tsv_line(log, d, line, line_no);
  }
  return log;
}

ParsedLog parse_zeek(std::string_view text, LogKind kind) {
  std::istringstream in{std::string(text)};
  return parse_zeek(in, kind);
}

namespace {

std::string zeek_type(LogKind kind, std::size_t column) {
  const auto& schema = store::default_schema();
  const auto& table = schema.tables()[*schema.find_table(std::string(log_kind_name(kind)) + ".log")];
  const auto& c = table.columns[column];
  if (c.name == "orig_h" || c.name == "resp_h") return "addr";
  if (c.name == "orig_p" || c.name == "resp_p") return "port";
  if (c.name == "duration" || c.name == "rtt") return "interval";
  switch (c.attribute) {
    case store::Attribute::kTime: return "time";
    case store::Attribute::kNumber: return "count";
    case store::Attribute::kBoolean: return "bool";
    case store::Attribute::kText: return "string";
  }
  return "string";
}

void write_header(std::ostream& out, LogKind kind, const std::vector<std::string>& fields,
                  const std::vector<std::string>& types, Micros open_time) {
  out << "#separator \\x09\n";
  out << "#set_separator\t,\n";
  out << "#empty_field\t(empty)\n";
  out << "#unset_field\t-\n";
  out << "#path\t" << log_kind_name(kind) << "\n";
  out << "#open\t" << format_iso_time(open_time) << "\n";
  out << "#fields";
  for (const auto& f : fields) out << '\t' << f;
  out << "\n#types";
  for (const auto& t : types) out << '\t' << t;
  out << '\n';
}

void write_cell(std::ostream& out, const Field& f) {
  if (!f) {
    out << '-';
  } else if (f->empty()) {
    out << "(empty)";
  } else {
    out << *f;
  }
}

}  // namespace

void write_zeek_tsv(std::ostream& out, const ParsedLog& log, Micros open_time) {
  std::vector<std::string> types;
  const auto canonical = zeek_field_names(log.kind);
  for (const auto& f : log.fields) {
    std::string t = "string";
    for (std::size_t i = 0; i < canonical.size(); ++i) {
      if (canonical[i] == f) t = zeek_type(log.kind, i);
    }
    types.push_back(t);
  }
  write_header(out, log.kind, log.fields, types, open_time);
  for (const auto& row : log.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << '\t';
      write_cell(out, row[i]);
    }
    out << '\n';
  }
  out << "#close\t" << format_iso_time(open_time) << '\n';
}

void write_conn_log(std::ostream& out, const std::vector<ConnRecord>& records, Micros open_time) {
  auto fields = zeek_field_names(LogKind::kConn);
  std::vector<std::string> types;
  for (std::size_t i = 0; i < fields.size(); ++i) types.push_back(zeek_type(LogKind::kConn, i));
  types.back() = "set[string]";
  fields.push_back("label");
  fields.push_back("detailed-label");
  types.push_back("string");
  types.push_back("string");
  write_header(out, LogKind::kConn, fields, types, open_time);
  for (const auto& r : records) {
    const auto cells = conn_fields(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << '\t';
      write_cell(out, cells[i]);
    }
    if (r.label == AttackLabel::kBenign) {
      out << "\tBenign\t-\n";
    } else {
      out << "\tMalicious\t" << label_iot23_name(r.label) << '\n';
    }
  }
  out << "#close\t" << format_iso_time(open_time) << '\n';
}

ParsedLog make_log(LogKind kind, std::vector<std::vector<Field>> rows) {
  ParsedLog log;
  log.kind = kind;
  log.fields = zeek_field_names(kind);
  log.rows = std::move(rows);
  for (std::size_t i = 0; i < log.rows.size(); ++i) log.row_lines.push_back(i + 1);
  return log;
}

}  // namespace iotsql::ingest
