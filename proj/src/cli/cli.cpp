#include "iotsql/cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "iotsql/baselines/baselines.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/eval/eval.hpp"
#include "iotsql/ingest/loader.hpp"
#include "iotsql/ingest/synth.hpp"
#include "iotsql/ingest/zeek.hpp"
#include "iotsql/modelio/modelio.hpp"
#include "iotsql/splitter/anonymize.hpp"
#include "iotsql/splitter/split.hpp"
#include "iotsql/store/database.hpp"
#include "iotsql/templates/corpus_io.hpp"
#include "iotsql/templates/generator.hpp"
#include "json.hpp"

namespace iotsql::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Holds <out>/.lock for the lifetime of a command.
class OutputLock {
 public:
  explicit OutputLock(const fs::path& out) : path_(out / ".lock") {
    fs::create_directories(out);
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw Error(Errc::kConfig, "output directory is in use (remove " + path_.string() + " if stale)");
    std::fclose(f);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  fs::path path_;
};

struct Context {
  RunConfig config;
  fs::path out;
  std::ostream& log;
  std::string command;
  std::map<std::string, std::string> options;
  std::vector<fs::path> inputs;
  std::vector<fs::path> artifacts;

  std::uint64_t seed() const { return config.get_u64("seed"); }

  fs::path logs_dir() const {
    const auto& v = config.get("input.logs_dir");
    return v.empty() ? out / "synth" : fs::path(v);
  }
  fs::path db_dir() const {
    const auto& v = config.get("input.db");
    return v.empty() ? out / "db" : fs::path(v);
  }
  fs::path conn_log() const {
    const auto& v = config.get("input.conn_log");
    return v.empty() ? logs_dir() / "logs" / "conn.log" : fs::path(v);
  }

  fs::path require(const fs::path& p, bool directory = false) {
    if (directory ? !fs::is_directory(p) : !fs::is_regular_file(p)) {
      throw Error(Errc::kConfig, std::string(directory ? "missing directory " : "missing file ") + p.string());
    }
    if (!directory) inputs.push_back(p);
    return p;
  }

  void write(const fs::path& rel, const std::string& content) {
    const fs::path p = out / rel;
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(Errc::kIo, "cannot write " + p.string());
    f << content;
    if (!f) throw Error(Errc::kIo, "write failed for " + p.string());
    artifacts.push_back(p);
  }

  std::string relative(const fs::path& p) const {
    std::error_code ec;
    const fs::path base = fs::weakly_canonical(out, ec);
    const fs::path full = fs::weakly_canonical(p, ec);
    const fs::path rel = full.lexically_relative(base);
    if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
    return p.generic_string();
  }

  void write_run_manifest() {
    json j;
    j["command"] = command;
    j["options"] = options;
    j["config_hash"] = hex64(config.hash());
    j["config"] = config.values();
    auto files = [&](std::vector<fs::path> paths) {
      std::vector<std::string> rel;
      for (const auto& p : paths) rel.push_back(relative(p));
      std::vector<std::size_t> order(paths.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rel[a] < rel[b]; });
      json arr = json::array();
      std::set<std::string> seen;
      for (auto i : order) {
        if (!seen.insert(rel[i]).second) continue;
        const std::string bytes = read_file(paths[i]);
        arr.push_back({{"path", rel[i]}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a64(bytes))}});
      }
      return arr;
    };
    j["inputs"] = files(inputs);
    j["artifacts"] = files(artifacts);
    const fs::path p = out / "runs" / (command + ".json");
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    f << j.dump(2) << '\n';
  }
};

ingest::SynthSpec synth_spec(const RunConfig& c) {
  ingest::SynthSpec s = ingest::SynthSpec::defaults();
  s.conn = c.get_u64("synth.conn");
  s.dns = c.get_u64("synth.dns");
  s.http = c.get_u64("synth.http");
  s.files = c.get_u64("synth.files");
  s.ntp = c.get_u64("synth.ntp");
  s.weird = c.get_u64("synth.weird");
  s.readings_per_sensor = c.get_u64("synth.readings_per_sensor");
  s.rooms = c.get_u64("synth.rooms");
  s.address_pool = c.get_u64("synth.address_pool");
  s.seed = c.get_u64("seed");
  try {
    ingest::validate(s);
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  return s;
}

splitter::Ratios split_ratios(const RunConfig& c) {
  const auto parts = c.get_list("split.ratios");
  std::vector<double> v;
  for (const auto& p : parts) {
    auto d = parse_double(p);
    if (!d) throw Error(Errc::kConfig, "split.ratios: bad number '" + p + "'");
    v.push_back(*d);
  }
  if (v.size() != 3) throw Error(Errc::kConfig, "split.ratios needs three values");
  splitter::Ratios r{v[0], v[1], v[2]};
  try {
    splitter::validate(r);
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  return r;
}

splitter::NetworkSplitConfig network_config(const RunConfig& c) {
  splitter::NetworkSplitConfig n;
  n.train_attacks.clear();
  for (const auto& name : c.get_list("split.train_attacks")) {
    std::optional<ingest::AttackLabel> label;
    for (auto l : ingest::kAllLabels) {
      if (iequals(name, ingest::label_name(l))) label = l;
    }
    try {
      if (!label) label = ingest::parse_iot23_label("Malicious", name);
    } catch (const Error& e) {
      throw Error(Errc::kConfig, std::string("split.train_attacks: ") + e.what());
    }
    if (*label == ingest::AttackLabel::kBenign) throw Error(Errc::kConfig, "split.train_attacks cannot list Benign");
    n.train_attacks.insert(*label);
  }
  const std::string mode = c.get("split.network_mode");
  if (mode == "published_totals") {
    n.totals = splitter::kPublishedTotals;
  } else if (mode != "proportional") {
    throw Error(Errc::kConfig, "split.network_mode must be proportional or published_totals");
  }
  return n;
}

templates::GeneratorConfig generator_config(const RunConfig& c) {
  templates::GeneratorConfig g;
  g.n_pairs = c.get_u64("corpus.size");
  g.seed = c.get_u64("seed");
  g.max_attempts = c.get_u64("corpus.max_attempts");
  g.temporal_floor = c.get_double("corpus.temporal_floor");
  for (const auto& item : c.get_list("corpus.template_weights")) {
    const auto eq = item.find('=');
    std::optional<double> w;
    if (eq != std::string::npos) w = parse_double(item.substr(eq + 1));
    if (!w || *w < 0) throw Error(Errc::kConfig, "corpus.template_weights: bad entry '" + item + "'");
    g.template_weights[std::string(trim(item.substr(0, eq)))] = *w;
  }
  return g;
}

baselines::Hyperparams hyperparams(const RunConfig& c) {
  baselines::Hyperparams h;
  h.forest.n_trees = c.get_u64("baseline.n_trees");
  h.forest.tree.max_depth = c.get_u64("baseline.max_depth");
  h.forest.tree.max_features = c.get_u64("baseline.max_features");
  h.forest.tree.min_samples_split = c.get_u64("baseline.min_samples_split");
  h.svm.epochs = c.get_u64("baseline.svm_epochs");
  h.svm.learning_rate = c.get_double("baseline.svm_lr");
  h.svm.l2 = c.get_double("baseline.svm_l2");
  return h;
}

eval::SqlEvalOptions eval_options(const RunConfig& c) {
  eval::SqlEvalOptions o;
  o.rel_tol = c.get_double("eval.rel_tol");
  o.timeout = std::chrono::milliseconds(c.get_u64("eval.timeout_ms"));
  return o;
}

std::vector<ingest::ConnRecord> read_conn_records(const fs::path& p, std::ostream& log) {
  std::ifstream in(p);
  if (!in) throw Error(Errc::kIo, "cannot read " + p.string());
  const auto parsed = ingest::parse_zeek(in, ingest::LogKind::kConn);
  if (!parsed.errors.empty()) {
    log << p.filename().string() << ": skipped " << parsed.errors.size() << " malformed line(s), first at line "
        << parsed.errors.front().line << ": " << parsed.errors.front().message << "\n";
  }
  return parsed.conn;
}

// ---- commands ----

void cmd_synth(Context& ctx) {
  const auto spec = synth_spec(ctx.config);
  const auto out = ingest::synthesize_logs(spec);
  const fs::path dir = ctx.out / "synth";
  ingest::write_synth(dir, out, spec.start);
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) ctx.artifacts.push_back(e.path());
  }
  ctx.log << "synth: " << out.conn.size() << " conn records, " << out.logs.size() << " auxiliary logs, "
          << out.sensors.size() << " sensor tables, " << out.devices.size() << " devices\n";
}

void cmd_ingest(Context& ctx) {
  const fs::path dir = ctx.require(ctx.logs_dir(), true);
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) ctx.inputs.push_back(e.path());
  }
  ingest::IngestReport rep;
  const auto db = ingest::load_directory(dir, &rep);
  const fs::path db_out = ctx.out / "db";
  fs::remove_all(db_out);
  db.save(db_out);
  for (const auto& e : fs::directory_iterator(db_out)) ctx.artifacts.push_back(e.path());
  std::ostringstream os;
  for (const auto& [table, n] : rep.rows) os << table << "\t" << n << "\n";
  os << "problems\t" << rep.problems.size() << "\n";
  for (const auto& p : rep.problems) os << p << "\n";
  ctx.write("ingest/report.txt", os.str());
  ctx.log << os.str();
}

store::Database open_db(Context& ctx) {
  const fs::path dir = ctx.require(ctx.db_dir(), true);
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) ctx.inputs.push_back(e.path());
  }
  return store::Database::load(dir);
}

void cmd_gen_pairs(Context& ctx) {
  const auto gcfg = generator_config(ctx.config);
  const std::string manual = ctx.config.get("input.manual_pairs");
  if (!manual.empty()) ctx.require(manual);
  const auto db = open_db(ctx);
  auto pairs = templates::generate_corpus(db, templates::default_bank(), gcfg);
  if (!manual.empty()) {
    std::ifstream in(manual);
    auto extra = templates::read_manual_pairs(in, db);
    std::set<std::string> ids;
    for (const auto& p : pairs) ids.insert(p.id);
    for (auto& p : extra) {
      if (!ids.insert(p.id).second) throw Error(Errc::kDuplicateId, "manual pair id '" + p.id + "'");
      pairs.push_back(std::move(p));
    }
  }
  std::ostringstream os;
  templates::write_corpus(os, pairs);
  ctx.write("corpus/pairs.jsonl", os.str());

  std::map<std::string, std::size_t> by_template, by_category;
  std::size_t temporal = 0, chars = 0, words = 0;
  for (const auto& p : pairs) {
    chars += p.question.size();
    words += split_whitespace(p.question).size();
    ++by_template[p.template_id.value_or("manual")];
    ++by_category[p.category ? std::string(templates::category_name(*p.category)) : "unlabelled"];
    temporal += templates::has_datetime_predicate(p.sql, db.schema());
  }
  std::ostringstream st;
  st << "pairs\t" << pairs.size() << "\n";
  st << "temporal\t" << temporal << "\n";
  const double np = pairs.empty() ? 1.0 : static_cast<double>(pairs.size());
  st << "question_chars_mean\t" << format_fixed(static_cast<double>(chars) / np, 2) << "\n";
  st << "question_words_mean\t" << format_fixed(static_cast<double>(words) / np, 2) << "\n";
  for (const auto& [c, n] : by_category) st << "category:" << c << "\t" << n << "\n";
  for (const auto& [t, n] : by_template) st << "template:" << t << "\t" << n << "\n";
  ctx.write("corpus/stats.txt", st.str());
  ctx.log << "gen-pairs: " << pairs.size() << " pairs, " << temporal << " with a datetime predicate\n";
}

void cmd_split(Context& ctx) {
  const auto ratios = split_ratios(ctx.config);
  const auto ncfg = network_config(ctx.config);
  const fs::path corpus_path = ctx.require(ctx.out / "corpus" / "pairs.jsonl");
  const bool conn_explicit = !ctx.config.get("input.conn_log").empty();
  const fs::path conn = ctx.conn_log();
  const bool have_conn = conn_explicit ? (ctx.require(conn), true) : fs::is_regular_file(conn);

  std::ifstream in(corpus_path);
  const auto pairs = templates::read_corpus(in);
  std::vector<std::string> ids;
  for (const auto& p : pairs) ids.push_back(p.id);
  const auto pm = splitter::split_pairs(ids, ratios, ctx.seed());
  std::ostringstream os;
  splitter::write_manifest(os, pm);
  ctx.write("splits/pairs.manifest", os.str());
  ctx.log << "split pairs: train " << pm.count(splitter::Split::kTrain) << ", dev " << pm.count(splitter::Split::kDev)
          << ", test " << pm.count(splitter::Split::kTest) << "\n";

  if (!have_conn) {
    ctx.log << "split: no conn.log at " << conn.string() << ", network split skipped\n";
    return;
  }
  if (!conn_explicit) ctx.inputs.push_back(conn);
  auto records = splitter::merge_labels(read_conn_records(conn, ctx.log));
  const auto nm = splitter::split_network(records, ncfg, ctx.seed());
  std::ostringstream ns;
  splitter::write_manifest(ns, nm);
  ctx.write("splits/network.manifest", ns.str());
  if (ctx.config.get_bool("split.anonymize")) {
    const auto anon = splitter::anonymize(records, ctx.seed());
    std::ostringstream ms;
    splitter::write_maps(ms, anon);
    ctx.write("private/anonymization_maps.json", ms.str());
    records = anon.records;
  }
  std::ostringstream rs;
  ingest::write_conn_log(rs, records, 0);
  ctx.write("network/records.log", rs.str());
  ctx.log << "split network: train " << nm.count(splitter::Split::kTrain) << ", dev "
          << nm.count(splitter::Split::kDev) << ", test " << nm.count(splitter::Split::kTest) << ", excluded "
          << nm.excluded.size() << "\n";
}

splitter::SplitManifest read_manifest_file(Context& ctx, const fs::path& p) {
  std::ifstream in(ctx.require(p));
  return splitter::read_manifest(in);
}

struct NetworkData {
  std::vector<ingest::ConnRecord> records;
  splitter::SplitManifest manifest;
  std::map<std::string, std::size_t> index;  // record id -> position

  std::vector<std::size_t> rows(splitter::Split s) const {
    std::vector<std::size_t> out;
    for (const auto& id : manifest.ids(s)) out.push_back(index.at(id));
    return out;
  }
};

NetworkData load_network(Context& ctx) {
  NetworkData d;
  d.manifest = read_manifest_file(ctx, ctx.out / "splits" / "network.manifest");
  d.records = read_conn_records(ctx.require(ctx.out / "network" / "records.log"), ctx.log);
  for (std::size_t i = 0; i < d.records.size(); ++i) d.index[splitter::record_id(i)] = i;
  for (const auto& [id, s] : d.manifest.assignment) {
    if (!d.index.count(id)) throw Error(Errc::kUnknownId, "manifest names record " + id + " not in records.log");
  }
  return d;
}

void cmd_emit(Context& ctx, bool echo) {
  const auto pm = read_manifest_file(ctx, ctx.out / "splits" / "pairs.manifest");
  std::ifstream in(ctx.require(ctx.out / "corpus" / "pairs.jsonl"));
  const auto pairs = templates::read_corpus(in);
  const fs::path schema_file = ctx.require(ctx.db_dir() / "schema.txt");
  const auto schema = store::parse_schema(read_file(schema_file));
  const auto lin = store::linearize_schema(schema);
  std::map<std::string, const templates::TextSqlPair*> by_id;
  for (const auto& p : pairs) by_id[p.id] = &p;
  for (auto s : {splitter::Split::kTrain, splitter::Split::kDev, splitter::Split::kTest}) {
    std::vector<modelio::SqlExample> ex;
    std::vector<modelio::PredictionRecord> preds;
    for (const auto& id : pm.ids(s)) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw Error(Errc::kUnknownId, "manifest names pair " + id + " not in the corpus");
      ex.push_back({id, modelio::build_sql_input(it->second->question, lin), it->second->sql});
      preds.push_back({id, it->second->sql});
    }
    std::ostringstream os;
    modelio::write_sql_examples(os, ex);
    ctx.write("emit/sql_" + std::string(splitter::split_name(s)) + ".jsonl", os.str());
    if (echo && s == splitter::Split::kTest) {
      std::ostringstream ps;
      modelio::write_predictions(ps, preds);
      ctx.write("emit/echo/sql_test.jsonl", ps.str());
    }
  }
  if (!fs::is_regular_file(ctx.out / "splits" / "network.manifest")) {
    ctx.log << "emit: no network split, detection files skipped\n";
    return;
  }
  const auto net = load_network(ctx);
  for (auto s : {splitter::Split::kTrain, splitter::Split::kDev, splitter::Split::kTest}) {
    std::vector<modelio::DetectionExample> ex;
    std::vector<modelio::PredictionRecord> preds;
    for (std::size_t i : net.rows(s)) {
      ex.push_back(modelio::build_detection_input(net.records[i], splitter::record_id(i)));
      preds.push_back({ex.back().id, std::string(modelio::label_payload(ex.back().gold))});
    }
    std::ostringstream os;
    modelio::write_detection_examples(os, ex);
    ctx.write("emit/detect_" + std::string(splitter::split_name(s)) + ".jsonl", os.str());
    if (echo && s == splitter::Split::kTest) {
      std::ostringstream ps;
      modelio::write_predictions(ps, preds);
      ctx.write("emit/echo/detect_test.jsonl", ps.str());
    }
  }
  ctx.log << "emit: wrote model input files under " << (ctx.out / "emit").string() << "\n";
}

void cmd_eval_sql(Context& ctx, std::string examples, const std::string& predictions) {
  if (examples.empty()) examples = (ctx.out / "emit" / "sql_test.jsonl").string();
  const auto opts = eval_options(ctx.config);
  std::ifstream ein(ctx.require(examples));
  std::ifstream pin(ctx.require(predictions));
  const auto ex = modelio::read_sql_examples(ein);
  const auto preds = modelio::read_predictions(pin, modelio::PredictionKind::kSql);
  const auto db = open_db(ctx);
  const auto report = eval::score_sql_corpus(ex, preds, db, opts);
  ctx.write("reports/sql_eval.json", eval::to_json(report));
  ctx.write("reports/sql_eval.txt", eval::to_text(report));
  ctx.log << eval::to_text(report);
}

void cmd_eval_detect(Context& ctx, std::string examples, const std::string& predictions) {
  if (examples.empty()) examples = (ctx.out / "emit" / "detect_test.jsonl").string();
  std::ifstream ein(ctx.require(examples));
  std::ifstream pin(ctx.require(predictions));
  const auto ex = modelio::read_detection_examples(ein);
  const auto preds = modelio::read_predictions(pin, modelio::PredictionKind::kDetection);
  const auto report = eval::score_detection(ex, preds);
  ctx.write("reports/detection.json", eval::to_json(report));
  ctx.write("reports/detection.txt", eval::to_text(report));
  ctx.log << eval::to_text(report);
}

void cmd_baseline(Context& ctx, const std::vector<std::string>& only) {
  std::vector<baselines::ModelKind> kinds;
  for (const auto& name : only.empty() ? ctx.config.get_list("baseline.models") : only) {
    auto k = baselines::parse_model_kind(name);
    if (!k) throw Error(Errc::kConfig, "unknown model '" + name + "'");
    kinds.push_back(*k);
  }
  const auto h = hyperparams(ctx.config);
  baselines::FeaturizerConfig fc;
  fc.max_vocab = ctx.config.get_u64("baseline.max_vocab");
  const auto net = load_network(ctx);
  auto subset = [&](splitter::Split s) {
    std::vector<ingest::ConnRecord> r;
    std::vector<bool> y;
    for (std::size_t i : net.rows(s)) {
      r.push_back(net.records[i]);
      y.push_back(net.records[i].is_malicious);
    }
    return std::make_pair(std::move(r), std::move(y));
  };
  const auto [train_r, train_y] = subset(splitter::Split::kTrain);
  const auto [dev_r, dev_y] = subset(splitter::Split::kDev);
  const auto [test_r, test_y] = subset(splitter::Split::kTest);
  const auto feat = baselines::fit_featurizer(train_r, fc);
  const auto xtr = feat.transform(train_r), xdev = feat.transform(dev_r), xte = feat.transform(test_r);
  std::ostringstream table;
  table << "model            dev_macro_f1  test_macro_f1  test_macro_p  test_macro_r\n";
  json summary = json::object();
  for (auto k : kinds) {
    const std::string name(baselines::model_kind_name(k));
    auto model = baselines::train(k, xtr, train_y, h, ctx.seed());
    model.featurizer = feat;
    model.feature_names = feat.feature_names();
    std::ostringstream ms;
    baselines::save_model(ms, model);
    ctx.write("models/" + name + ".json", ms.str());
    json rep;
    for (auto [split_name, x, y] : {std::tuple{"dev", &xdev, &dev_y}, std::tuple{"test", &xte, &test_y}}) {
      if (y->empty()) continue;
      const auto preds = baselines::predict(model, *x, derive_seed(ctx.seed(), {std::string_view(split_name) == "dev" ? 1u : 2u}));
      rep[split_name] = json::parse(eval::to_json(eval::detection_metrics(*y, preds)));
    }
    if (!model.epoch_loss.empty()) rep["svm_epoch_loss"] = model.epoch_loss;
    ctx.write("reports/baseline_" + name + ".json", rep.dump(2) + "\n");
    summary[name] = rep;
    auto f = [&](const char* s, const char* key) {
      return rep.contains(s) ? format_fixed(rep[s][key].get<double>(), 4) : std::string("-");
    };
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %-13s %-14s %-13s %s\n", name.c_str(), f("dev", "macro_f1").c_str(),
                  f("test", "macro_f1").c_str(), f("test", "macro_precision").c_str(),
                  f("test", "macro_recall").c_str());
    table << line;
  }
  ctx.write("reports/baselines.txt", table.str());
  ctx.log << "features: " << feat.dim() << " (train " << train_r.size() << ", dev " << dev_r.size() << ", test "
          << test_r.size() << ")\n"
          << table.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"iotsql: IoT text-to-SQL and traffic-detection benchmark toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "base seed (overrides the config)");
  app.add_option("--set", sets, "config override key=value (repeatable)");

  auto* synth = app.add_subcommand("synth", "write synthetic Zeek logs, sensor files and device inventory");
  auto* ingest = app.add_subcommand("ingest", "load logs into a database snapshot");
  auto* gen = app.add_subcommand("gen-pairs", "generate the text-SQL corpus");
  auto* split = app.add_subcommand("split", "split the corpus and the labelled network records");
  auto* emit = app.add_subcommand("emit", "write model input files for every split");
  bool echo = false;
  emit->add_flag("--echo", echo, "also write gold-echo prediction files for the test splits");
  auto* esql = app.add_subcommand("eval-sql", "score SQL predictions");
  std::string sql_examples, sql_preds;
  esql->add_option("--examples", sql_examples, "examples file (default <out>/emit/sql_test.jsonl)");
  esql->add_option("--predictions", sql_preds, "predictions file")->required();
  auto* edet = app.add_subcommand("eval-detect", "score detection predictions");
  std::string det_examples, det_preds;
  edet->add_option("--examples", det_examples, "examples file (default <out>/emit/detect_test.jsonl)");
  edet->add_option("--predictions", det_preds, "predictions file")->required();
  auto* base = app.add_subcommand("baseline", "train and score the non-neural classifiers");
  std::vector<std::string> models;
  base->add_option("--model", models, "restrict to these models");
  auto* pipeline = app.add_subcommand("pipeline", "synth, ingest, gen-pairs, split, emit and baseline in order");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) config.merge_file(config_path);
    for (const auto& s : sets) config.set(s);
    if (seed) config.set("seed", std::to_string(*seed));

    const fs::path out_path(out_dir);
    OutputLock lock(out_path);
    auto stage = [&](const std::string& name, const std::map<std::string, std::string>& options,
                     const std::function<void(Context&)>& body) {
      Context ctx{config, out_path, out, name, options, {}, {}};
      body(ctx);
      ctx.write_run_manifest();
    };
    auto run_baseline = [&](Context& c) { cmd_baseline(c, models); };
    if (synth->parsed()) stage("synth", {}, cmd_synth);
    if (ingest->parsed()) stage("ingest", {}, cmd_ingest);
    if (gen->parsed()) stage("gen-pairs", {}, cmd_gen_pairs);
    if (split->parsed()) stage("split", {}, cmd_split);
    if (emit->parsed()) stage("emit", {{"echo", echo ? "true" : "false"}}, [&](Context& c) { cmd_emit(c, echo); });
    if (esql->parsed()) {
      stage("eval-sql", {{"examples", sql_examples}, {"predictions", sql_preds}},
            [&](Context& c) { cmd_eval_sql(c, sql_examples, sql_preds); });
    }
    if (edet->parsed()) {
      stage("eval-detect", {{"examples", det_examples}, {"predictions", det_preds}},
            [&](Context& c) { cmd_eval_detect(c, det_examples, det_preds); });
    }
    if (base->parsed()) stage("baseline", {{"model", join(models, ",")}}, run_baseline);
    if (pipeline->parsed()) {
      stage("synth", {}, cmd_synth);
      stage("ingest", {}, cmd_ingest);
      stage("gen-pairs", {}, cmd_gen_pairs);
      stage("split", {}, cmd_split);
      stage("emit", {{"echo", "true"}}, [&](Context& c) { cmd_emit(c, true); });
      stage("baseline", {{"model", ""}}, run_baseline);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::kConfig ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace iotsql::cli
