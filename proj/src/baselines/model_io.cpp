#include <fstream>

#include "iotsql/baselines/baselines.hpp"
#include "iotsql/common/error.hpp"
#include "json.hpp"

namespace iotsql::baselines {

using json = nlohmann::ordered_json;

void save_model(std::ostream& out, const ClassifierModel& m) {
  json j;
  j["format"] = "iotsql-classifier";
  j["version"] = kModelFormatVersion;
  j["kind"] = model_kind_name(m.kind);
  j["dim"] = m.dim;
  j["feature_names"] = m.feature_names;
  if (m.featurizer) {
    json voc = json::object();
    for (std::size_t c = 0; c < m.featurizer->vocab.size(); ++c) {
      voc[std::string(kCategoricalFeatures[c])] = m.featurizer->vocab[c];
    }
    j["featurizer"] = {{"vocab", voc}};
  }
  const auto& p = m.params;
  j["hyperparams"] = {{"n_trees", p.forest.n_trees},
                      {"bootstrap", p.forest.bootstrap},
                      {"max_depth", p.forest.tree.max_depth},
                      {"min_samples_split", p.forest.tree.min_samples_split},
                      {"max_features", p.forest.tree.max_features},
                      {"epochs", p.svm.epochs},
                      {"learning_rate", p.svm.learning_rate},
                      {"l2", p.svm.l2}};
  j["prior_malicious"] = m.prior_malicious;
  if (m.kind == ModelKind::kRandomForest) {
    json trees = json::array();
    for (const auto& t : m.trees) {
      json nodes = json::array();
      for (const auto& n : t.nodes()) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p_malicious});
      trees.push_back(nodes);
    }
    j["trees"] = trees;
  }
  if (m.kind == ModelKind::kLinearSvm) {
    j["weights"] = m.weights;
    j["bias"] = m.bias;
    j["mean"] = m.mean;
    j["scale"] = m.scale;
    j["epoch_loss"] = m.epoch_loss;
  }
  out << j.dump(1) << '\n';
}

ClassifierModel load_model(std::istream& in) {
  ClassifierModel m;
  try {
    const json j = json::parse(in);
    if (j.value("format", "") != "iotsql-classifier") throw Error(Errc::kParseError, "not a classifier file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(Errc::kParseError, "unsupported model version " + std::to_string(version));
    }
    auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(Errc::kParseError, "unknown model kind");
    m.kind = *kind;
    m.dim = j.at("dim").get<std::size_t>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (j.contains("featurizer")) {
      Featurizer f;
      const auto& voc = j.at("featurizer").at("vocab");
      for (auto col : kCategoricalFeatures) f.vocab.push_back(voc.at(std::string(col)).get<std::vector<std::string>>());
      m.featurizer = std::move(f);
    }
    const auto& h = j.at("hyperparams");
    m.params.forest.n_trees = h.at("n_trees").get<std::size_t>();
    m.params.forest.bootstrap = h.at("bootstrap").get<bool>();
    m.params.forest.tree.max_depth = h.at("max_depth").get<std::size_t>();
    m.params.forest.tree.min_samples_split = h.at("min_samples_split").get<std::size_t>();
    m.params.forest.tree.max_features = h.at("max_features").get<std::size_t>();
    m.params.svm.epochs = h.at("epochs").get<std::size_t>();
    m.params.svm.learning_rate = h.at("learning_rate").get<double>();
    m.params.svm.l2 = h.at("l2").get<double>();
    m.prior_malicious = j.at("prior_malicious").get<double>();
    if (m.kind == ModelKind::kRandomForest) {
      for (const auto& tj : j.at("trees")) {
        DecisionTree t;
        for (const auto& nj : tj) {
          TreeNode n{nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<int>(), nj.at(3).get<int>(),
                     nj.at(4).get<double>()};
          const int count = static_cast<int>(tj.size());
          if (n.feature >= static_cast<int>(m.dim) || (n.feature >= 0 && (n.left <= 0 || n.left >= count ||
                                                                            n.right <= 0 || n.right >= count))) {
            throw Error(Errc::kParseError, "malformed tree node");
          }
          t.nodes().push_back(n);
        }
        m.trees.push_back(std::move(t));
      }
    }
    if (m.kind == ModelKind::kLinearSvm) {
      m.weights = j.at("weights").get<std::vector<double>>();
      m.bias = j.at("bias").get<double>();
      m.mean = j.at("mean").get<std::vector<double>>();
      m.scale = j.at("scale").get<std::vector<double>>();
      m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
      if (m.weights.size() != m.dim || m.mean.size() != m.dim || m.scale.size() != m.dim) {
        throw Error(Errc::kParseError, "svm parameter length differs from dim");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kParseError, std::string("model file: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  save_model(out, model);
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot read " + path.string());
  return load_model(in);
}

}  // namespace iotsql::baselines
