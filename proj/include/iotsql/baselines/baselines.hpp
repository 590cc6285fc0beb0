#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iotsql/ingest/records.hpp"

namespace iotsql::baselines {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline constexpr std::array<std::string_view, 10> kNumericFeatures = {
    "duration",  "orig_bytes",    "resp_bytes", "missed_bytes", "orig_pkts",
    "orig_ip_bytes", "resp_pkts", "resp_ip_bytes", "orig_p",    "resp_p"};
// Numerics that Zeek may leave unset; each gets a presence flag.
inline constexpr std::array<std::string_view, 3> kOptionalNumerics = {"duration", "orig_bytes", "resp_bytes"};
inline constexpr std::array<std::string_view, 6> kCategoricalFeatures = {
    "proto", "service", "conn_state", "history", "local_orig", "local_resp"};

struct FeaturizerConfig {
  // Most frequent values kept per categorical column; the rest map to "other".
  std::size_t max_vocab = 32;
};

struct Featurizer {
  // One vocabulary per entry of kCategoricalFeatures, without the "other" slot.
  std::vector<std::vector<std::string>> vocab;

  std::size_t dim() const;
  std::vector<std::string> feature_names() const;
  void transform(const ingest::ConnRecord& r, double* out) const;
  std::vector<double> transform(const ingest::ConnRecord& r) const;
  Matrix transform(const std::vector<ingest::ConnRecord>& records) const;

  friend bool operator==(const Featurizer&, const Featurizer&) = default;
};

// Categorical text of a record column; "-" for unset, "T"/"F" for booleans.
std::string categorical_value(const ingest::ConnRecord& r, std::string_view column);

// Throws Empty.
Featurizer fit_featurizer(const std::vector<ingest::ConnRecord>& records, const FeaturizerConfig& config = {});

enum class ModelKind { kStratified, kUniform, kRandomForest, kLinearSvm };

std::string_view model_kind_name(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

struct TreeParams {
  std::size_t max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  std::size_t max_features = 0;  // 0 = floor(sqrt(d)), at least 1
};

struct ForestParams {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  TreeParams tree;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct SvmParams {
  std::size_t epochs = 10;
  double learning_rate = 0.01;
  double l2 = 1e-4;
};

struct Hyperparams {
  ForestParams forest;
  SvmParams svm;
};

struct TreeNode {
  // Internal nodes: x[feature] <= threshold goes left. Leaves: feature = -1.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double p_malicious = 0.0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  // Fits on the given sample indices (duplicates allowed). Ties between
  // equally good splits go to the lowest feature index, then lowest threshold.
  void fit(const Matrix& x, const std::vector<bool>& y, const std::vector<std::size_t>& samples,
           const TreeParams& params, std::uint64_t seed);
  double predict_proba(const double* x) const;
  bool predict(const double* x) const { return predict_proba(x) > 0.5; }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& nodes() { return nodes_; }
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

struct ClassifierModel {
  ModelKind kind = ModelKind::kUniform;
  std::size_t dim = 0;
  double prior_malicious = 0.5;  // stratified
  std::vector<DecisionTree> trees;  // random forest
  std::vector<double> weights;      // svm, in standardized space
  double bias = 0.0;
  std::vector<double> mean;  // svm standardization
  std::vector<double> scale;
  std::vector<double> epoch_loss;  // svm training log
  std::vector<std::string> feature_names;
  std::optional<Featurizer> featurizer;
  Hyperparams params;
};

// Throws Empty, LengthMismatch, SingleClass (forest and svm).
ClassifierModel train(ModelKind kind, const Matrix& features, const std::vector<bool>& labels,
                      const Hyperparams& params, std::uint64_t seed);

// Throws DimensionMismatch.
std::vector<bool> predict(const ClassifierModel& model, const Matrix& features, std::uint64_t seed);
// Decision value for one row: svm margin, forest vote share, prior for the random models.
double decision_value(const ClassifierModel& model, const double* x);

inline constexpr int kModelFormatVersion = 1;

void save_model(std::ostream& out, const ClassifierModel& model);
// Throws ParseError on malformed files or unknown versions.
ClassifierModel load_model(std::istream& in);
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace iotsql::baselines
