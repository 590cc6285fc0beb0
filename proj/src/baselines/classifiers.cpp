#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "iotsql/baselines/baselines.hpp"
#include "iotsql/common/error.hpp"
#include "iotsql/common/rng.hpp"
#include "iotsql/common/strings.hpp"
#include "iotsql/kernels/kernels.hpp"

namespace iotsql::baselines {

std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kStratified: return "stratified";
    case ModelKind::kUniform: return "uniform";
    case ModelKind::kRandomForest: return "random_forest";
    case ModelKind::kLinearSvm: return "linear_svm";
  }
  return "uniform";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  const std::string l = to_lower(trim(s));
  if (l == "stratified") return ModelKind::kStratified;
  if (l == "uniform") return ModelKind::kUniform;
  if (l == "random_forest" || l == "forest" || l == "rf") return ModelKind::kRandomForest;
  if (l == "linear_svm" || l == "svm") return ModelKind::kLinearSvm;
  return std::nullopt;
}

namespace {

void train_forest(ClassifierModel& m, const Matrix& x, const std::vector<bool>& y, std::uint64_t seed) {
  const ForestParams& fp = m.params.forest;
  m.trees.assign(fp.n_trees, DecisionTree{});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < fp.n_trees; t = next++) {
      std::vector<std::size_t> samples(x.rows);
      if (fp.bootstrap) {
        Rng rng(derive_seed(seed, {0xf0, t}));
        for (auto& s : samples) s = rng.below(x.rows);
      } else {
        std::iota(samples.begin(), samples.end(), 0);
      }
      m.trees[t].fit(x, y, samples, fp.tree, derive_seed(seed, {0xf1, t}));
    }
  };
  std::size_t threads = fp.threads ? fp.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, fp.n_trees));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

void train_svm(ClassifierModel& m, const Matrix& x, const std::vector<bool>& y, std::uint64_t seed) {
  const std::size_t n = x.rows, d = x.cols;
  m.mean.assign(d, 0.0);
  m.scale.assign(d, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m.mean[j] += x.at(i, j);
  }
  for (auto& v : m.mean) v /= static_cast<double>(n);
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x.at(i, j) - m.mean[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(n));
    m.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) z.at(i, j) = (x.at(i, j) - m.mean[j]) / m.scale[j];
  }
  const SvmParams& sp = m.params.svm;
  m.weights.assign(d, 0.0);
  m.bias = 0.0;
  m.epoch_loss.clear();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0x5e}));
  for (std::size_t epoch = 0; epoch < sp.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const double yi = y[i] ? 1.0 : -1.0;
      const double margin = yi * (kernels::dot(m.weights.data(), z.row(i), d) + m.bias);
      kernels::scale(1.0 - sp.learning_rate * sp.l2, m.weights.data(), d);
      if (margin < 1.0) {
        kernels::axpy(sp.learning_rate * yi, z.row(i), m.weights.data(), d);
        m.bias += sp.learning_rate * yi;
      }
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = y[i] ? 1.0 : -1.0;
      loss += std::max(0.0, 1.0 - yi * (kernels::dot(m.weights.data(), z.row(i), d) + m.bias));
    }
    loss = loss / static_cast<double>(n) +
           0.5 * sp.l2 * kernels::dot(m.weights.data(), m.weights.data(), d);
    m.epoch_loss.push_back(loss);
  }
}

}  // namespace

ClassifierModel train(ModelKind kind, const Matrix& features, const std::vector<bool>& labels,
                      const Hyperparams& params, std::uint64_t seed) {
  if (features.rows != labels.size()) {
    throw Error(Errc::kLengthMismatch,
                std::to_string(features.rows) + " rows vs " + std::to_string(labels.size()) + " labels");
  }
  if (labels.empty()) throw Error(Errc::kEmpty, "no training rows");
  const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  ClassifierModel m;
  m.kind = kind;
  m.dim = features.cols;
  m.params = params;
  m.prior_malicious = static_cast<double>(pos) / static_cast<double>(labels.size());
  if ((kind == ModelKind::kRandomForest || kind == ModelKind::kLinearSvm) && (pos == 0 || pos == labels.size())) {
    throw Error(Errc::kSingleClass, std::string(model_kind_name(kind)) + " needs both classes");
  }
  if (kind == ModelKind::kRandomForest) train_forest(m, features, labels, seed);
  if (kind == ModelKind::kLinearSvm) train_svm(m, features, labels, seed);
  return m;
}

double decision_value(const ClassifierModel& m, const double* x) {
  switch (m.kind) {
    case ModelKind::kStratified: return m.prior_malicious;
    case ModelKind::kUniform: return 0.5;
    case ModelKind::kRandomForest: {
      std::size_t votes = 0;
      for (const auto& t : m.trees) votes += t.predict(x);
      return m.trees.empty() ? 0.0 : static_cast<double>(votes) / static_cast<double>(m.trees.size());
    }
    case ModelKind::kLinearSvm: {
      std::vector<double> z(m.dim);
      for (std::size_t j = 0; j < m.dim; ++j) z[j] = (x[j] - m.mean[j]) / m.scale[j];
      return kernels::dot(m.weights.data(), z.data(), m.dim) + m.bias;
    }
  }
  return 0.0;
}

std::vector<bool> predict(const ClassifierModel& m, const Matrix& features, std::uint64_t seed) {
  if (features.cols != m.dim) {
    throw Error(Errc::kDimensionMismatch,
                "model expects " + std::to_string(m.dim) + " features, got " + std::to_string(features.cols));
  }
  std::vector<bool> out(features.rows);
  Rng rng(derive_seed(seed, {0x9d}));
  for (std::size_t i = 0; i < features.rows; ++i) {
    switch (m.kind) {
      case ModelKind::kStratified: out[i] = rng.bernoulli(m.prior_malicious); break;
      case ModelKind::kUniform: out[i] = rng.bernoulli(0.5); break;
      case ModelKind::kRandomForest: out[i] = decision_value(m, features.row(i)) > 0.5; break;
      case ModelKind::kLinearSvm: out[i] = decision_value(m, features.row(i)) > 0.0; break;
    }
  }
  return out;
}

}  // namespace iotsql::baselines
