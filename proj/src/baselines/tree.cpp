#include <algorithm>
#include <cmath>
#include <numeric>

#include "iotsql/baselines/baselines.hpp"
#include "iotsql/common/rng.hpp"

namespace iotsql::baselines {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // weighted child impurity, lower is better
};

double gini(double pos, double n) {
  if (n <= 0.0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

class Builder {
 public:
  Builder(const Matrix& x, const std::vector<bool>& y, const TreeParams& p, std::uint64_t seed,
          std::vector<TreeNode>& nodes)
      : x_(x), y_(y), p_(p), rng_(seed), nodes_(nodes) {
    const std::size_t d = x.cols;
    mtry_ = p.max_features ? std::min(p.max_features, d)
                           : std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    all_features_.resize(d);
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  int build(std::vector<std::size_t>& samples, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::size_t pos = 0;
    for (auto s : samples) pos += y_[s];
    const double n = static_cast<double>(samples.size());
    nodes_[id].p_malicious = samples.empty() ? 0.0 : static_cast<double>(pos) / n;
    const bool pure = pos == 0 || pos == samples.size();
    if (pure || samples.size() < p_.min_samples_split || (p_.max_depth && depth >= p_.max_depth)) return id;

    const Split best = find_split(samples, static_cast<double>(pos));
    if (best.feature < 0) return id;
    std::vector<std::size_t> left, right;
    for (auto s : samples) (x_.at(s, best.feature) <= best.threshold ? left : right).push_back(s);
    if (left.empty() || right.empty()) return id;
    samples.clear();
    samples.shrink_to_fit();
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    const int l = build(left, depth + 1);
    nodes_[id].left = l;
    const int r = build(right, depth + 1);
    nodes_[id].right = r;
    return id;
  }

 private:
  std::vector<std::size_t> candidate_features() {
    if (mtry_ >= all_features_.size()) return all_features_;
    std::vector<std::size_t> f = all_features_;
    for (std::size_t i = 0; i < mtry_; ++i) std::swap(f[i], f[i + rng_.below(f.size() - i)]);
    f.resize(mtry_);
    std::sort(f.begin(), f.end());
    return f;
  }

  Split find_split(const std::vector<std::size_t>& samples, double pos_total) {
    const double n = static_cast<double>(samples.size());
    Split best;
    best.score = gini(pos_total, n) - 1e-12;
    std::vector<std::pair<double, bool>> col(samples.size());
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < samples.size(); ++i) col[i] = {x_.at(samples[i], f), y_[samples[i]]};
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (col.front().first == col.back().first) continue;
      double left_pos = 0.0;
      for (std::size_t i = 0; i + 1 < col.size(); ++i) {
        left_pos += col[i].second;
        if (col[i].first == col[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1), nr = n - nl;
        const double score = (nl * gini(left_pos, nl) + nr * gini(pos_total - left_pos, nr)) / n;
        if (score < best.score) {
          double t = col[i].first + (col[i + 1].first - col[i].first) / 2.0;
          if (!(t < col[i + 1].first)) t = col[i].first;
          best = {static_cast<int>(f), t, score};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<bool>& y_;
  TreeParams p_;
  Rng rng_;
  std::vector<TreeNode>& nodes_;
  std::size_t mtry_ = 1;
  std::vector<std::size_t> all_features_;
};

}  // namespace

void DecisionTree::fit(const Matrix& x, const std::vector<bool>& y, const std::vector<std::size_t>& samples,
                       const TreeParams& params, std::uint64_t seed) {
  nodes_.clear();
  std::vector<std::size_t> s = samples;
  Builder(x, y, params, seed, nodes_).build(s, 0);
}

double DecisionTree::predict_proba(const double* x) const {
  if (nodes_.empty()) return 0.0;
  int i = 0;
  while (nodes_[i].feature >= 0) i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  return nodes_[i].p_malicious;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

}  // namespace iotsql::baselines
