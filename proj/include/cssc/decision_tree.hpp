#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/random.hpp"
#include "cssc/stats.hpp"

namespace cssc {

// C4.5-style tree over numeric features: binary threshold splits chosen by
// gain ratio, pessimistic-error pruning governed by confidence_factor.
struct TreeConfig {
  double confidence_factor = 0.75;
  int min_leaf = 2;
  bool prune = true;
  int max_depth = 0;          // 0 = unlimited
  int feature_subsample = 0;  // 0 = consider all features at each split

  bool operator==(const TreeConfig&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  // Training class counts reaching the node; leaves predict from these.
  double n_normal = 0;
  double n_fraud = 0;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  TreeConfig config;
  bool single_class = false;  // training saw one class only
  Label only_class = Label::Normal;
};

namespace detail {

inline double entropy2(double a, double b) {
  const double n = a + b;
  if (n <= 0) return 0;
  double h = 0;
  if (a > 0) h -= (a / n) * std::log2(a / n);
  if (b > 0) h -= (b / n) * std::log2(b / n);
  return h;
}

// C4.5 pessimistic estimate: upper confidence bound on the error rate of a
// leaf with n instances and e errors, scaled back to an error count.
inline double pessimistic_errors(double e, double n, double confidence_factor) {
  if (n <= 0) return 0;
  const double cf = std::clamp(confidence_factor, 1e-6, 1.0 - 1e-6);
  const double z = stats::normal_quantile(1.0 - cf);
  const double f = e / n;
  const double z2 = z * z;
  const double u = (f + z2 / (2.0 * n) +
                    z * std::sqrt(f / n - f * f / n + z2 / (4.0 * n * n))) /
                   (1.0 + z2 / n);
  return n * std::clamp(u, 0.0, 1.0);
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Instance>& data, const TreeConfig& cfg,
              rng::Engine* eng)
      : data_(data), cfg_(cfg), eng_(eng) {}

  std::int32_t build(std::vector<std::size_t>& indices, int depth) {
    double n_normal = 0, n_fraud = 0;
    for (const std::size_t i : indices)
      (data_[i].label == Label::Fraud ? n_fraud : n_normal) += 1.0;

    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(TreeNode{-1, 0, -1, -1, n_normal, n_fraud});

    const bool pure = n_normal == 0 || n_fraud == 0;
    const bool too_small =
        indices.size() < 2 * static_cast<std::size_t>(cfg_.min_leaf);
    const bool depth_capped = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
    if (pure || too_small || depth_capped) return id;

    Split best;
    if (!find_best_split(indices, n_normal, n_fraud, best)) return id;

    std::vector<std::size_t> left, right;
    left.reserve(indices.size());
    for (const std::size_t i : indices)
      (data_[i].features[best.feature] <= best.threshold ? left : right)
          .push_back(i);
    indices.clear();
    indices.shrink_to_fit();

    const std::int32_t l = build(left, depth + 1);
    const std::int32_t r = build(right, depth + 1);
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<TreeNode> take_nodes() { return std::move(nodes_); }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0;
    double gain_ratio = -1;
  };

  std::vector<int> candidate_features() {
    std::vector<int> feats(kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) feats[f] = static_cast<int>(f);
    if (cfg_.feature_subsample > 0 &&
        cfg_.feature_subsample < static_cast<int>(kNumFeatures) && eng_) {
      for (int i = 0; i < cfg_.feature_subsample; ++i) {
        const std::size_t j =
            i + rng::uniform_index(*eng_, kNumFeatures - static_cast<std::size_t>(i));
        std::swap(feats[static_cast<std::size_t>(i)], feats[j]);
      }
      feats.resize(static_cast<std::size_t>(cfg_.feature_subsample));
      std::sort(feats.begin(), feats.end());
    }
    return feats;
  }

  bool find_best_split(const std::vector<std::size_t>& indices, double n_normal,
                       double n_fraud, Split& best) {
    const double n = n_normal + n_fraud;
    const double parent_entropy = entropy2(n_normal, n_fraud);
    const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_leaf);

    std::vector<std::size_t> sorted = indices;
    for (const int f : candidate_features()) {
      std::sort(sorted.begin(), sorted.end(), [this, f](std::size_t a, std::size_t b) {
        return data_[a].features[static_cast<std::size_t>(f)] <
               data_[b].features[static_cast<std::size_t>(f)];
      });
      double left_normal = 0, left_fraud = 0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        (data_[sorted[i]].label == Label::Fraud ? left_fraud : left_normal) += 1.0;
        const double lo = data_[sorted[i]].features[static_cast<std::size_t>(f)];
        const double hi = data_[sorted[i + 1]].features[static_cast<std::size_t>(f)];
        if (lo == hi) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = sorted.size() - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;

        const double info =
            (static_cast<double>(n_left) / n) * entropy2(left_normal, left_fraud) +
            (static_cast<double>(n_right) / n) *
                entropy2(n_normal - left_normal, n_fraud - left_fraud);
        const double gain = parent_entropy - info;
        if (gain <= 1e-12) continue;
        const double split_info = entropy2(static_cast<double>(n_left),
                                           static_cast<double>(n_right));
        const double ratio = gain / split_info;
        if (ratio > best.gain_ratio) {
          double mid = 0.5 * (lo + hi);
          if (mid >= hi) mid = lo;  // rounding guard: keep the scanned partition
          best = {f, mid, ratio};
        }
      }
    }
    return best.feature >= 0;
  }

  const std::vector<Instance>& data_;
  const TreeConfig& cfg_;
  rng::Engine* eng_;
  std::vector<TreeNode> nodes_;
};

// Post-order pessimistic-error pruning; collapses a subtree to a leaf when
// the leaf's estimated errors do not exceed the subtree's. No subtree raising.
inline double prune_subtree(std::vector<TreeNode>& nodes, std::int32_t id,
                            double confidence_factor) {
  TreeNode& node = nodes[static_cast<std::size_t>(id)];
  const double n = node.n_normal + node.n_fraud;
  const double errors_as_leaf = std::min(node.n_normal, node.n_fraud);
  const double leaf_estimate =
      pessimistic_errors(errors_as_leaf, n, confidence_factor);
  if (node.is_leaf()) return leaf_estimate;

  const double subtree_estimate =
      prune_subtree(nodes, node.left, confidence_factor) +
      prune_subtree(nodes, node.right, confidence_factor);
  if (leaf_estimate <= subtree_estimate + 1e-9) {
    node.feature = -1;
    node.left = node.right = -1;
    return leaf_estimate;
  }
  return subtree_estimate;
}

// Drops nodes orphaned by pruning and renumbers depth-first.
inline std::vector<TreeNode> compact_nodes(const std::vector<TreeNode>& nodes) {
  std::vector<TreeNode> out;
  out.reserve(nodes.size());
  auto copy = [&](auto&& self, std::int32_t id) -> std::int32_t {
    const std::int32_t nid = static_cast<std::int32_t>(out.size());
    out.push_back(nodes[static_cast<std::size_t>(id)]);
    if (!out[static_cast<std::size_t>(nid)].is_leaf()) {
      const std::int32_t l = self(self, nodes[static_cast<std::size_t>(id)].left);
      const std::int32_t r = self(self, nodes[static_cast<std::size_t>(id)].right);
      out[static_cast<std::size_t>(nid)].left = l;
      out[static_cast<std::size_t>(nid)].right = r;
    }
    return nid;
  };
  copy(copy, 0);
  return out;
}

}  // namespace detail

inline TreeModel tree_train(const std::vector<Instance>& train, TreeConfig cfg,
                            rng::Engine* eng = nullptr) {
  if (train.empty()) throw std::invalid_argument("tree_train: empty training set");
  if (cfg.min_leaf < 1) throw std::invalid_argument("tree_train: min_leaf must be >= 1");

  TreeModel model;
  model.config = cfg;

  std::size_t n_fraud = 0;
  for (const auto& inst : train) {
    if (inst.label == Label::Unlabeled)
      throw std::invalid_argument("tree_train: training instances must be labeled");
    if (inst.label == Label::Fraud) ++n_fraud;
  }
  if (n_fraud == 0 || n_fraud == train.size()) {
    model.single_class = true;
    model.only_class = n_fraud == 0 ? Label::Normal : Label::Fraud;
  }

  detail::TreeBuilder builder(train, cfg, eng);
  std::vector<std::size_t> indices(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) indices[i] = i;
  builder.build(indices, 0);
  model.nodes = builder.take_nodes();

  if (cfg.prune) {
    detail::prune_subtree(model.nodes, 0, cfg.confidence_factor);
    model.nodes = detail::compact_nodes(model.nodes);
  }
  return model;
}

inline const TreeNode& tree_leaf_for(const TreeModel& m, const FeatureVector& x) {
  std::int32_t id = 0;
  while (!m.nodes[static_cast<std::size_t>(id)].is_leaf()) {
    const TreeNode& node = m.nodes[static_cast<std::size_t>(id)];
    id = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                     : node.right;
  }
  return m.nodes[static_cast<std::size_t>(id)];
}

// Leaf distribution: Laplace-corrected class frequency (count+1)/(n+2),
// which keeps margins informative for confidence ranking. A model trained on
// a single class is a constant certain predictor.
inline ClassDistribution tree_predict(const TreeModel& m, const FeatureVector& x) {
  if (m.single_class)
    return m.only_class == Label::Fraud ? ClassDistribution{0.0, 1.0}
                                        : ClassDistribution{1.0, 0.0};
  const TreeNode& leaf = tree_leaf_for(m, x);
  const double n = leaf.n_normal + leaf.n_fraud;
  return {(leaf.n_normal + 1.0) / (n + 2.0), (leaf.n_fraud + 1.0) / (n + 2.0)};
}

inline ClassDistribution tree_predict(const TreeModel& m, const Instance& x) {
  return tree_predict(m, x.features);
}

}  // namespace cssc
