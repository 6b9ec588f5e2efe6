#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/decision_tree.hpp"
#include "cssc/random.hpp"

namespace cssc {

inline constexpr int kMaxTreeDepth = 1000;

// Bootstrap-aggregated unpruned trees with per-split feature subsampling
// (ceil(sqrt(9)) = 3 by default).
struct ForestConfig {
  int n_trees = 100;   // NI
  int max_depth = 12;  // MTD, in [1, kMaxTreeDepth]
  bool bootstrap = true;
  int feature_subsample = 3;  // 0 = all features
  std::uint64_t seed = 0;

  bool operator==(const ForestConfig&) const = default;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  ForestConfig config;
};

inline ForestModel forest_train(const std::vector<Instance>& train,
                                const ForestConfig& cfg) {
  if (cfg.n_trees < 1) throw std::invalid_argument("forest_train: n_trees must be >= 1");
  if (cfg.max_depth < 1 || cfg.max_depth > kMaxTreeDepth)
    throw std::invalid_argument("forest_train: max_depth out of range");
  if (train.empty()) throw std::invalid_argument("forest_train: empty training set");

  TreeConfig tree_cfg;
  tree_cfg.prune = false;
  tree_cfg.min_leaf = 1;
  tree_cfg.max_depth = cfg.max_depth;
  tree_cfg.feature_subsample = cfg.feature_subsample;

  ForestModel model;
  model.config = cfg;
  model.trees.reserve(static_cast<std::size_t>(cfg.n_trees));
  for (int t = 0; t < cfg.n_trees; ++t) {
    auto eng = rng::make_engine(rng::mix(cfg.seed, static_cast<std::uint64_t>(t)));
    if (cfg.bootstrap) {
      const auto picks = rng::bootstrap_indices(eng, train.size(), train.size());
      std::vector<Instance> bag;
      bag.reserve(picks.size());
      for (const std::size_t i : picks) bag.push_back(train[i]);
      model.trees.push_back(tree_train(bag, tree_cfg, &eng));
    } else {
      model.trees.push_back(tree_train(train, tree_cfg, &eng));
    }
  }
  return model;
}

// Mean of the per-tree leaf distributions.
inline ClassDistribution forest_predict(const ForestModel& m, const FeatureVector& x) {
  double sum_normal = 0, sum_fraud = 0;
  for (const auto& tree : m.trees) {
    const ClassDistribution d = tree_predict(tree, x);
    sum_normal += d.p_normal;
    sum_fraud += d.p_fraud;
  }
  const double n = static_cast<double>(m.trees.size());
  return {sum_normal / n, sum_fraud / n};
}

inline ClassDistribution forest_predict(const ForestModel& m, const Instance& x) {
  return forest_predict(m, x.features);
}

}  // namespace cssc
