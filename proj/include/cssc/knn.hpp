#pragma once

#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/kdtree.hpp"

namespace cssc {

struct KnnConfig {
  int k = 5;

  bool operator==(const KnnConfig&) const = default;
};

// IBK-style k-NN over labeled training data (unit weights).
struct KnnModel {
  KdTree tree;
  KnnConfig config;
};

inline KnnModel knn_train(const std::vector<Instance>& train, KnnConfig cfg = {}) {
  if (train.empty()) throw std::invalid_argument("knn_train: empty training set");
  if (cfg.k < 1) throw std::invalid_argument("knn_train: k must be >= 1");
  std::vector<FeatureVector> points;
  std::vector<KdPayload> payloads;
  points.reserve(train.size());
  payloads.reserve(train.size());
  for (const auto& inst : train) {
    if (inst.label == Label::Unlabeled)
      throw std::invalid_argument("knn_train: training instances must be labeled");
    points.push_back(inst.features);
    payloads.push_back({inst.label, 1.0});
  }
  return {KdTree(std::move(points), std::move(payloads)), cfg};
}

// Weighted vote over the k nearest references: per-class weight sums
// normalized into a distribution. All-zero vote mass yields (0.5, 0.5),
// whose hard decision falls to Fraud by the tie rule.
inline ClassDistribution knn_vote(const KdTree& tree, int k, const FeatureVector& x) {
  const auto neighbors = tree.query(x, static_cast<std::size_t>(k));
  double mass_normal = 0, mass_fraud = 0;
  for (const auto& nb : neighbors) {
    (nb.payload.label == Label::Fraud ? mass_fraud : mass_normal) +=
        nb.payload.weight;
  }
  return normalize_masses(mass_normal, mass_fraud);
}

inline ClassDistribution knn_predict(const KnnModel& m, const FeatureVector& x) {
  return knn_vote(m.tree, m.config.k, x);
}

inline ClassDistribution knn_predict(const KnnModel& m, const Instance& x) {
  return knn_predict(m, x.features);
}

}  // namespace cssc
