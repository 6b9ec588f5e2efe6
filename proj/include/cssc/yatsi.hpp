#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/kdtree.hpp"
#include "cssc/knn.hpp"
#include "cssc/learner.hpp"

namespace cssc {

// Yatsi: train a first classifier on the labeled subset, pre-label the
// unlabeled pool with fractional weights, then classify by weighted k-NN
// vote over the merged reference set.
struct YatsiConfig {
  LearnerSpec first_learner;        // nb by default
  int k = 5;                        // nearest-neighbour count
  double weighting_factor = 1.0;    // F: total pre-labeled vote mass
                                    // relative to the labeled mass

  bool operator==(const YatsiConfig&) const = default;
};

struct YatsiModel {
  KdTree references;  // labeled originals at weight 1, pre-labeled at w_u
  int k = 5;
  double unlabeled_weight = 0;  // w_u = F * |labeled| / |unlabeled|
  std::size_t n_labeled = 0;
  std::size_t n_unlabeled = 0;
};

// Pre-labels the pool with the first learner and builds the merged weighted
// reference set. w_u = F*|labeled|/|unlabeled|, so the pool's total vote
// mass is F times the labeled mass. F = 0 reduces to labeled-only k-NN:
// zero-weight references are not merged at all (they carry no vote and must
// not displace labeled neighbours).
inline YatsiModel yatsi_train(const std::vector<Instance>& labeled,
                              const std::vector<Instance>& pool,
                              const YatsiConfig& cfg, std::uint64_t seed) {
  if (labeled.empty()) throw std::invalid_argument("yatsi_train: empty labeled set");
  if (cfg.k < 1) throw std::invalid_argument("yatsi_train: k must be >= 1");
  if (cfg.weighting_factor < 0)
    throw std::invalid_argument("yatsi_train: weighting factor must be >= 0");

  YatsiModel model;
  model.k = cfg.k;
  model.n_labeled = labeled.size();
  model.n_unlabeled = pool.size();

  std::vector<FeatureVector> points;
  std::vector<KdPayload> payloads;
  points.reserve(labeled.size() + pool.size());
  payloads.reserve(labeled.size() + pool.size());
  for (const auto& inst : labeled) {
    if (inst.label == Label::Unlabeled)
      throw std::invalid_argument("yatsi_train: labeled set contains unlabeled rows");
    points.push_back(inst.features);
    payloads.push_back({inst.label, 1.0});
  }

  if (!pool.empty() && cfg.weighting_factor > 0) {
    model.unlabeled_weight = cfg.weighting_factor *
                             static_cast<double>(labeled.size()) /
                             static_cast<double>(pool.size());
    const LearnerModel first = train_learner(cfg.first_learner, labeled, seed);
    for (const auto& inst : pool) {
      const Label pseudo = argmax_label(predict(first, inst.features));
      points.push_back(inst.features);
      payloads.push_back({pseudo, model.unlabeled_weight});
    }
  }

  model.references = KdTree(std::move(points), std::move(payloads));
  return model;
}

// Weighted k-NN vote over the merged set; the class with the larger weight
// sum wins, exact ties falling to Fraud via argmax_label.
inline ClassDistribution yatsi_predict(const YatsiModel& m, const FeatureVector& x) {
  return knn_vote(m.references, m.k, x);
}

inline ClassDistribution yatsi_predict(const YatsiModel& m, const Instance& x) {
  return yatsi_predict(m, x.features);
}

}  // namespace cssc
