#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/learner.hpp"

namespace cssc {

// Confidence margin of a binary distribution.
inline double margin(const ClassDistribution& d) {
  return std::abs(d.p_normal - d.p_fraud);
}

// Chopper: rank the pool by confidence margin, move the most confident chunk
// into training with pseudo-labels, retrain, repeat. The first classifier
// runs in iteration one only; every later iteration (and the final model)
// uses the second classifier.
struct ChopperConfig {
  LearnerSpec first_learner = parse_learner_spec("nb");
  LearnerSpec second_learner = parse_learner_spec("rf");
  double chunk_fraction = 0.10;    // in (0, 1]; 1.0 chops everything at once
  std::size_t max_iterations = 0;  // 0 = iterate until the pool is exhausted

  bool operator==(const ChopperConfig&) const = default;
};

struct ChopperModel {
  LearnerModel final_model;  // second learner on the fully augmented set
  ChopperConfig config;
};

struct ChopperResult {
  ChopperModel model;
  // Distribution each pool instance received at the iteration it was
  // chopped, aligned with the input pool order.
  std::vector<ClassDistribution> pool_predictions;
  // Pool indices in chop order: a permutation of 0..|pool|-1.
  std::vector<std::size_t> chop_order;
};

inline ChopperResult chopper_train(const std::vector<Instance>& labeled,
                                   const std::vector<Instance>& pool,
                                   const ChopperConfig& cfg, std::uint64_t seed) {
  if (labeled.empty()) throw std::invalid_argument("chopper_train: empty labeled set");
  if (!(cfg.chunk_fraction > 0.0 && cfg.chunk_fraction <= 1.0))
    throw std::invalid_argument("chopper_train: chunk_fraction must be in (0,1]");

  ChopperResult result;
  result.pool_predictions.resize(pool.size());
  result.chop_order.reserve(pool.size());

  std::vector<Instance> augmented = labeled;
  augmented.reserve(labeled.size() + pool.size());

  const std::size_t chunk = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(cfg.chunk_fraction * static_cast<double>(pool.size()))));

  std::vector<std::size_t> remaining(pool.size());
  std::iota(remaining.begin(), remaining.end(), 0);

  std::size_t iteration = 0;
  while (!remaining.empty()) {
    ++iteration;
    const LearnerSpec& learner =
        iteration == 1 ? cfg.first_learner : cfg.second_learner;
    const LearnerModel model =
        train_learner(learner, augmented, rng::mix(seed, iteration));

    std::vector<ClassDistribution> dists(remaining.size());
    for (std::size_t i = 0; i < remaining.size(); ++i)
      dists[i] = predict(model, pool[remaining[i]].features);

    // Highest margin first; stable on ties so pool order decides.
    std::vector<std::size_t> rank(remaining.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&dists](std::size_t a, std::size_t b) {
      return margin(dists[a]) > margin(dists[b]);
    });

    // Once the iteration cap is hit, the current model absorbs the rest.
    const bool last = cfg.max_iterations > 0 && iteration >= cfg.max_iterations;
    const std::size_t take = last ? remaining.size()
                                  : std::min(chunk, remaining.size());

    std::vector<bool> chopped(remaining.size(), false);
    for (std::size_t j = 0; j < take; ++j) {
      const std::size_t slot = rank[j];
      const std::size_t pool_idx = remaining[slot];
      result.pool_predictions[pool_idx] = dists[slot];
      result.chop_order.push_back(pool_idx);
      Instance pseudo = pool[pool_idx];
      pseudo.label = argmax_label(dists[slot]);
      augmented.push_back(std::move(pseudo));
      chopped[slot] = true;
    }
    std::vector<std::size_t> next;
    next.reserve(remaining.size() - take);
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (!chopped[i]) next.push_back(remaining[i]);
    remaining = std::move(next);
  }

  result.model.config = cfg;
  result.model.final_model =
      train_learner(cfg.second_learner, augmented, rng::mix(seed, 0));
  return result;
}

inline ClassDistribution chopper_predict(const ChopperModel& m, const FeatureVector& x) {
  return predict(m.final_model, x);
}

inline ClassDistribution chopper_predict(const ChopperModel& m, const Instance& x) {
  return chopper_predict(m, x.features);
}

}  // namespace cssc
