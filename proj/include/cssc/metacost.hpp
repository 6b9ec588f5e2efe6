#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cssc/cost.hpp"
#include "cssc/pipeline.hpp"
#include "cssc/random.hpp"

namespace cssc {

// MetaCost-style bagged relabeling: estimate P(class|x) for every labeled
// training instance from an ensemble of bootstrap-trained SSC models, then
// replace each label with the risk-minimizing class. Costs act at relabel
// time; the final model is an ordinary SSC model trained on the relabeled
// data.

// Ensemble probability estimates for the labeled set. Each bag model trains
// on a bootstrap resample of the labeled data (the unlabeled pool is passed
// intact: only labeled instances get relabeled). With use_all_models the
// estimate averages every bag model; otherwise only models whose bag
// excluded the instance, falling back to all models when none did.
inline std::vector<ClassDistribution> metacost_bagged_distributions(
    const std::vector<Instance>& labeled, const std::vector<Instance>& pool,
    const PipelineSpec& pipeline, const MetaCostConfig& cfg) {
  if (labeled.empty())
    throw std::invalid_argument("metacost: empty labeled set");
  if (cfg.n_bags < 1) throw std::invalid_argument("metacost: n_bags must be >= 1");
  const std::size_t bag_size = cfg.bag_size > 0 ? cfg.bag_size : labeled.size();
  if (bag_size < 1) throw std::invalid_argument("metacost: bag_size must be >= 1");

  const std::size_t n_bags = static_cast<std::size_t>(cfg.n_bags);
  std::vector<std::vector<double>> sum_fraud(n_bags);
  std::vector<std::vector<bool>> in_bag(n_bags);

  // Per-bag probability rows; bags are independent given their derived
  // seeds, so the reduction below is schedule-free.
  std::vector<SscModel> models;
  models.reserve(n_bags);
  for (std::size_t b = 0; b < n_bags; ++b) {
    auto eng = rng::make_engine(rng::mix(cfg.seed, b));
    std::vector<Instance> bag;
    in_bag[b].assign(labeled.size(), false);
    if (cfg.bootstrap) {
      const auto picks = rng::bootstrap_indices(eng, labeled.size(), bag_size);
      bag.reserve(picks.size());
      for (const std::size_t i : picks) {
        bag.push_back(labeled[i]);
        in_bag[b][i] = true;
      }
    } else {
      const std::size_t take = std::min(bag_size, labeled.size());
      bag.assign(labeled.begin(), labeled.begin() + static_cast<std::ptrdiff_t>(take));
      for (std::size_t i = 0; i < take; ++i) in_bag[b][i] = true;
    }
    const SscModel model = train_ssc(bag, pool, pipeline, rng::mix(cfg.seed, b, 1));
    auto& row = sum_fraud[b];
    row.resize(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i)
      row[i] = ssc_predict(model, labeled[i].features).p_fraud;
  }

  std::vector<ClassDistribution> out(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    double fraud = 0;
    std::size_t count = 0;
    if (!cfg.use_all_models) {
      for (std::size_t b = 0; b < n_bags; ++b) {
        if (!in_bag[b][i]) {
          fraud += sum_fraud[b][i];
          ++count;
        }
      }
    }
    if (count == 0) {  // use_all_models, or every bag contained the instance
      for (std::size_t b = 0; b < n_bags; ++b) fraud += sum_fraud[b][i];
      count = n_bags;
    }
    const double p_fraud = fraud / static_cast<double>(count);
    out[i] = {1.0 - p_fraud, p_fraud};
  }
  return out;
}

// Applies the min-risk rule to fixed per-instance distributions. Features
// and instance count are untouched; only labels change.
inline std::vector<Instance> relabel_by_risk(
    const std::vector<Instance>& labeled,
    const std::vector<ClassDistribution>& distributions, const CostMatrix& cm) {
  if (labeled.size() != distributions.size())
    throw std::invalid_argument("relabel_by_risk: size mismatch");
  std::vector<Instance> out = labeled;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i].label = min_risk_class(distributions[i], cm);
  return out;
}

inline std::vector<Instance> metacost_relabel(const std::vector<Instance>& labeled,
                                              const std::vector<Instance>& pool,
                                              const PipelineSpec& pipeline,
                                              const CostMatrix& cm,
                                              const MetaCostConfig& cfg) {
  return relabel_by_risk(
      labeled, metacost_bagged_distributions(labeled, pool, pipeline, cfg), cm);
}

// A cost-sensitive pipeline model. Hard predictions are the argmax of the
// distribution unless risk_at_predict re-applies the min-risk rule.
struct CostSensitiveModel {
  SscModel model;
  CostMatrix cost;
  bool risk_at_predict = false;

  ClassDistribution distribution(const FeatureVector& x) const {
    return ssc_predict(model, x);
  }

  Label classify(const FeatureVector& x) const {
    const ClassDistribution d = distribution(x);
    return risk_at_predict ? min_risk_class(d, cost) : argmax_label(d);
  }
};

inline CostSensitiveModel metacost_train(const std::vector<Instance>& labeled,
                                         const std::vector<Instance>& pool,
                                         const PipelineSpec& pipeline,
                                         const CostMatrix& cm,
                                         const MetaCostConfig& cfg) {
  const auto relabeled = metacost_relabel(labeled, pool, pipeline, cm, cfg);
  return {train_ssc(relabeled, pool, pipeline, rng::mix(cfg.seed, 0x6d657461ULL)),
          cm, pipeline.risk_at_predict};
}

}  // namespace cssc
