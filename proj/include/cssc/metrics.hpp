#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"

namespace cssc {

// Binary confusion counts with Fraud as the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

inline ConfusionMatrix confusion(const std::vector<Label>& predictions,
                                 const std::vector<Label>& truth) {
  if (predictions.size() != truth.size())
    throw std::invalid_argument("confusion: prediction/truth length mismatch");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == Label::Unlabeled || predictions[i] == Label::Unlabeled)
      throw std::invalid_argument("confusion: labels must be Normal or Fraud");
    if (truth[i] == Label::Fraud)
      predictions[i] == Label::Fraud ? ++c.tp : ++c.fn;
    else
      predictions[i] == Label::Fraud ? ++c.fp : ++c.tn;
  }
  return c;
}

// Ratios with zero denominators surface as empty optionals, never as silent
// zeros; aggregation excludes them and reports how many were undefined.
struct RatioMetrics {
  std::optional<double> recall;
  std::optional<double> fnr;
  std::optional<double> fpr;
};

inline RatioMetrics ratio_metrics(const ConfusionMatrix& c) {
  RatioMetrics m;
  const double pos = static_cast<double>(c.tp + c.fn);
  const double neg = static_cast<double>(c.fp + c.tn);
  if (pos > 0) {
    m.recall = static_cast<double>(c.tp) / pos;
    m.fnr = static_cast<double>(c.fn) / pos;
  }
  if (neg > 0) m.fpr = static_cast<double>(c.fp) / neg;
  return m;
}

struct KappaResult {
  std::optional<double> kappa;
  double p_observed = 0;
  double p_chance = 0;
};

// Chance-corrected agreement between predictions and truth.
inline KappaResult kappa(const ConfusionMatrix& c) {
  KappaResult r;
  const double total = static_cast<double>(c.total());
  if (total <= 0) return r;
  r.p_observed = static_cast<double>(c.tp + c.tn) / total;
  r.p_chance = (static_cast<double>(c.tp + c.fn) * static_cast<double>(c.tp + c.fp) +
                static_cast<double>(c.tn + c.fp) * static_cast<double>(c.tn + c.fn)) /
               (total * total);
  if (r.p_chance >= 1.0) return r;  // degenerate: constant on both axes
  r.kappa = (r.p_observed - r.p_chance) / (1.0 - r.p_chance);
  return r;
}

// Rank-based AUC (Mann-Whitney): the probability that a random Fraud
// instance outscores a random Normal one, ties counting one half. Invariant
// under any strictly increasing transform of the scores.
inline double auc(const std::vector<double>& fraud_scores,
                  const std::vector<Label>& truth) {
  if (fraud_scores.size() != truth.size())
    throw std::invalid_argument("auc: score/truth length mismatch");
  std::size_t n_fraud = 0, n_normal = 0;
  for (const Label l : truth) {
    if (l == Label::Fraud) ++n_fraud;
    else if (l == Label::Normal) ++n_normal;
    else throw std::invalid_argument("auc: labels must be Normal or Fraud");
  }
  if (n_fraud == 0 || n_normal == 0)
    throw std::invalid_argument("auc: both classes must be present");

  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&fraud_scores](std::size_t a, std::size_t b) {
                     return fraud_scores[a] < fraud_scores[b];
                   });

  double fraud_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           fraud_scores[order[j + 1]] == fraud_scores[order[i]])
      ++j;
    // Average rank of the tie group, 1-based.
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    for (std::size_t t = i; t <= j; ++t)
      if (truth[order[t]] == Label::Fraud) fraud_rank_sum += avg_rank;
    i = j + 1;
  }
  const double nf = static_cast<double>(n_fraud);
  const double u = fraud_rank_sum - nf * (nf + 1.0) / 2.0;
  return u / (nf * static_cast<double>(n_normal));
}

// Per-evaluation metric bundle (one cross-validation cell, or an aggregate).
struct MetricsReport {
  std::optional<double> recall;
  std::optional<double> fnr;
  std::optional<double> fpr;
  std::optional<double> kappa;
  std::optional<double> auc;
  double total_cost = 0;
  std::optional<double> p_observed;
  std::optional<double> p_chance;
  ConfusionMatrix confusion;
};

}  // namespace cssc
