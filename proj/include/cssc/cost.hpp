#pragma once

#include <cstdint>
#include <stdexcept>

#include "cssc/core.hpp"
#include "cssc/metrics.hpp"

namespace cssc {

// 2x2 misclassification penalties. Defaults follow the fraud-detection
// setting: correct predictions cost nothing, a false positive costs 1, and
// the false-negative penalty is swept over {2, 3, 4, 5}.
struct CostMatrix {
  double c_tp = 0;
  double c_tn = 0;
  double c_fp = 1;
  double c_fn = 2;

  bool operator==(const CostMatrix&) const = default;
};

// Expected cost of predicting `candidate` under class distribution `d`.
inline double conditional_risk(const ClassDistribution& d, Label candidate,
                               const CostMatrix& cm) {
  if (candidate == Label::Normal) return d.p_normal * cm.c_tn + d.p_fraud * cm.c_fn;
  return d.p_normal * cm.c_fp + d.p_fraud * cm.c_tp;
}

// Risk-minimizing class; an exact tie goes to Fraud. With the default
// matrix this reduces to: Fraud iff p_fraud >= c_fp / (c_fp + c_fn).
inline Label min_risk_class(const ClassDistribution& d, const CostMatrix& cm) {
  const double risk_normal = conditional_risk(d, Label::Normal, cm);
  const double risk_fraud = conditional_risk(d, Label::Fraud, cm);
  return risk_fraud <= risk_normal ? Label::Fraud : Label::Normal;
}

// Eq. pricing of one confusion matrix: FN count * FN cost + FP count * FP cost.
inline double total_cost(const ConfusionMatrix& conf, const CostMatrix& cm) {
  return static_cast<double>(conf.fn) * cm.c_fn +
         static_cast<double>(conf.fp) * cm.c_fp;
}

// Bagged-relabeling ensemble configuration. bag_size 0 means |labeled|.
// `batch_size` is a prediction-batching throughput knob with no semantic
// effect on results.
struct MetaCostConfig {
  int n_bags = 10;
  std::size_t bag_size = 0;
  bool use_all_models = true;
  bool bootstrap = true;
  int batch_size = 100;
  std::uint64_t seed = 0;

  bool operator==(const MetaCostConfig&) const = default;
};

}  // namespace cssc
