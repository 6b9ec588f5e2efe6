#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cssc/core.hpp"

namespace cssc {

// Keeps likelihoods finite on constant features.
inline constexpr double kVarianceFloor = 1e-9;

// Gaussian naive Bayes over the nine numeric features.
struct NbModel {
  struct Gaussian {
    double mean = 0;
    double variance = kVarianceFloor;
  };

  double prior_normal = 0.5;  // Laplace-smoothed: (count+1)/(n+2)
  double prior_fraud = 0.5;
  std::array<Gaussian, kNumFeatures> normal_params{};
  std::array<Gaussian, kNumFeatures> fraud_params{};

  // Training saw a single class; the model is a constant predictor.
  bool single_class = false;
  Label only_class = Label::Normal;
};

inline NbModel nb_train(const std::vector<Instance>& train) {
  if (train.empty()) throw std::invalid_argument("nb_train: empty training set");

  std::vector<const Instance*> by_class[2];
  for (const auto& inst : train) {
    if (inst.label == Label::Unlabeled)
      throw std::invalid_argument("nb_train: training instances must be labeled");
    by_class[inst.label == Label::Fraud ? 1 : 0].push_back(&inst);
  }

  NbModel m;
  if (by_class[0].empty() || by_class[1].empty()) {
    m.single_class = true;
    m.only_class = by_class[1].empty() ? Label::Normal : Label::Fraud;
    m.prior_normal = m.only_class == Label::Normal ? 1.0 : 0.0;
    m.prior_fraud = 1.0 - m.prior_normal;
    return m;
  }

  const double n = static_cast<double>(train.size());
  m.prior_normal = (static_cast<double>(by_class[0].size()) + 1.0) / (n + 2.0);
  m.prior_fraud = (static_cast<double>(by_class[1].size()) + 1.0) / (n + 2.0);

  for (int c = 0; c < 2; ++c) {
    auto& params = c == 0 ? m.normal_params : m.fraud_params;
    const auto& rows = by_class[c];
    const double nc = static_cast<double>(rows.size());
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      double sum = 0;
      for (const Instance* inst : rows) sum += inst->features[f];
      const double mean = sum / nc;
      double ss = 0;
      for (const Instance* inst : rows) {
        const double d = inst->features[f] - mean;
        ss += d * d;
      }
      // Unbiased sample variance, floored; a single instance gets the floor.
      const double var = rows.size() > 1 ? ss / (nc - 1.0) : 0.0;
      params[f] = {mean, std::max(var, kVarianceFloor)};
    }
  }
  return m;
}

namespace detail {

inline double nb_log_likelihood(const std::array<NbModel::Gaussian, kNumFeatures>& params,
                                const FeatureVector& x) {
  double ll = 0;
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const auto& g = params[f];
    const double d = x[f] - g.mean;
    ll += -0.5 * std::log(2.0 * 3.141592653589793238462643383279502884 * g.variance) -
          d * d / (2.0 * g.variance);
  }
  return ll;
}

}  // namespace detail

// Posterior via log-domain likelihood x prior, normalized with log-sum-exp.
inline ClassDistribution nb_predict(const NbModel& m, const FeatureVector& x) {
  if (m.single_class)
    return m.only_class == Label::Fraud ? ClassDistribution{0.0, 1.0}
                                        : ClassDistribution{1.0, 0.0};
  const double log_normal =
      std::log(m.prior_normal) + detail::nb_log_likelihood(m.normal_params, x);
  const double log_fraud =
      std::log(m.prior_fraud) + detail::nb_log_likelihood(m.fraud_params, x);
  const double hi = std::max(log_normal, log_fraud);
  const double wn = std::exp(log_normal - hi);
  const double wf = std::exp(log_fraud - hi);
  return {wn / (wn + wf), wf / (wn + wf)};
}

inline ClassDistribution nb_predict(const NbModel& m, const Instance& x) {
  return nb_predict(m, x.features);
}

}  // namespace cssc
