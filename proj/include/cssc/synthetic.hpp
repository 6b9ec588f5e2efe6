#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cssc/dataset.hpp"
#include "cssc/random.hpp"

namespace cssc {

// Two-cluster Gaussian-mixture fixture mirroring the real data regime:
// a small imbalanced labeled subset plus a large unlabeled pool. Class
// means sit `separation` apart (Euclidean, spread evenly over the nine
// features) with unit-variance spherical noise, so the Bayes error has a
// closed form and can be dialed low.
struct SyntheticSpec {
  std::size_t n_labeled_normal = 791;
  std::size_t n_labeled_fraud = 154;
  std::size_t n_unlabeled = 8346;
  double fraud_prior = 1.0 / 6.0;  // mixing weight for the unlabeled pool
  double separation = 4.5;
  double sigma = 1.0;
  std::uint64_t seed = 42;
};

namespace detail {

inline Instance synthetic_instance(std::size_t serial, Label cls, bool hide_label,
                                   const SyntheticSpec& spec, rng::Engine& eng) {
  Instance inst;
  inst.bidder_id = "b" + std::to_string(serial);
  inst.auction_id = "a" + std::to_string(serial);
  const double shift =
      cls == Label::Fraud ? spec.separation / 3.0 : 0.0;  // sqrt(9) = 3
  for (std::size_t f = 0; f < kNumFeatures; ++f)
    inst.features[f] = shift + spec.sigma * rng::gaussian(eng);
  inst.label = hide_label ? Label::Unlabeled : cls;
  return inst;
}

}  // namespace detail

// Labeled rows come first (Normal then Fraud), followed by the unlabeled
// pool drawn from the mixture.
inline Dataset make_synthetic(const SyntheticSpec& spec) {
  auto eng = rng::make_engine(rng::mix(spec.seed, 0x73796eULL));
  std::vector<Instance> rows;
  rows.reserve(spec.n_labeled_normal + spec.n_labeled_fraud + spec.n_unlabeled);
  std::size_t serial = 0;
  for (std::size_t i = 0; i < spec.n_labeled_normal; ++i)
    rows.push_back(detail::synthetic_instance(serial++, Label::Normal, false, spec, eng));
  for (std::size_t i = 0; i < spec.n_labeled_fraud; ++i)
    rows.push_back(detail::synthetic_instance(serial++, Label::Fraud, false, spec, eng));
  for (std::size_t i = 0; i < spec.n_unlabeled; ++i) {
    const Label cls = rng::uniform_real(eng) < spec.fraud_prior ? Label::Fraud
                                                                : Label::Normal;
    rows.push_back(detail::synthetic_instance(serial++, cls, true, spec, eng));
  }
  return Dataset(std::move(rows), {"synthetic", rows.size()});
}

inline double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Exact Bayes error of the mixture. For two spherical Gaussians the optimal
// rule thresholds the projection onto the mean-difference axis at
// t* = d/2 + (sigma^2/d) ln(prior_normal/prior_fraud).
inline double synthetic_bayes_error(const SyntheticSpec& spec) {
  const double d = spec.separation;
  const double prior_fraud = spec.fraud_prior;
  const double prior_normal = 1.0 - prior_fraud;
  const double t = d / 2.0 + (spec.sigma * spec.sigma / d) *
                                 std::log(prior_normal / prior_fraud);
  const double err_normal = 1.0 - standard_normal_cdf(t / spec.sigma);
  const double err_fraud = standard_normal_cdf((t - d) / spec.sigma);
  return prior_normal * err_normal + prior_fraud * err_fraud;
}

}  // namespace cssc
