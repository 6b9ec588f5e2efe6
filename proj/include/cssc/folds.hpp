#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cssc/dataset.hpp"
#include "cssc/random.hpp"

namespace cssc {

// Stratified repeated cross-validation plan over the labeled instances of
// one dataset. assignments[run][i] is the test-fold index of instance i, or
// -1 when instance i is unlabeled (unlabeled data is never folded).
struct FoldPlan {
  int k = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::size_t n_instances = 0;
  std::size_t n_labeled = 0;
  std::vector<std::vector<std::int32_t>> assignments;

  // Stable identity used to check that two result sets share a plan.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001b3ULL;
    };
    feed(static_cast<std::uint64_t>(k));
    feed(static_cast<std::uint64_t>(runs));
    feed(seed);
    feed(n_instances);
    for (const auto& run : assignments)
      for (const std::int32_t a : run) feed(static_cast<std::uint64_t>(a) + 7);
    return h;
  }
};

// Builds a stratified k-fold plan repeated `runs` times. Per fold and class,
// the test count is the floor or ceil of class_total/k; fold sizes likewise
// differ by at most one. Deterministic in (seed, k, runs, dataset).
inline FoldPlan stratified_kfold(const Dataset& ds, int k, int runs,
                                 std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
  if (runs < 1) throw std::invalid_argument("stratified_kfold: runs must be >= 1");

  std::vector<std::size_t> normal_idx, fraud_idx;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].label == Label::Normal) normal_idx.push_back(i);
    else if (ds[i].label == Label::Fraud) fraud_idx.push_back(i);
  }
  const std::size_t uk = static_cast<std::size_t>(k);
  if (normal_idx.size() < uk || fraud_idx.size() < uk) {
    throw std::invalid_argument(
        "stratified_kfold: each class needs at least k labeled instances");
  }
  const std::size_t n = normal_idx.size() + fraud_idx.size();

  FoldPlan plan;
  plan.k = k;
  plan.runs = runs;
  plan.seed = seed;
  plan.n_instances = ds.size();
  plan.n_labeled = n;
  plan.assignments.resize(static_cast<std::size_t>(runs));

  for (int run = 0; run < runs; ++run) {
    auto eng = rng::make_engine(rng::mix(seed, static_cast<std::uint64_t>(run)));

    auto normals = normal_idx;
    auto frauds = fraud_idx;
    rng::shuffle(normals, eng);
    rng::shuffle(frauds, eng);

    // Which folds receive the size remainders is randomized per run.
    std::vector<std::size_t> fold_order(uk);
    std::iota(fold_order.begin(), fold_order.end(), 0);
    rng::shuffle(fold_order, eng);

    std::vector<std::size_t> fold_size(uk, n / uk);
    for (std::size_t r = 0; r < n % uk; ++r) ++fold_size[fold_order[r]];

    // Fraud remainders go to the largest folds first so that the per-fold
    // normal counts stay within the floor/ceil band as well.
    std::vector<std::size_t> by_size = fold_order;
    std::stable_sort(by_size.begin(), by_size.end(),
                     [&fold_size](std::size_t a, std::size_t b) {
                       return fold_size[a] > fold_size[b];
                     });
    std::vector<std::size_t> fraud_quota(uk, frauds.size() / uk);
    for (std::size_t r = 0; r < frauds.size() % uk; ++r) ++fraud_quota[by_size[r]];

    auto& assign = plan.assignments[static_cast<std::size_t>(run)];
    assign.assign(ds.size(), -1);
    std::size_t next_fraud = 0, next_normal = 0;
    for (std::size_t fold = 0; fold < uk; ++fold) {
      const std::size_t fq = fraud_quota[fold];
      const std::size_t nq = fold_size[fold] - fq;
      for (std::size_t j = 0; j < fq; ++j)
        assign[frauds[next_fraud++]] = static_cast<std::int32_t>(fold);
      for (std::size_t j = 0; j < nq; ++j)
        assign[normals[next_normal++]] = static_cast<std::int32_t>(fold);
    }
  }
  return plan;
}

}  // namespace cssc
