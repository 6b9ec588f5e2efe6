#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "cssc/stats.hpp"

namespace cssc {

enum class Verdict : int {
  SignificantlyWorse = -1,
  NoDifference = 0,
  SignificantlyBetter = 1,
};

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::SignificantlyWorse: return "significantly_worse";
    case Verdict::SignificantlyBetter: return "significantly_better";
    default: return "no_difference";
  }
}

struct TTestResult {
  double statistic = 0;
  double p_value = 1;
  Verdict verdict = Verdict::NoDifference;
  double alpha = 0.05;
  std::string metric;
  bool corrected = true;
};

// All paired differences equal and nonzero: zero variance is treated as
// significant with a capped statistic.
inline constexpr double kCappedTStatistic = 1e6;

// Paired t-test over per-fold samples. The corrected (resampled) variant
// inflates the variance by (1/n + test_train_ratio) because cross-validation
// folds share training data and the naive estimate is anti-conservative;
// the naive variant divides by n only. `higher_is_better` orients the
// verdict for error-style metrics.
inline TTestResult paired_ttest_samples(const std::vector<double>& a,
                                        const std::vector<double>& b,
                                        double test_train_ratio, double alpha,
                                        bool higher_is_better = true,
                                        bool corrected = true) {
  if (a.size() != b.size())
    throw std::invalid_argument("paired_ttest: sample size mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired_ttest: need at least 2 paired samples");

  double mean_diff = 0;
  for (std::size_t i = 0; i < n; ++i) mean_diff += a[i] - b[i];
  mean_diff /= static_cast<double>(n);

  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) - mean_diff;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);

  TTestResult result;
  result.alpha = alpha;
  result.corrected = corrected;
  const double df = static_cast<double>(n - 1);

  if (var <= 0) {
    if (mean_diff == 0) return result;  // identical samples: t = 0, p = 1
    result.statistic = mean_diff > 0 ? kCappedTStatistic : -kCappedTStatistic;
    result.p_value = 0;
  } else {
    const double scale = corrected
                             ? (1.0 / static_cast<double>(n) + test_train_ratio)
                             : 1.0 / static_cast<double>(n);
    result.statistic = mean_diff / std::sqrt(scale * var);
    result.p_value = stats::two_sided_p_value(result.statistic, df);
  }

  if (result.p_value < alpha) {
    const bool a_better = higher_is_better ? mean_diff > 0 : mean_diff < 0;
    result.verdict = a_better ? Verdict::SignificantlyBetter
                              : Verdict::SignificantlyWorse;
  }
  return result;
}

}  // namespace cssc
