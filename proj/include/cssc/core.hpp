#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cssc {

inline constexpr std::size_t kNumFeatures = 9;

// Canonical CSV column names for the nine behaviour features, in file order.
inline constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "bidder_tendency", "bidding_ratio",  "last_bidding",
    "auction_bids",    "starting_price", "early_bidding",
    "winning_ratio",   "buyer_rating",   "bid_retraction"};

using FeatureVector = std::array<double, kNumFeatures>;

enum class Label : std::uint8_t { Normal = 0, Fraud = 1, Unlabeled = 2 };

inline const char* to_string(Label l) {
  switch (l) {
    case Label::Normal: return "normal";
    case Label::Fraud: return "fraud";
    default: return "unlabeled";
  }
}

// Raised for malformed or inconsistent input data (CSV, results files).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for invalid experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary class posterior. The currency passed between learners, the
// cost-sensitive wrapper and the metrics.
struct ClassDistribution {
  double p_normal = 0.5;
  double p_fraud = 0.5;

  bool valid(double tol = 1e-9) const {
    return p_normal >= -tol && p_normal <= 1.0 + tol && p_fraud >= -tol &&
           p_fraud <= 1.0 + tol && std::abs(p_normal + p_fraud - 1.0) <= tol;
  }

  double p(Label l) const { return l == Label::Fraud ? p_fraud : p_normal; }

  bool operator==(const ClassDistribution&) const = default;
};

// Builds a distribution from non-negative class masses. Zero total mass maps
// to the uninformative (0.5, 0.5).
inline ClassDistribution normalize_masses(double mass_normal, double mass_fraud) {
  const double total = mass_normal + mass_fraud;
  if (total <= 0.0) return {0.5, 0.5};
  return {mass_normal / total, mass_fraud / total};
}

// Hard decision. An exact tie goes to Fraud: a missed fraud is the costlier
// error in this domain.
inline Label argmax_label(const ClassDistribution& d) {
  return d.p_fraud >= d.p_normal ? Label::Fraud : Label::Normal;
}

// One bidder-in-auction record.
struct Instance {
  std::string bidder_id;
  std::string auction_id;
  FeatureVector features{};
  Label label = Label::Unlabeled;
};

}  // namespace cssc
