#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cssc/chopper.hpp"
#include "cssc/cost.hpp"
#include "cssc/yatsi.hpp"

namespace cssc {

enum class SscKind : std::uint8_t { Yatsi, Chopper };

inline const char* to_string(SscKind kind) {
  return kind == SscKind::Yatsi ? "yatsi" : "chopper";
}

inline SscKind parse_ssc_kind(const std::string& id) {
  if (id == "yatsi") return SscKind::Yatsi;
  if (id == "chopper") return SscKind::Chopper;
  throw ConfigError("unknown ssc algorithm '" + id + "' (expected yatsi or chopper)");
}

// Declarative description of one classification pipeline: the SSC
// meta-algorithm with its base learners, an optional MetaCost wrapper, and
// the cost matrix. The harness trains and evaluates any such combination.
struct PipelineSpec {
  std::string name = "chopper";
  SscKind ssc = SscKind::Chopper;
  YatsiConfig yatsi;
  ChopperConfig chopper;
  std::optional<MetaCostConfig> metacost;  // absent = plain SSC baseline
  CostMatrix cost;
  std::uint64_t seed = 0;
  // Ablation: additionally apply min-risk at prediction time. MetaCost
  // proper embeds costs by relabeling, so this defaults off.
  bool risk_at_predict = false;
};

using SscModel = std::variant<YatsiModel, ChopperModel>;

// Trains the pipeline's SSC stage (without the MetaCost wrapper) on a
// labeled set plus an unlabeled pool.
inline SscModel train_ssc(const std::vector<Instance>& labeled,
                          const std::vector<Instance>& pool,
                          const PipelineSpec& spec, std::uint64_t seed) {
  if (spec.ssc == SscKind::Yatsi)
    return yatsi_train(labeled, pool, spec.yatsi, seed);
  return chopper_train(labeled, pool, spec.chopper, seed).model;
}

inline ClassDistribution ssc_predict(const SscModel& model, const FeatureVector& x) {
  return std::visit(
      [&x](const auto& m) -> ClassDistribution {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, YatsiModel>) return yatsi_predict(m, x);
        else return chopper_predict(m, x);
      },
      model);
}

inline ClassDistribution ssc_predict(const SscModel& model, const Instance& x) {
  return ssc_predict(model, x.features);
}

}  // namespace cssc
