#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cssc/core.hpp"
#include "cssc/decision_tree.hpp"
#include "cssc/knn.hpp"
#include "cssc/naive_bayes.hpp"
#include "cssc/random_forest.hpp"

namespace cssc {

enum class LearnerKind : std::uint8_t { NaiveBayes, Tree, Forest, Knn };

// A base-learner recipe: which algorithm plus its hyper-parameters. The
// plain-text identifiers used in configs and the CLI are
// "nb", "j48", "rf" and "knn".
struct LearnerSpec {
  LearnerKind kind = LearnerKind::NaiveBayes;
  TreeConfig tree;      // j48
  ForestConfig forest;  // rf
  KnnConfig knn;        // knn

  bool operator==(const LearnerSpec&) const = default;
};

inline LearnerSpec parse_learner_spec(const std::string& id) {
  LearnerSpec spec;
  if (id == "nb") spec.kind = LearnerKind::NaiveBayes;
  else if (id == "j48") spec.kind = LearnerKind::Tree;
  else if (id == "rf") spec.kind = LearnerKind::Forest;
  else if (id == "knn") spec.kind = LearnerKind::Knn;
  else throw ConfigError("unknown learner '" + id + "' (expected nb, j48, rf or knn)");
  return spec;
}

inline const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::NaiveBayes: return "nb";
    case LearnerKind::Tree: return "j48";
    case LearnerKind::Forest: return "rf";
    default: return "knn";
  }
}

using LearnerModel = std::variant<NbModel, TreeModel, ForestModel, KnnModel>;

// Trains the learner described by `spec`. `seed` feeds the stochastic
// learners (forest); deterministic learners ignore it.
inline LearnerModel train_learner(const LearnerSpec& spec,
                                  const std::vector<Instance>& train,
                                  std::uint64_t seed) {
  switch (spec.kind) {
    case LearnerKind::NaiveBayes:
      return nb_train(train);
    case LearnerKind::Tree:
      return tree_train(train, spec.tree);
    case LearnerKind::Forest: {
      ForestConfig cfg = spec.forest;
      cfg.seed = seed;
      return forest_train(train, cfg);
    }
    default:
      return knn_train(train, spec.knn);
  }
}

inline ClassDistribution predict(const LearnerModel& model, const FeatureVector& x) {
  return std::visit(
      [&x](const auto& m) -> ClassDistribution {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, NbModel>) return nb_predict(m, x);
        else if constexpr (std::is_same_v<M, TreeModel>) return tree_predict(m, x);
        else if constexpr (std::is_same_v<M, ForestModel>) return forest_predict(m, x);
        else return knn_predict(m, x);
      },
      model);
}

inline ClassDistribution predict(const LearnerModel& model, const Instance& x) {
  return predict(model, x.features);
}

}  // namespace cssc
