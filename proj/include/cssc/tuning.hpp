#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cssc/evaluate.hpp"

namespace cssc {

// One tunable dimension: a dotted parameter key and the values to try.
struct GridParam {
  std::string key;
  std::vector<double> values;
};

// Applies a dotted parameter to every place in the pipeline where it is
// meaningful (e.g. "rf.n_trees" reaches any forest learner in the spec).
inline void apply_param(PipelineSpec& spec, const std::string& key, double value) {
  auto tree_cfgs = {&spec.yatsi.first_learner.tree, &spec.chopper.first_learner.tree,
                    &spec.chopper.second_learner.tree};
  auto forest_cfgs = {&spec.yatsi.first_learner.forest,
                      &spec.chopper.first_learner.forest,
                      &spec.chopper.second_learner.forest};
  auto knn_cfgs = {&spec.yatsi.first_learner.knn, &spec.chopper.first_learner.knn,
                   &spec.chopper.second_learner.knn};

  const auto as_int = [value]() { return static_cast<int>(std::llround(value)); };
  if (key == "rf.n_trees") {
    for (auto* cfg : forest_cfgs) cfg->n_trees = as_int();
  } else if (key == "rf.max_depth") {
    for (auto* cfg : forest_cfgs) cfg->max_depth = as_int();
  } else if (key == "j48.confidence_factor") {
    for (auto* cfg : tree_cfgs) cfg->confidence_factor = value;
  } else if (key == "j48.min_leaf") {
    for (auto* cfg : tree_cfgs) cfg->min_leaf = as_int();
  } else if (key == "knn.k") {
    for (auto* cfg : knn_cfgs) cfg->k = as_int();
  } else if (key == "yatsi.k") {
    spec.yatsi.k = as_int();
  } else if (key == "yatsi.f") {
    spec.yatsi.weighting_factor = value;
  } else if (key == "chopper.chunk_fraction") {
    spec.chopper.chunk_fraction = value;
  } else if (key == "metacost.bags") {
    if (spec.metacost) spec.metacost->n_bags = as_int();
  } else if (key == "cost.fn") {
    spec.cost.c_fn = value;
  } else if (key == "cost.fp") {
    spec.cost.c_fp = value;
  } else {
    throw ConfigError("unknown tuning parameter '" + key + "'");
  }
}

struct GridPoint {
  std::vector<std::pair<std::string, double>> params;
  std::optional<double> mean_fnr;
  std::optional<double> mean_fpr;
  double mean_cost = 0;
};

struct GridSearchResult {
  PipelineSpec best_spec;
  std::vector<std::pair<std::string, double>> best_params;
  double best_fnr = 0;
  std::vector<GridPoint> table;  // enumeration order
};

// Exhaustive evaluation over the cartesian product of the grid; selects the
// configuration with the lowest mean FNR, ties broken by lower total cost,
// then lower FPR, then enumeration order.
inline GridSearchResult grid_search(const PipelineSpec& base,
                                    const std::vector<GridParam>& grid,
                                    const Dataset& labeled, const Dataset& unlabeled,
                                    const FoldPlan& plan, int threads = 1) {
  if (grid.empty()) throw ConfigError("grid_search: empty grid");
  for (const auto& param : grid)
    if (param.values.empty())
      throw ConfigError("grid_search: no values for '" + param.key + "'");

  GridSearchResult result;
  std::vector<std::size_t> cursor(grid.size(), 0);
  bool have_best = false;
  std::optional<double> best_fnr;
  double best_cost = std::numeric_limits<double>::infinity();
  std::optional<double> best_fpr;

  while (true) {
    PipelineSpec spec = base;
    GridPoint point;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double v = grid[i].values[cursor[i]];
      apply_param(spec, grid[i].key, v);
      point.params.emplace_back(grid[i].key, v);
    }

    const RunResults run = cross_validate(spec, labeled, unlabeled, plan, threads);
    point.mean_fnr = run.aggregate.fnr;
    point.mean_fpr = run.aggregate.fpr;
    point.mean_cost = run.aggregate.total_cost;
    result.table.push_back(point);

    // Undefined FNR (no fraud in any test fold) never wins over a defined one.
    const double fnr = point.mean_fnr.value_or(std::numeric_limits<double>::infinity());
    const double prev = best_fnr ? *best_fnr : std::numeric_limits<double>::infinity();
    const double fpr = point.mean_fpr.value_or(std::numeric_limits<double>::infinity());
    const double prev_fpr = best_fpr ? *best_fpr : std::numeric_limits<double>::infinity();
    const bool better =
        !have_best || fnr < prev ||
        (fnr == prev && (point.mean_cost < best_cost ||
                         (point.mean_cost == best_cost && fpr < prev_fpr)));
    if (better) {
      have_best = true;
      best_fnr = point.mean_fnr;
      best_cost = point.mean_cost;
      best_fpr = point.mean_fpr;
      result.best_spec = spec;
      result.best_params = point.params;
      result.best_fnr = fnr;
    }

    std::size_t d = 0;
    for (; d < grid.size(); ++d) {
      if (++cursor[d] < grid[d].values.size()) break;
      cursor[d] = 0;
    }
    if (d == grid.size()) break;
  }
  return result;
}

}  // namespace cssc
