#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cssc/evaluate.hpp"
#include "cssc/learner.hpp"
#include "cssc/pipeline.hpp"

// Documented JSON forms for trained models and experiment results. Object
// keys keep insertion order so identical inputs serialize byte-identically.

namespace cssc {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json opt_to_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline std::optional<double> opt_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

inline Json label_to_json(Label l) { return to_string(l); }

inline Label label_from_json(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "normal") return Label::Normal;
  if (s == "fraud") return Label::Fraud;
  if (s == "unlabeled") return Label::Unlabeled;
  throw DataError("bad label in JSON: '" + s + "'");
}

}  // namespace detail

// ---- models ----

inline Json to_json(const NbModel& m) {
  Json j;
  j["type"] = "nb";
  j["prior_normal"] = m.prior_normal;
  j["prior_fraud"] = m.prior_fraud;
  j["single_class"] = m.single_class;
  j["only_class"] = detail::label_to_json(m.only_class);
  for (const char* cls : {"normal", "fraud"}) {
    const auto& params = cls[0] == 'n' ? m.normal_params : m.fraud_params;
    Json arr = Json::array();
    for (const auto& g : params) arr.push_back({{"mean", g.mean}, {"variance", g.variance}});
    j[std::string(cls) + "_params"] = std::move(arr);
  }
  return j;
}

inline NbModel nb_model_from_json(const Json& j) {
  NbModel m;
  m.prior_normal = j.at("prior_normal").get<double>();
  m.prior_fraud = j.at("prior_fraud").get<double>();
  m.single_class = j.at("single_class").get<bool>();
  m.only_class = detail::label_from_json(j.at("only_class"));
  for (const char* cls : {"normal", "fraud"}) {
    auto& params = cls[0] == 'n' ? m.normal_params : m.fraud_params;
    const Json& arr = j.at(std::string(cls) + "_params");
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      params[f].mean = arr.at(f).at("mean").get<double>();
      params[f].variance = arr.at(f).at("variance").get<double>();
    }
  }
  return m;
}

inline Json to_json(const TreeConfig& c) {
  return Json{{"confidence_factor", c.confidence_factor},
              {"min_leaf", c.min_leaf},
              {"prune", c.prune},
              {"max_depth", c.max_depth},
              {"feature_subsample", c.feature_subsample}};
}

inline TreeConfig tree_config_from_json(const Json& j) {
  TreeConfig c;
  c.confidence_factor = j.at("confidence_factor").get<double>();
  c.min_leaf = j.at("min_leaf").get<int>();
  c.prune = j.at("prune").get<bool>();
  c.max_depth = j.at("max_depth").get<int>();
  c.feature_subsample = j.at("feature_subsample").get<int>();
  return c;
}

inline Json to_json(const TreeModel& m) {
  Json nodes = Json::array();
  for (const auto& n : m.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"n_normal", n.n_normal},
                     {"n_fraud", n.n_fraud}});
  }
  return Json{{"type", "j48"},
              {"config", to_json(m.config)},
              {"single_class", m.single_class},
              {"only_class", detail::label_to_json(m.only_class)},
              {"nodes", std::move(nodes)}};
}

inline TreeModel tree_model_from_json(const Json& j) {
  TreeModel m;
  m.config = tree_config_from_json(j.at("config"));
  m.single_class = j.at("single_class").get<bool>();
  m.only_class = detail::label_from_json(j.at("only_class"));
  for (const Json& n : j.at("nodes")) {
    m.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                       n.at("left").get<std::int32_t>(), n.at("right").get<std::int32_t>(),
                       n.at("n_normal").get<double>(), n.at("n_fraud").get<double>()});
  }
  return m;
}

inline Json to_json(const ForestModel& m) {
  Json trees = Json::array();
  for (const auto& t : m.trees) trees.push_back(to_json(t));
  return Json{{"type", "rf"},
              {"n_trees", m.config.n_trees},
              {"max_depth", m.config.max_depth},
              {"bootstrap", m.config.bootstrap},
              {"feature_subsample", m.config.feature_subsample},
              {"seed", m.config.seed},
              {"trees", std::move(trees)}};
}

inline ForestModel forest_model_from_json(const Json& j) {
  ForestModel m;
  m.config.n_trees = j.at("n_trees").get<int>();
  m.config.max_depth = j.at("max_depth").get<int>();
  m.config.bootstrap = j.at("bootstrap").get<bool>();
  m.config.feature_subsample = j.at("feature_subsample").get<int>();
  m.config.seed = j.at("seed").get<std::uint64_t>();
  for (const Json& t : j.at("trees")) m.trees.push_back(tree_model_from_json(t));
  return m;
}

inline Json to_json(const KnnModel& m) {
  Json points = Json::array();
  Json payloads = Json::array();
  for (const auto& p : m.tree.points()) points.push_back(p);
  for (const auto& pl : m.tree.payloads())
    payloads.push_back({{"label", detail::label_to_json(pl.label)}, {"weight", pl.weight}});
  return Json{{"type", "knn"},
              {"k", m.config.k},
              {"points", std::move(points)},
              {"payloads", std::move(payloads)}};
}

inline KnnModel knn_model_from_json(const Json& j) {
  std::vector<FeatureVector> points;
  std::vector<KdPayload> payloads;
  for (const Json& p : j.at("points")) points.push_back(p.get<FeatureVector>());
  for (const Json& pl : j.at("payloads"))
    payloads.push_back({detail::label_from_json(pl.at("label")), pl.at("weight").get<double>()});
  return {KdTree(std::move(points), std::move(payloads)),
          KnnConfig{j.at("k").get<int>()}};
}

inline Json to_json(const LearnerModel& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

inline LearnerModel learner_model_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "nb") return nb_model_from_json(j);
  if (type == "j48") return tree_model_from_json(j);
  if (type == "rf") return forest_model_from_json(j);
  if (type == "knn") return knn_model_from_json(j);
  throw DataError("unknown model type '" + type + "'");
}

// ---- specs ----

inline Json to_json(const LearnerSpec& s) {
  Json j;
  j["learner"] = to_string(s.kind);
  switch (s.kind) {
    case LearnerKind::Tree:
      j["confidence_factor"] = s.tree.confidence_factor;
      j["min_leaf"] = s.tree.min_leaf;
      break;
    case LearnerKind::Forest:
      j["n_trees"] = s.forest.n_trees;
      j["max_depth"] = s.forest.max_depth;
      break;
    case LearnerKind::Knn:
      j["k"] = s.knn.k;
      break;
    default:
      break;
  }
  return j;
}

inline Json to_json(const CostMatrix& cm) {
  return Json{{"c_tp", cm.c_tp}, {"c_tn", cm.c_tn}, {"c_fp", cm.c_fp}, {"c_fn", cm.c_fn}};
}

inline CostMatrix cost_matrix_from_json(const Json& j) {
  return {j.at("c_tp").get<double>(), j.at("c_tn").get<double>(),
          j.at("c_fp").get<double>(), j.at("c_fn").get<double>()};
}

inline Json to_json(const MetaCostConfig& c) {
  return Json{{"n_bags", c.n_bags},
              {"bag_size", c.bag_size},
              {"use_all_models", c.use_all_models},
              {"bootstrap", c.bootstrap},
              {"batch_size", c.batch_size},
              {"seed", c.seed}};
}

inline Json to_json(const PipelineSpec& s) {
  Json j;
  j["name"] = s.name;
  j["ssc"] = to_string(s.ssc);
  if (s.ssc == SscKind::Yatsi) {
    j["first_learner"] = to_json(s.yatsi.first_learner);
    j["k"] = s.yatsi.k;
    j["weighting_factor"] = s.yatsi.weighting_factor;
  } else {
    j["first_learner"] = to_json(s.chopper.first_learner);
    j["second_learner"] = to_json(s.chopper.second_learner);
    j["chunk_fraction"] = s.chopper.chunk_fraction;
    j["max_iterations"] = s.chopper.max_iterations;
  }
  j["metacost"] = s.metacost ? to_json(*s.metacost) : Json(nullptr);
  j["cost"] = to_json(s.cost);
  j["seed"] = s.seed;
  j["risk_at_predict"] = s.risk_at_predict;
  return j;
}

// ---- results ----

inline Json to_json(const ConfusionMatrix& c) {
  return Json{{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}};
}

inline ConfusionMatrix confusion_from_json(const Json& j) {
  return {j.at("tp").get<std::int64_t>(), j.at("tn").get<std::int64_t>(),
          j.at("fp").get<std::int64_t>(), j.at("fn").get<std::int64_t>()};
}

inline Json to_json(const MetricsReport& r) {
  Json j;
  j["recall"] = detail::opt_to_json(r.recall);
  j["fnr"] = detail::opt_to_json(r.fnr);
  j["fpr"] = detail::opt_to_json(r.fpr);
  j["kappa"] = detail::opt_to_json(r.kappa);
  j["auc"] = detail::opt_to_json(r.auc);
  j["total_cost"] = r.total_cost;
  j["p_observed"] = detail::opt_to_json(r.p_observed);
  j["p_chance"] = detail::opt_to_json(r.p_chance);
  j["confusion"] = to_json(r.confusion);
  return j;
}

inline MetricsReport metrics_report_from_json(const Json& j) {
  MetricsReport r;
  r.recall = detail::opt_from_json(j.at("recall"));
  r.fnr = detail::opt_from_json(j.at("fnr"));
  r.fpr = detail::opt_from_json(j.at("fpr"));
  r.kappa = detail::opt_from_json(j.at("kappa"));
  r.auc = detail::opt_from_json(j.at("auc"));
  r.total_cost = j.at("total_cost").get<double>();
  r.p_observed = detail::opt_from_json(j.at("p_observed"));
  r.p_chance = detail::opt_from_json(j.at("p_chance"));
  r.confusion = confusion_from_json(j.at("confusion"));
  return r;
}

inline Json to_json(const RunResults& r) {
  Json cells = Json::array();
  for (const auto& cell : r.cells)
    cells.push_back({{"run", cell.run}, {"fold", cell.fold}, {"metrics", to_json(cell.report)}});
  Json j;
  j["pipeline"] = r.pipeline_name;
  j["cost"] = to_json(r.cost);
  j["seed"] = r.seed;
  j["k"] = r.k;
  j["runs"] = r.runs;
  j["plan_fingerprint"] = r.plan_fingerprint;
  j["mean_test_size"] = r.mean_test_size;
  j["mean_train_size"] = r.mean_train_size;
  j["aggregate"] = to_json(r.aggregate);
  j["undefined_counts"] = Json{{"recall", r.undefined.recall},
                               {"fnr", r.undefined.fnr},
                               {"fpr", r.undefined.fpr},
                               {"kappa", r.undefined.kappa},
                               {"auc", r.undefined.auc}};
  j["run_costs"] = r.run_costs;
  j["cells"] = std::move(cells);
  return j;
}

inline RunResults run_results_from_json(const Json& j) {
  RunResults r;
  r.pipeline_name = j.at("pipeline").get<std::string>();
  r.cost = cost_matrix_from_json(j.at("cost"));
  r.seed = j.at("seed").get<std::uint64_t>();
  r.k = j.at("k").get<int>();
  r.runs = j.at("runs").get<int>();
  r.plan_fingerprint = j.at("plan_fingerprint").get<std::uint64_t>();
  r.mean_test_size = j.at("mean_test_size").get<double>();
  r.mean_train_size = j.at("mean_train_size").get<double>();
  r.aggregate = metrics_report_from_json(j.at("aggregate"));
  const Json& u = j.at("undefined_counts");
  r.undefined = {u.at("recall").get<int>(), u.at("fnr").get<int>(),
                 u.at("fpr").get<int>(), u.at("kappa").get<int>(),
                 u.at("auc").get<int>()};
  r.run_costs = j.at("run_costs").get<std::vector<double>>();
  for (const Json& cell : j.at("cells"))
    r.cells.push_back({cell.at("run").get<int>(), cell.at("fold").get<int>(),
                       metrics_report_from_json(cell.at("metrics"))});
  return r;
}

inline Json to_json(const TTestResult& t) {
  return Json{{"metric", t.metric},     {"statistic", t.statistic},
              {"p_value", t.p_value},   {"verdict", to_string(t.verdict)},
              {"alpha", t.alpha},       {"corrected", t.corrected}};
}

}  // namespace cssc
