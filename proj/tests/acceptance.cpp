// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Heavier end-to-end checks run on a synthetic imbalanced fixture
// whose Bayes error has a closed form.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cssc/cssc.hpp"

using namespace cssc;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<void()> body;  // throws on failure
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

std::string fmt(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

// ---- shared fixture for criteria 11 and 12 ----

struct EndToEnd {
  Dataset labeled;
  Dataset unlabeled;
  FoldPlan plan;
  std::vector<double> penalties{2, 3, 4, 5};
  // sweep results per CSL pipeline name
  std::vector<std::pair<std::string, std::vector<PenaltyPoint>>> sweeps;
  PipelineSpec chopper_base;
};

EndToEnd* end_to_end = nullptr;

PipelineSpec make_chopper_spec(bool metacost) {
  PipelineSpec spec;
  spec.name = metacost ? "csl+chopper" : "chopper";
  spec.ssc = SscKind::Chopper;
  spec.chopper.first_learner = parse_learner_spec("nb");
  spec.chopper.second_learner = parse_learner_spec("rf");
  spec.chopper.second_learner.forest.n_trees = 25;
  spec.chopper.second_learner.forest.max_depth = 12;
  spec.chopper.chunk_fraction = 0.5;
  if (metacost) {
    spec.metacost = MetaCostConfig{};
    spec.metacost->n_bags = 5;
  }
  spec.seed = 20240601;
  return spec;
}

PipelineSpec make_yatsi_spec(const char* first, bool metacost) {
  PipelineSpec spec;
  spec.name = std::string(metacost ? "csl+" : "") + "yatsi-" + first;
  spec.ssc = SscKind::Yatsi;
  spec.yatsi.first_learner = parse_learner_spec(first);
  spec.yatsi.k = 5;
  if (metacost) {
    spec.metacost = MetaCostConfig{};
    spec.metacost->n_bags = 5;
  }
  spec.seed = 20240601;
  return spec;
}

// ---- criteria ----

void criterion_metric_oracle() {
  auto eng = rng::make_engine(1001);
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionMatrix c{
        static_cast<std::int64_t>(rng::uniform_index(eng, 300)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 300)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 300)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 300))};
    const double tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);

    const RatioMetrics m = ratio_metrics(c);
    if (tp + fn > 0) {
      require(std::abs(*m.recall - tp / (tp + fn)) <= 1e-12, "recall oracle");
      require(std::abs(*m.fnr - fn / (fn + tp)) <= 1e-12, "fnr oracle");
      require(std::abs(*m.recall + *m.fnr - 1.0) <= 1e-12, "recall + fnr = 1");
    } else {
      require(!m.recall && !m.fnr, "undefined recall/fnr marker");
    }
    if (fp + tn > 0)
      require(std::abs(*m.fpr - fp / (fp + tn)) <= 1e-12, "fpr oracle");

    const double total = tp + tn + fp + fn;
    const KappaResult k = kappa(c);
    if (total > 0) {
      const double po = (tp + tn) / total;
      const double pc = ((tp + fn) * (tp + fp) + (tn + fp) * (tn + fn)) / (total * total);
      if (pc < 1.0)
        require(std::abs(*k.kappa - (po - pc) / (1.0 - pc)) <= 1e-12, "kappa oracle");
      else
        require(!k.kappa, "kappa undefined marker");
    }
  }
}

void criterion_total_cost() {
  auto eng = rng::make_engine(1002);
  for (int trial = 0; trial < 1000; ++trial) {
    const ConfusionMatrix c{
        static_cast<std::int64_t>(rng::uniform_index(eng, 400)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 400)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 400)),
        static_cast<std::int64_t>(rng::uniform_index(eng, 400))};
    const CostMatrix cm{0, 0, static_cast<double>(rng::uniform_index(eng, 20)),
                        static_cast<double>(rng::uniform_index(eng, 20))};
    require(total_cost(c, cm) == static_cast<double>(c.fn) * cm.c_fn +
                                     static_cast<double>(c.fp) * cm.c_fp,
            "Eq. pricing exactness");
    if (c.fn > 0) {
      CostMatrix up = cm;
      up.c_fn += 0.5;
      require(total_cost(c, up) > total_cost(c, cm), "strictly increasing in c_fn");
    }
  }
}

void criterion_threshold_law() {
  for (const double c_fn : {2.0, 3.0, 4.0, 5.0}) {
    const CostMatrix cm{0, 0, 1, c_fn};
    const double threshold = 1.0 / (1.0 + c_fn);
    for (int i = 0; i <= 10000; ++i) {
      const double p = static_cast<double>(i) / 10000.0;
      const bool fraud = min_risk_class({1.0 - p, p}, cm) == Label::Fraud;
      if (p > threshold) require(fraud, "above threshold must be Fraud");
      else if (p < threshold) require(!fraud, "below threshold must be Normal");
      else require(fraud, "boundary tie must fall to Fraud");
      // Exact rule: p*c_fn >= (1-p) exactly when relabelled Fraud.
      require(fraud == (p * c_fn >= (1.0 - p)), "risk comparison oracle");
    }
  }
}

void criterion_metacost_degeneracy() {
  auto eng = rng::make_engine(1004);
  PipelineSpec spec;
  spec.ssc = SscKind::Yatsi;
  spec.yatsi.first_learner = parse_learner_spec("nb");
  const CostMatrix unit{0, 0, 1, 1};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_normal = 5 + rng::uniform_index(eng, 100);
    const std::size_t n_fraud = 5 + rng::uniform_index(eng, 95);
    std::vector<Instance> labeled;
    for (std::size_t i = 0; i < n_normal + n_fraud; ++i) {
      Instance inst;
      inst.bidder_id = "b" + std::to_string(i);
      inst.auction_id = "a" + std::to_string(i);
      inst.label = i < n_normal ? Label::Normal : Label::Fraud;
      const double mu = inst.label == Label::Fraud ? 1.5 : 0.0;
      for (auto& f : inst.features) f = mu + rng::gaussian(eng);
      labeled.push_back(std::move(inst));
    }
    MetaCostConfig cfg;
    cfg.n_bags = 3;
    cfg.seed = 5000 + trial;
    const auto dists = metacost_bagged_distributions(labeled, {}, spec, cfg);
    const auto relabeled = relabel_by_risk(labeled, dists, unit);
    for (std::size_t i = 0; i < labeled.size(); ++i)
      require(relabeled[i].label == argmax_label(dists[i]),
              "unit-cost relabel equals bagged argmax");
  }
}

void criterion_relabel_monotonicity() {
  auto eng = rng::make_engine(1005);
  std::vector<Instance> labeled;
  std::vector<ClassDistribution> dists;
  for (int i = 0; i < 500; ++i) {
    Instance inst;
    inst.bidder_id = "b" + std::to_string(i);
    inst.auction_id = "a" + std::to_string(i);
    inst.label = Label::Normal;
    labeled.push_back(inst);
    const double p = rng::uniform_real(eng);
    dists.push_back({1.0 - p, p});
  }
  std::set<std::size_t> previous;
  for (const double c_fn : {2.0, 3.0, 4.0, 5.0}) {
    const auto relabeled = relabel_by_risk(labeled, dists, {0, 0, 1, c_fn});
    std::set<std::size_t> current;
    for (std::size_t i = 0; i < relabeled.size(); ++i)
      if (relabeled[i].label == Label::Fraud) current.insert(i);
    require(std::includes(current.begin(), current.end(), previous.begin(),
                          previous.end()),
            "fraud set at lower penalty must be a subset");
    previous = current;
  }
}

void criterion_kd_oracle() {
  auto eng = rng::make_engine(1006);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng::uniform_index(eng, 200);
    std::vector<FeatureVector> points(n);
    std::vector<KdPayload> payloads(n);
    const bool lattice = trial % 3 == 0;  // force exact distance ties often
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : points[i])
        v = lattice ? static_cast<double>(rng::uniform_index(eng, 4))
                    : 4.0 * (rng::uniform_real(eng) - 0.5);
      payloads[i] = {rng::uniform_real(eng) < 0.3 ? Label::Fraud : Label::Normal,
                     rng::uniform_real(eng)};
    }
    const KdTree tree(points, payloads);
    FeatureVector q;
    for (auto& v : q)
      v = lattice ? static_cast<double>(rng::uniform_index(eng, 4))
                  : 4.0 * (rng::uniform_real(eng) - 0.5);
    const std::size_t k = 1 + rng::uniform_index(eng, n);
    const auto got = tree.query(q, k);
    const auto want = brute_force_knn(points, payloads, q, k);
    require(got.size() == want.size(), "kd result size");
    for (std::size_t i = 0; i < got.size(); ++i)
      require(got[i].index == want[i].index && got[i].dist2 == want[i].dist2,
              "kd equals brute force");
  }
}

void criterion_forest_degeneracy() {
  auto eng = rng::make_engine(1007);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_normal = 5 + rng::uniform_index(eng, 80);
    const std::size_t n_fraud = 5 + rng::uniform_index(eng, 80);
    std::vector<Instance> train;
    for (std::size_t i = 0; i < n_normal + n_fraud; ++i) {
      Instance inst;
      inst.bidder_id = "b" + std::to_string(i);
      inst.auction_id = "a" + std::to_string(i);
      inst.label = i < n_normal ? Label::Normal : Label::Fraud;
      const double mu = inst.label == Label::Fraud ? 1.0 : 0.0;
      for (auto& f : inst.features) f = mu + rng::gaussian(eng);
      train.push_back(std::move(inst));
    }
    ForestConfig fcfg;
    fcfg.n_trees = 1;
    fcfg.bootstrap = false;
    fcfg.feature_subsample = 0;
    fcfg.max_depth = kMaxTreeDepth;
    fcfg.seed = trial;
    const ForestModel forest = forest_train(train, fcfg);
    TreeConfig tcfg;
    tcfg.prune = false;
    tcfg.min_leaf = 1;
    const TreeModel tree = tree_train(train, tcfg);
    for (const auto& inst : train)
      require(forest_predict(forest, inst) == tree_predict(tree, inst),
              "1-tree forest equals unpruned tree (train points)");
    for (int qi = 0; qi < 10; ++qi) {
      FeatureVector x;
      for (auto& v : x) v = 5.0 * (rng::uniform_real(eng) - 0.5);
      require(forest_predict(forest, x) == tree_predict(tree, x),
              "1-tree forest equals unpruned tree (queries)");
    }
  }
}

void criterion_yatsi_degeneracy() {
  auto eng = rng::make_engine(1008);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n_normal = 5 + rng::uniform_index(eng, 40);
    const std::size_t n_fraud = 5 + rng::uniform_index(eng, 40);
    std::vector<Instance> labeled, pool;
    for (std::size_t i = 0; i < n_normal + n_fraud; ++i) {
      Instance inst;
      inst.bidder_id = "b" + std::to_string(i);
      inst.auction_id = "a" + std::to_string(i);
      inst.label = i < n_normal ? Label::Normal : Label::Fraud;
      for (auto& f : inst.features) f = rng::gaussian(eng);
      labeled.push_back(std::move(inst));
    }
    for (std::size_t i = 0; i < 30; ++i) {
      Instance inst;
      inst.bidder_id = "u" + std::to_string(i);
      inst.auction_id = "x" + std::to_string(i);
      inst.label = Label::Unlabeled;
      for (auto& f : inst.features) f = rng::gaussian(eng);
      pool.push_back(std::move(inst));
    }
    YatsiConfig cfg;
    cfg.k = 5;
    cfg.weighting_factor = 0.0;
    const YatsiModel m = yatsi_train(labeled, pool, cfg, trial);
    const KnnModel knn = knn_train(labeled, {5});
    for (int qi = 0; qi < 10; ++qi) {
      FeatureVector x;
      for (auto& v : x) v = 4.0 * (rng::uniform_real(eng) - 0.5);
      require(yatsi_predict(m, x) == knn_predict(knn, x),
              "F=0 equals labeled-only weighted k-NN");
    }
  }

  // Structural weight law at the paper's subset sizes.
  std::vector<Instance> labeled, pool;
  auto eng2 = rng::make_engine(4242);
  for (std::size_t i = 0; i < 945; ++i) {
    Instance inst;
    inst.bidder_id = "L" + std::to_string(i);
    inst.auction_id = "a" + std::to_string(i);
    inst.label = i < 791 ? Label::Normal : Label::Fraud;
    for (auto& f : inst.features) f = rng::gaussian(eng2);
    labeled.push_back(std::move(inst));
  }
  for (std::size_t i = 0; i < 8346; ++i) {
    Instance inst;
    inst.bidder_id = "U" + std::to_string(i);
    inst.auction_id = "x" + std::to_string(i);
    inst.label = Label::Unlabeled;
    for (auto& f : inst.features) f = rng::gaussian(eng2);
    pool.push_back(std::move(inst));
  }
  YatsiConfig cfg;
  cfg.weighting_factor = 1.0;
  const YatsiModel m = yatsi_train(labeled, pool, cfg, 7);
  require(m.unlabeled_weight == 945.0 / 8346.0, "w_u formula");
  require(std::abs(m.unlabeled_weight - 0.11323) <= 1e-5, "w_u ~ 0.11323");
  const auto& payloads = m.references.payloads();
  for (std::size_t i = 0; i < 945; ++i)
    require(payloads[i].weight == 1.0, "labeled weight 1");
  for (std::size_t i = 945; i < payloads.size(); ++i)
    require(payloads[i].weight == m.unlabeled_weight, "pool weight w_u");

  for (const double f : {0.5, 2.0}) {
    YatsiConfig scaled = cfg;
    scaled.weighting_factor = f;
    const YatsiModel ms = yatsi_train(labeled, pool, scaled, 7);
    require(std::abs(ms.unlabeled_weight - f * 945.0 / 8346.0) <= 1e-15,
            "w_u linear in F");
  }
}

void criterion_chopper_schedule() {
  auto eng = rng::make_engine(1009);
  ChopperConfig cfg;
  cfg.first_learner = parse_learner_spec("nb");
  cfg.second_learner = parse_learner_spec("nb");

  // Permutation across chunk sizes.
  for (const double chunk : {0.08, 0.3, 1.0}) {
    std::vector<Instance> labeled, pool;
    for (std::size_t i = 0; i < 30; ++i) {
      Instance inst;
      inst.bidder_id = "b" + std::to_string(i);
      inst.auction_id = "a" + std::to_string(i);
      inst.label = i < 18 ? Label::Normal : Label::Fraud;
      const double mu = inst.label == Label::Fraud ? 2.0 : 0.0;
      for (auto& f : inst.features) f = mu + rng::gaussian(eng);
      labeled.push_back(std::move(inst));
    }
    for (std::size_t i = 0; i < 41; ++i) {
      Instance inst;
      inst.bidder_id = "u" + std::to_string(i);
      inst.auction_id = "x" + std::to_string(i);
      inst.label = Label::Unlabeled;
      for (auto& f : inst.features) f = rng::gaussian(eng);
      pool.push_back(std::move(inst));
    }
    ChopperConfig c = cfg;
    c.chunk_fraction = chunk;
    const ChopperResult result = chopper_train(labeled, pool, c, 17);
    auto order = result.chop_order;
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> expected(pool.size());
    std::iota(expected.begin(), expected.end(), 0);
    require(order == expected, "chop order is a permutation of the pool");

    if (chunk == 1.0) {
      // Two-phase reduction: pool predictions are exactly the first
      // learner's, and the final model is the second learner on the union.
      const NbModel first = nb_train(labeled);
      for (std::size_t i = 0; i < pool.size(); ++i)
        require(result.pool_predictions[i] == nb_predict(first, pool[i].features),
                "chunk=1 pool predictions come from phase one");
      std::vector<Instance> augmented = labeled;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        Instance pseudo = pool[i];
        pseudo.label = argmax_label(result.pool_predictions[i]);
        augmented.push_back(pseudo);
      }
      const NbModel second = nb_train(augmented);
      for (int qi = 0; qi < 10; ++qi) {
        FeatureVector x;
        for (auto& v : x) v = 4.0 * (rng::uniform_real(eng) - 0.5);
        require(chopper_predict(result.model, x) == nb_predict(second, x),
                "chunk=1 final model is the two-phase model");
      }
    }
  }

  // Margin ranking against a hand-ordered fixture.
  std::vector<Instance> labeled;
  for (int i = 0; i < 6; ++i) {
    Instance inst;
    inst.bidder_id = "b" + std::to_string(i);
    inst.auction_id = "a" + std::to_string(i);
    inst.label = i < 3 ? Label::Normal : Label::Fraud;
    inst.features.fill(0.0);
    inst.features[0] = i < 3 ? 0.0 + 0.1 * i : 10.0 + 0.1 * i;
    labeled.push_back(inst);
  }
  std::vector<Instance> pool(3);
  const double xs[3] = {5.1, 0.2, 9.9};  // boundary, deep-normal, deep-fraud
  for (int i = 0; i < 3; ++i) {
    pool[static_cast<std::size_t>(i)].bidder_id = "u" + std::to_string(i);
    pool[static_cast<std::size_t>(i)].auction_id = "x" + std::to_string(i);
    pool[static_cast<std::size_t>(i)].features.fill(0.0);
    pool[static_cast<std::size_t>(i)].features[0] = xs[i];
    pool[static_cast<std::size_t>(i)].label = Label::Unlabeled;
  }
  ChopperConfig one = cfg;
  one.chunk_fraction = 1e-9;  // chunk of 1
  const ChopperResult r = chopper_train(labeled, pool, one, 3);
  require(r.chop_order.size() == 3, "three chops");
  require(r.chop_order[0] != 0, "boundary instance is never chopped first");
  require(r.chop_order[2] == 0, "boundary instance is chopped last");
  require(margin(r.pool_predictions[1]) > margin(r.pool_predictions[0]),
          "deep instances carry larger margins");
}

void criterion_statistical_harness() {
  // paired_ttest(a, a) over 100 random result sets.
  auto eng = rng::make_engine(1010);
  for (int trial = 0; trial < 100; ++trial) {
    RunResults r;
    r.pipeline_name = "random";
    r.k = 5;
    r.runs = 2;
    r.plan_fingerprint = 999;
    r.mean_test_size = 20;
    r.mean_train_size = 80;
    for (int cell = 0; cell < 10; ++cell) {
      MetricsReport rep;
      rep.recall = rng::uniform_real(eng);
      rep.fnr = 1.0 - *rep.recall;
      rep.fpr = rng::uniform_real(eng);
      rep.kappa = 2.0 * rng::uniform_real(eng) - 1.0;
      rep.auc = rng::uniform_real(eng);
      rep.total_cost = static_cast<double>(rng::uniform_index(eng, 300));
      r.cells.push_back({cell / 5, cell % 5, rep});
    }
    for (const MetricName m : {MetricName::Recall, MetricName::Fnr, MetricName::Fpr,
                               MetricName::Kappa, MetricName::Auc,
                               MetricName::TotalCost}) {
      const TTestResult t = paired_ttest(r, r, m, 0.05);
      require(t.verdict == Verdict::NoDifference && t.statistic == 0.0,
              "self-comparison is no_difference");
    }
  }

  // Separated samples against a closed-form t.
  std::vector<double> a(60), b(60);
  auto eng2 = rng::make_engine(2026);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 0.9 + 0.02 * rng::gaussian(eng2);
    b[i] = 0.7 + 0.02 * rng::gaussian(eng2);
  }
  const double ratio = 0.125;
  double mean = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(a.size());
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(a.size() - 1);
  const double expected = mean / std::sqrt((1.0 / 60.0 + ratio) * var);
  const TTestResult t = paired_ttest_samples(a, b, ratio, 0.05);
  require(std::abs(t.statistic - expected) <= 1e-12, "closed-form t statistic");
  require(t.verdict == Verdict::SignificantlyBetter, "separated samples verdict");
}

void criterion_trend_reproduction() {
  end_to_end = new EndToEnd{};
  EndToEnd& ctx = *end_to_end;

  SyntheticSpec spec;  // 945 labeled at 5:1 + 8346 unlabeled
  spec.separation = 4.5;
  const double bayes = synthetic_bayes_error(spec);
  require(bayes <= 0.02, "fixture Bayes error " + fmt(bayes) + " must be <= 0.02");

  const Dataset all = make_synthetic(spec);
  auto [labeled, unlabeled] = split_labeled_unlabeled(all);
  require(labeled.size() == 945 && unlabeled.size() == 8346, "fixture sizes");
  ctx.labeled = std::move(labeled);
  ctx.unlabeled = std::move(unlabeled);
  ctx.plan = stratified_kfold(ctx.labeled, 2, 1, 7);
  ctx.chopper_base = make_chopper_spec(false);

  const std::vector<PipelineSpec> pipelines = {
      make_chopper_spec(true), make_yatsi_spec("knn", true),
      make_yatsi_spec("nb", true), make_yatsi_spec("j48", true)};

  for (const auto& pipe : pipelines) {
    ctx.sweeps.emplace_back(
        pipe.name, penalty_sweep(pipe, ctx.labeled, ctx.unlabeled, ctx.plan,
                                 ctx.penalties, 2));
  }

  std::ostringstream detail;
  for (const auto& [name, points] : ctx.sweeps) {
    detail << ' ' << name << ":";
    for (std::size_t i = 0; i < points.size(); ++i) {
      detail << ' ' << fmt(points[i].results.aggregate.total_cost);
      if (i > 0)
        require(points[i].results.aggregate.total_cost >=
                    points[i - 1].results.aggregate.total_cost - 1e-9,
                name + ": total cost must be non-decreasing in c_fn");
    }
  }

  const auto& chopper_points = ctx.sweeps[0].second;
  for (const auto& point : chopper_points) {
    require(point.results.aggregate.recall.has_value(), "chopper recall defined");
    require(*point.results.aggregate.recall >= 0.90,
            "csl+chopper recall " + fmt(*point.results.aggregate.recall) +
                " at c_fn=" + fmt(point.penalty) + " must be >= 0.90");
  }
  std::cout << "    costs:" << detail.str() << "\n";
}

void criterion_csl_vs_plain() {
  require(end_to_end != nullptr, "end-to-end fixture missing");
  EndToEnd& ctx = *end_to_end;

  PipelineSpec plain = ctx.chopper_base;
  plain.cost.c_fn = 2;
  const RunResults plain_run =
      cross_validate(plain, ctx.labeled, ctx.unlabeled, ctx.plan, 2);
  const RunResults& csl_run = ctx.sweeps[0].second[0].results;  // c_fn = 2

  require(plain_run.aggregate.fnr.has_value() && csl_run.aggregate.fnr.has_value(),
          "FNR defined on both sides");
  std::cout << "    fnr: csl+chopper " << fmt(*csl_run.aggregate.fnr)
            << " vs chopper " << fmt(*plain_run.aggregate.fnr) << "\n";
  require(*csl_run.aggregate.fnr <= *plain_run.aggregate.fnr + 1e-12,
          "CSL+Chopper FNR must not exceed plain Chopper FNR");
}

void criterion_cli_determinism() {
  const char* bin = std::getenv("CSSC_BIN");
  require(bin != nullptr, "CSSC_BIN not set");

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cssc_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SyntheticSpec spec;
  spec.n_labeled_normal = 120;
  spec.n_labeled_fraud = 30;
  spec.n_unlabeled = 90;
  spec.separation = 4.0;
  spec.seed = 99;
  save_csv(make_synthetic(spec), (dir / "data.csv").string());

  {
    std::ofstream cfg(dir / "exp.ini");
    cfg << "[experiment]\ndata = " << (dir / "data.csv").string()
        << "\nfolds = 2\nruns = 2\nseed = 11\npenalties = 2,3\nthreads = 2\n\n"
        << "[pipeline yatsi-nb]\n\n"
        << "[pipeline csl+yatsi-nb]\nbags = 3\n";
  }

  auto run_once = [&](const std::string& out) {
    const std::string cmd = std::string(bin) + " run -c " + (dir / "exp.ini").string() +
                            " -o " + (dir / out).string() + " > " +
                            (dir / (out + ".log")).string() + " 2>&1";
    require(std::system(cmd.c_str()) == 0, "cmd_run failed; see " + out + ".log");
  };
  run_once("first");
  run_once("second");

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "first")) {
    const fs::path other = dir / "second" / entry.path().filename();
    require(fs::exists(other), "missing twin for " + entry.path().filename().string());
    require(slurp(entry.path()) == slurp(other),
            entry.path().filename().string() + " differs across runs");
    ++compared;
  }
  require(compared >= 7, "expected the full report set, saw " + std::to_string(compared));
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric oracle equality (1000 random confusions, 1e-12)", criterion_metric_oracle},
      {2, "total-cost pricing exactness and monotonicity", criterion_total_cost},
      {3, "metacost threshold law over c_fn in {2,3,4,5}", criterion_threshold_law},
      {4, "unit-cost metacost equals bagged argmax (50 datasets)", criterion_metacost_degeneracy},
      {5, "fraud relabel sets nest as the penalty grows", criterion_relabel_monotonicity},
      {6, "kd-tree equals brute-force k-NN (1000 datasets)", criterion_kd_oracle},
      {7, "degenerate forest equals the unpruned tree (50 datasets)", criterion_forest_degeneracy},
      {8, "yatsi F=0 degeneracy and the w_u weight law", criterion_yatsi_degeneracy},
      {9, "chopper schedule: permutation, two-phase, margin order", criterion_chopper_schedule},
      {10, "paired t-test self-consistency and closed form", criterion_statistical_harness},
      {11, "penalty-sweep cost trend on the synthetic fixture", criterion_trend_reproduction},
      {12, "CSL+Chopper FNR does not exceed plain Chopper", criterion_csl_vs_plain},
      {13, "cmd_run determinism with parallel folds", criterion_cli_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criterion.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] criterion %2d: %s (%.2f s)",
                  error.empty() ? "PASS" : "FAIL", criterion.number,
                  criterion.name.c_str(), elapsed);
    std::cout << line << '\n';
    if (!error.empty()) {
      std::cout << "       " << error << '\n';
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" :
                std::to_string(failures) + " criteria failed") << '\n';
  return failures;
}
