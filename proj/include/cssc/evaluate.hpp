#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cssc/cost.hpp"
#include "cssc/dataset.hpp"
#include "cssc/folds.hpp"
#include "cssc/metacost.hpp"
#include "cssc/metrics.hpp"
#include "cssc/pipeline.hpp"
#include "cssc/ttest.hpp"

namespace cssc {

enum class MetricName : std::uint8_t { Recall, Fnr, Fpr, Kappa, Auc, TotalCost };

inline const char* to_string(MetricName m) {
  switch (m) {
    case MetricName::Recall: return "recall";
    case MetricName::Fnr: return "fnr";
    case MetricName::Fpr: return "fpr";
    case MetricName::Kappa: return "kappa";
    case MetricName::Auc: return "auc";
    default: return "total_cost";
  }
}

inline MetricName parse_metric_name(const std::string& id) {
  if (id == "recall") return MetricName::Recall;
  if (id == "fnr") return MetricName::Fnr;
  if (id == "fpr") return MetricName::Fpr;
  if (id == "kappa") return MetricName::Kappa;
  if (id == "auc") return MetricName::Auc;
  if (id == "total_cost" || id == "cost") return MetricName::TotalCost;
  throw ConfigError("unknown metric '" + id + "'");
}

// Error-style metrics are better when lower.
inline bool higher_is_better(MetricName m) {
  switch (m) {
    case MetricName::Fnr:
    case MetricName::Fpr:
    case MetricName::TotalCost: return false;
    default: return true;
  }
}

inline std::optional<double> metric_value(const MetricsReport& r, MetricName m) {
  switch (m) {
    case MetricName::Recall: return r.recall;
    case MetricName::Fnr: return r.fnr;
    case MetricName::Fpr: return r.fpr;
    case MetricName::Kappa: return r.kappa;
    case MetricName::Auc: return r.auc;
    default: return r.total_cost;
  }
}

struct FoldCell {
  int run = 0;
  int fold = 0;
  MetricsReport report;
};

struct UndefinedCounts {
  int recall = 0;
  int fnr = 0;
  int fpr = 0;
  int kappa = 0;
  int auc = 0;
};

// Output of one repeated-cross-validation pass of one pipeline.
struct RunResults {
  std::string pipeline_name;
  CostMatrix cost;
  std::uint64_t seed = 0;
  int k = 0;
  int runs = 0;
  std::uint64_t plan_fingerprint = 0;
  double mean_test_size = 0;
  double mean_train_size = 0;
  std::vector<FoldCell> cells;  // exactly k*runs entries, run-major order
  // Means over the defined per-fold values; confusion counts are summed.
  // aggregate.total_cost is the mean over runs of the per-run summed cost.
  MetricsReport aggregate;
  UndefinedCounts undefined;
  std::vector<double> run_costs;  // one full-CV-pass cost per run
};

namespace detail {

template <typename Fn>
void parallel_cells(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

struct CellData {
  std::vector<Instance> train;
  std::vector<Instance> test;   // labels kept for scoring only
  std::vector<Instance> pool;   // unlabeled + test features, labels stripped
};

inline CellData make_cell_data(const Dataset& labeled, const Dataset& unlabeled,
                               const FoldPlan& plan, int run, int fold) {
  CellData cell;
  const auto& assign = plan.assignments[static_cast<std::size_t>(run)];
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (assign[i] < 0) continue;
    (assign[i] == fold ? cell.test : cell.train).push_back(labeled[i]);
  }
  cell.pool.reserve(unlabeled.size() + cell.test.size());
  for (const auto& inst : unlabeled.instances()) {
    Instance u = inst;
    u.label = Label::Unlabeled;
    cell.pool.push_back(std::move(u));
  }
  // Transductive pool: the held-out fold's features join the unlabeled
  // pool; its labels are never visible to training.
  for (const auto& inst : cell.test) {
    Instance u = inst;
    u.label = Label::Unlabeled;
    cell.pool.push_back(std::move(u));
  }
  return cell;
}

inline MetricsReport score_fold(const std::vector<Label>& preds,
                                const std::vector<double>& fraud_scores,
                                const std::vector<Label>& truth,
                                const CostMatrix& cm) {
  MetricsReport report;
  report.confusion = confusion(preds, truth);
  const RatioMetrics ratios = ratio_metrics(report.confusion);
  report.recall = ratios.recall;
  report.fnr = ratios.fnr;
  report.fpr = ratios.fpr;
  const KappaResult kp = kappa(report.confusion);
  report.kappa = kp.kappa;
  if (report.confusion.total() > 0) {
    report.p_observed = kp.p_observed;
    report.p_chance = kp.p_chance;
  }
  try {
    report.auc = auc(fraud_scores, truth);
  } catch (const std::invalid_argument&) {
    report.auc = std::nullopt;  // single-class fold
  }
  report.total_cost = total_cost(report.confusion, cm);
  return report;
}

struct MeanAccumulator {
  double sum = 0;
  int n = 0;
  void add(const std::optional<double>& v) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  std::optional<double> mean() const {
    if (n == 0) return std::nullopt;
    return sum / n;
  }
};

inline void finalize_results(RunResults& results) {
  MeanAccumulator recall, fnr, fpr, kp, auc_acc, p_obs, p_chance;
  results.run_costs.assign(static_cast<std::size_t>(results.runs), 0.0);
  for (const auto& cell : results.cells) {
    recall.add(cell.report.recall);
    fnr.add(cell.report.fnr);
    fpr.add(cell.report.fpr);
    kp.add(cell.report.kappa);
    auc_acc.add(cell.report.auc);
    p_obs.add(cell.report.p_observed);
    p_chance.add(cell.report.p_chance);
    results.aggregate.confusion += cell.report.confusion;
    results.run_costs[static_cast<std::size_t>(cell.run)] += cell.report.total_cost;
    results.undefined.recall += !cell.report.recall;
    results.undefined.fnr += !cell.report.fnr;
    results.undefined.fpr += !cell.report.fpr;
    results.undefined.kappa += !cell.report.kappa;
    results.undefined.auc += !cell.report.auc;
  }
  results.aggregate.recall = recall.mean();
  results.aggregate.fnr = fnr.mean();
  results.aggregate.fpr = fpr.mean();
  results.aggregate.kappa = kp.mean();
  results.aggregate.auc = auc_acc.mean();
  results.aggregate.p_observed = p_obs.mean();
  results.aggregate.p_chance = p_chance.mean();
  double cost_sum = 0;
  for (const double c : results.run_costs) cost_sum += c;
  results.aggregate.total_cost = cost_sum / static_cast<double>(results.runs);
}

}  // namespace detail

// Evaluates one pipeline across every (run, fold) cell of the plan, once per
// false-negative penalty. Sharing one pass over the penalties avoids
// retraining the MetaCost bag ensemble, whose probability estimates do not
// depend on the cost matrix; per-cell RNG streams derive from
// (pipeline seed, run, fold) so any thread schedule yields identical output.
inline std::vector<RunResults> cross_validate_sweep(
    const PipelineSpec& spec, const Dataset& labeled, const Dataset& unlabeled,
    const FoldPlan& plan, const std::vector<double>& penalties, int threads = 1) {
  if (penalties.empty())
    throw std::invalid_argument("cross_validate_sweep: no penalties given");
  if (plan.n_instances != labeled.size())
    throw std::invalid_argument("cross_validate_sweep: plan does not match dataset");

  const std::size_t n_cells =
      static_cast<std::size_t>(plan.runs) * static_cast<std::size_t>(plan.k);
  std::vector<std::vector<FoldCell>> cells(penalties.size());
  for (auto& c : cells) c.resize(n_cells);

  detail::parallel_cells(n_cells, threads, [&](std::size_t cell_idx) {
    const int run = static_cast<int>(cell_idx) / plan.k;
    const int fold = static_cast<int>(cell_idx) % plan.k;
    const auto data = detail::make_cell_data(labeled, unlabeled, plan, run, fold);
    const std::uint64_t cell_seed =
        rng::mix(spec.seed, static_cast<std::uint64_t>(run),
                 static_cast<std::uint64_t>(fold));

    std::vector<Label> truth;
    truth.reserve(data.test.size());
    for (const auto& inst : data.test) truth.push_back(inst.label);

    auto evaluate_model = [&](auto&& classify, auto&& distribution,
                              const CostMatrix& cm) {
      std::vector<Label> preds;
      std::vector<double> scores;
      preds.reserve(data.test.size());
      scores.reserve(data.test.size());
      for (const auto& inst : data.test) {
        const ClassDistribution d = distribution(inst.features);
        preds.push_back(classify(d));
        scores.push_back(d.p_fraud);
      }
      return detail::score_fold(preds, scores, truth, cm);
    };

    if (spec.metacost) {
      MetaCostConfig mcfg = *spec.metacost;
      mcfg.seed = rng::mix(cell_seed, 0x4d43ULL);
      const auto distributions =
          metacost_bagged_distributions(data.train, data.pool, spec, mcfg);
      for (std::size_t p = 0; p < penalties.size(); ++p) {
        CostMatrix cm = spec.cost;
        cm.c_fn = penalties[p];
        const auto relabeled = relabel_by_risk(data.train, distributions, cm);
        const SscModel model = train_ssc(relabeled, data.pool, spec,
                                         rng::mix(mcfg.seed, 0x6d657461ULL));
        const CostSensitiveModel cs{model, cm, spec.risk_at_predict};
        cells[p][cell_idx] = {
            run, fold,
            evaluate_model([&cs](const ClassDistribution& d) {
                             return cs.risk_at_predict ? min_risk_class(d, cs.cost)
                                                       : argmax_label(d);
                           },
                           [&cs](const FeatureVector& x) { return cs.distribution(x); },
                           cm)};
      }
    } else {
      // Plain SSC ignores the cost matrix while training; only the fold
      // pricing changes across penalties.
      const SscModel model = train_ssc(data.train, data.pool, spec, cell_seed);
      const MetricsReport base = evaluate_model(
          [](const ClassDistribution& d) { return argmax_label(d); },
          [&model](const FeatureVector& x) { return ssc_predict(model, x); },
          spec.cost);
      for (std::size_t p = 0; p < penalties.size(); ++p) {
        CostMatrix cm = spec.cost;
        cm.c_fn = penalties[p];
        MetricsReport report = base;
        report.total_cost = total_cost(report.confusion, cm);
        cells[p][cell_idx] = {run, fold, report};
      }
    }
  });

  std::vector<RunResults> out(penalties.size());
  double test_sum = 0;
  for (const auto& run_assign : plan.assignments)
    for (const std::int32_t a : run_assign) test_sum += a >= 0 ? 1 : 0;
  const double mean_test = test_sum / static_cast<double>(n_cells);

  for (std::size_t p = 0; p < penalties.size(); ++p) {
    RunResults& r = out[p];
    r.pipeline_name = spec.name;
    r.cost = spec.cost;
    r.cost.c_fn = penalties[p];
    r.seed = spec.seed;
    r.k = plan.k;
    r.runs = plan.runs;
    r.plan_fingerprint = plan.fingerprint();
    r.mean_test_size = mean_test;
    r.mean_train_size =
        static_cast<double>(plan.n_labeled) - mean_test;
    r.cells = std::move(cells[p]);
    detail::finalize_results(r);
  }
  return out;
}

inline RunResults cross_validate(const PipelineSpec& spec, const Dataset& labeled,
                                 const Dataset& unlabeled, const FoldPlan& plan,
                                 int threads = 1) {
  return std::move(
      cross_validate_sweep(spec, labeled, unlabeled, plan, {spec.cost.c_fn}, threads)
          .front());
}

struct PenaltyPoint {
  double penalty = 0;
  RunResults results;
};

// One full cross-validation per false-negative penalty.
inline std::vector<PenaltyPoint> penalty_sweep(const PipelineSpec& spec,
                                               const Dataset& labeled,
                                               const Dataset& unlabeled,
                                               const FoldPlan& plan,
                                               const std::vector<double>& penalties,
                                               int threads = 1) {
  if (penalties.empty())
    throw std::invalid_argument("penalty_sweep: penalties must be non-empty");
  auto results = cross_validate_sweep(spec, labeled, unlabeled, plan, penalties, threads);
  std::vector<PenaltyPoint> out;
  out.reserve(penalties.size());
  for (std::size_t i = 0; i < penalties.size(); ++i)
    out.push_back({penalties[i], std::move(results[i])});
  return out;
}

// Corrected resampled paired t-test over the k*runs per-fold samples of two
// result sets sharing one fold plan. Pairs where either side is undefined
// are dropped.
inline TTestResult paired_ttest(const RunResults& a, const RunResults& b,
                                MetricName metric, double alpha,
                                bool corrected = true) {
  if (a.plan_fingerprint != b.plan_fingerprint)
    throw std::invalid_argument("paired_ttest: results use different fold plans");
  if (a.cells.size() != b.cells.size())
    throw std::invalid_argument("paired_ttest: cell count mismatch");

  std::vector<double> xs, ys;
  xs.reserve(a.cells.size());
  ys.reserve(a.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const auto va = metric_value(a.cells[i].report, metric);
    const auto vb = metric_value(b.cells[i].report, metric);
    if (va && vb) {
      xs.push_back(*va);
      ys.push_back(*vb);
    }
  }
  const double ratio = a.mean_train_size > 0
                           ? a.mean_test_size / a.mean_train_size
                           : 0.0;
  TTestResult result =
      paired_ttest_samples(xs, ys, ratio, alpha, higher_is_better(metric), corrected);
  result.metric = to_string(metric);
  return result;
}

}  // namespace cssc
