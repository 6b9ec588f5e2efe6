// Command-line front end: experiment runner, hyper-parameter tuning,
// significance comparison and dataset inspection.
//
// Exit codes: 0 success, 1 internal error, 2 usage/config/data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cssc/cssc.hpp"

namespace fs = std::filesystem;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string data;
  std::string labeled;
  std::string unlabeled;
  std::string schema;
  std::optional<int> folds;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> cost_fn;
  std::optional<double> cost_fp;
  std::vector<std::string> pipelines;
  std::string out;
  std::optional<int> threads;
  std::optional<double> alpha;
  std::string baseline;
  bool scale = false;
  std::string emit;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("-c,--config", o.config_path, "experiment config file (INI)");
  cmd->add_option("--data", o.data, "CSV with labeled and unlabeled rows");
  cmd->add_option("--labeled", o.labeled, "CSV with the labeled subset");
  cmd->add_option("--unlabeled", o.unlabeled, "CSV with the unlabeled pool");
  cmd->add_option("--schema", o.schema, "strict|lenient (default strict)");
  cmd->add_option("-k,--k,--folds", o.folds, "cross-validation folds");
  cmd->add_option("--runs", o.runs, "cross-validation repetitions");
  cmd->add_option("--seed", o.seed, "master RNG seed");
  cmd->add_option("--cost-fn", o.cost_fn, "single FN penalty (replaces the sweep)");
  cmd->add_option("--cost-fp", o.cost_fp, "FP penalty (default 1)");
  cmd->add_option("-p,--pipeline", o.pipelines,
                  "pipeline name; repeatable. Filters config pipelines or "
                  "selects presets ([csl+]chopper, [csl+]yatsi-{nb,j48,knn})");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "parallel fold workers");
  cmd->add_option("--alpha", o.alpha, "significance level");
  cmd->add_option("--baseline", o.baseline, "pipeline the markers compare against");
  cmd->add_flag("--scale", o.scale, "min-max scale features (for distance learners)");
  cmd->add_option("--emit", o.emit, "output formats, e.g. csv,json");
}

cssc::ExperimentConfig load_config(const CliOverrides& o) {
  cssc::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = cssc::parse_config_file(o.config_path);

  if (!o.data.empty()) cfg.data_path = o.data;
  if (!o.labeled.empty()) cfg.labeled_path = o.labeled;
  if (!o.unlabeled.empty()) cfg.unlabeled_path = o.unlabeled;
  if (!o.schema.empty()) {
    if (o.schema == "strict") cfg.schema = cssc::SchemaMode::Strict;
    else if (o.schema == "lenient") cfg.schema = cssc::SchemaMode::Lenient;
    else throw cssc::ConfigError("bad --schema value '" + o.schema + "'");
  }
  if (o.folds) cfg.folds = *o.folds;
  if (o.runs) cfg.runs = *o.runs;
  if (o.seed) {
    cfg.seed = *o.seed;
    for (auto& spec : cfg.pipelines) spec.seed = 0;  // re-derive from master
  }
  if (o.cost_fn) cfg.penalties = {*o.cost_fn};
  if (o.cost_fp) cfg.cost_fp = *o.cost_fp;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.alpha) cfg.alpha = *o.alpha;
  if (!o.baseline.empty()) cfg.baseline = o.baseline;
  if (o.scale) cfg.scale_features = true;
  if (!o.emit.empty()) {
    cfg.emit_csv = o.emit.find("csv") != std::string::npos;
    cfg.emit_json = o.emit.find("json") != std::string::npos;
  }

  if (!o.pipelines.empty()) {
    std::vector<cssc::PipelineSpec> selected;
    for (const auto& name : o.pipelines) {
      bool found = false;
      for (const auto& spec : cfg.pipelines) {
        if (spec.name == name) {
          selected.push_back(spec);
          found = true;
          break;
        }
      }
      if (!found) selected.push_back(cssc::builtin_pipeline(name));
    }
    cfg.pipelines = std::move(selected);
  }
  return cfg;
}

struct LoadedData {
  cssc::Dataset labeled;
  cssc::Dataset unlabeled;
};

LoadedData load_data(const cssc::ExperimentConfig& cfg) {
  cssc::Dataset labeled, unlabeled;
  if (!cfg.data_path.empty()) {
    const cssc::Dataset all = cssc::load_csv(cfg.data_path, cfg.schema);
    auto [l, u] = cssc::split_labeled_unlabeled(all);
    labeled = std::move(l);
    unlabeled = std::move(u);
  } else {
    labeled = cssc::load_csv(cfg.labeled_path, cfg.schema);
    if (!cfg.unlabeled_path.empty())
      unlabeled = cssc::load_csv(cfg.unlabeled_path, cfg.schema);
  }
  if (!cfg.unlabeled_path.empty() && !cfg.data_path.empty())
    throw cssc::ConfigError("give either data= or labeled=/unlabeled=, not both");

  if (cfg.scale_features) {
    // Fit on everything the experiment sees so train/test use one scale.
    std::vector<cssc::Instance> rows = labeled.instances();
    rows.insert(rows.end(), unlabeled.instances().begin(), unlabeled.instances().end());
    const auto scaler = cssc::MinMaxScaler::fit(
        cssc::Dataset(std::move(rows), {"scaler-fit", 0}));
    labeled = scaler.apply(labeled);
    unlabeled = scaler.apply(unlabeled);
  }
  return {std::move(labeled), std::move(unlabeled)};
}

std::string sanitize(std::string name) {
  for (char& c : name)
    if (c == ' ' || c == '/' || c == '\\') c = '_';
  return name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cssc::DataError("cannot write " + path.string());
  out << content;
}

cssc::Json resolved_config_json(const cssc::ExperimentConfig& cfg) {
  cssc::Json j;
  j["data"] = cfg.data_path;
  j["labeled"] = cfg.labeled_path;
  j["unlabeled"] = cfg.unlabeled_path;
  j["schema"] = cfg.schema == cssc::SchemaMode::Strict ? "strict" : "lenient";
  j["scale_features"] = cfg.scale_features;
  j["folds"] = cfg.folds;
  j["runs"] = cfg.runs;
  j["seed"] = cfg.seed;
  j["penalties"] = cfg.penalties;
  j["cost_fp"] = cfg.cost_fp;
  j["threads"] = cfg.threads;
  j["alpha"] = cfg.alpha;
  j["baseline"] = cfg.baseline;
  cssc::Json pipes = cssc::Json::array();
  for (const auto& spec : cfg.pipelines) pipes.push_back(cssc::to_json(spec));
  j["pipelines"] = std::move(pipes);
  return j;
}

int cmd_run(const CliOverrides& overrides) {
  cssc::ExperimentConfig cfg = load_config(overrides);
  cssc::resolve_config(cfg);
  cssc::validate_config(cfg);
  const LoadedData data = load_data(cfg);

  const cssc::FoldPlan plan =
      cssc::stratified_kfold(data.labeled, cfg.folds, cfg.runs, cfg.seed);

  std::vector<std::pair<std::string, std::vector<cssc::PenaltyPoint>>> sweeps;
  for (const auto& spec : cfg.pipelines) {
    std::cerr << "running " << spec.name << " over " << cfg.penalties.size()
              << " penalties...\n";
    sweeps.emplace_back(spec.name,
                        cssc::penalty_sweep(spec, data.labeled, data.unlabeled,
                                            plan, cfg.penalties, cfg.threads));
  }

  fs::create_directories(cfg.out_dir);
  const cssc::Json config_echo = resolved_config_json(cfg);
  write_file(fs::path(cfg.out_dir) / "run_config.json", config_echo.dump(2) + "\n");

  std::size_t baseline_idx = 0;
  if (!cfg.baseline.empty()) {
    for (std::size_t i = 0; i < cfg.pipelines.size(); ++i)
      if (cfg.pipelines[i].name == cfg.baseline) baseline_idx = i;
  }

  for (std::size_t p = 0; p < cfg.penalties.size(); ++p) {
    std::vector<const cssc::RunResults*> columns;
    std::vector<cssc::Json> column_configs;
    for (std::size_t s = 0; s < sweeps.size(); ++s) {
      columns.push_back(&sweeps[s].second[p].results);
      column_configs.push_back(cssc::to_json(cfg.pipelines[s]));
    }
    cssc::MarkerTable markers;
    if (columns.size() > 1)
      markers = cssc::significance_markers(columns, baseline_idx, cfg.alpha);

    const std::string suffix = "cfn" + cssc::format_penalty(cfg.penalties[p]);
    const std::string text =
        cssc::format_table_text(cfg.penalties[p], columns, markers);
    std::cout << text << '\n';
    write_file(fs::path(cfg.out_dir) / ("table_" + suffix + ".txt"), text);
    if (cfg.emit_csv) {
      write_file(fs::path(cfg.out_dir) / ("table_" + suffix + ".csv"),
                 cssc::format_table_csv(cfg.penalties[p], columns, markers,
                                        column_configs));
    }
    if (cfg.emit_json) {
      for (std::size_t s = 0; s < sweeps.size(); ++s) {
        cssc::Json j;
        j["experiment"] = config_echo;
        j["pipeline_config"] = cssc::to_json(cfg.pipelines[s]);
        j["results"] = cssc::to_json(sweeps[s].second[p].results);
        write_file(fs::path(cfg.out_dir) /
                       ("results_" + sanitize(sweeps[s].first) + "_" + suffix + ".json"),
                   j.dump(2) + "\n");
      }
    }
  }

  if (cfg.emit_csv)
    write_file(fs::path(cfg.out_dir) / "curves.csv", cssc::format_curve_csv(sweeps));
  return 0;
}

int cmd_tune(const CliOverrides& overrides) {
  cssc::ExperimentConfig cfg = load_config(overrides);
  cssc::resolve_config(cfg);
  cssc::validate_config(cfg);
  if (cfg.grid.empty())
    throw cssc::ConfigError("tune needs a [grid] section with parameter ranges");
  if (cfg.pipelines.size() != 1)
    throw cssc::ConfigError("tune expects exactly one pipeline (use --pipeline)");
  const LoadedData data = load_data(cfg);

  const cssc::FoldPlan plan =
      cssc::stratified_kfold(data.labeled, cfg.folds, cfg.runs, cfg.seed);
  const cssc::GridSearchResult result = cssc::grid_search(
      cfg.pipelines[0], cfg.grid, data.labeled, data.unlabeled, plan, cfg.threads);

  cssc::Json j;
  j["pipeline"] = cfg.pipelines[0].name;
  j["best_fnr"] = result.best_fnr;
  cssc::Json best = cssc::Json::object();
  for (const auto& [key, value] : result.best_params) best[key] = value;
  j["best_params"] = best;
  j["best_config"] = cssc::to_json(result.best_spec);
  cssc::Json table = cssc::Json::array();
  for (const auto& point : result.table) {
    cssc::Json row;
    for (const auto& [key, value] : point.params) row[key] = value;
    row["mean_fnr"] = cssc::detail::opt_to_json(point.mean_fnr);
    row["mean_fpr"] = cssc::detail::opt_to_json(point.mean_fpr);
    row["mean_cost"] = point.mean_cost;
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);

  fs::create_directories(cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "best_params.json", j.dump(2) + "\n");

  std::cout << "best configuration (lowest mean FNR = " << result.best_fnr << "):\n";
  for (const auto& [key, value] : result.best_params)
    std::cout << "  " << key << " = " << value << '\n';
  return 0;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, double alpha,
                const std::string& out_path, bool naive) {
  auto read_results = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cssc::DataError("cannot open results file: " + path);
    cssc::Json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw cssc::DataError(path + ": bad JSON: " + e.what());
    }
    return cssc::run_results_from_json(j.contains("results") ? j.at("results") : j);
  };
  const cssc::RunResults a = read_results(path_a);
  const cssc::RunResults b = read_results(path_b);
  if (a.plan_fingerprint != b.plan_fingerprint)
    throw cssc::DataError("results were produced with different fold plans");

  std::cout << "A = " << a.pipeline_name << " (cfn=" << a.cost.c_fn << ")  vs  B = "
            << b.pipeline_name << " (cfn=" << b.cost.c_fn << "), alpha=" << alpha
            << "\n\nmetric      marker  verdict                t-stat      p-value\n";
  cssc::Json rows = cssc::Json::array();
  for (const cssc::MetricName metric : cssc::kTableMetrics) {
    const cssc::TTestResult t = cssc::paired_ttest(a, b, metric, alpha, !naive);
    const char* marker = t.verdict == cssc::Verdict::SignificantlyBetter ? "**"
                         : t.verdict == cssc::Verdict::SignificantlyWorse ? "*"
                                                                          : "";
    char line[160];
    std::snprintf(line, sizeof(line), "%-11s %-7s %-22s %10.4f %12.6g\n",
                  cssc::table_row_name(metric), marker, cssc::to_string(t.verdict),
                  t.statistic, t.p_value);
    std::cout << line;
    cssc::Json row = cssc::to_json(t);
    row["marker"] = marker;
    rows.push_back(std::move(row));
  }
  if (!out_path.empty()) {
    cssc::Json j;
    j["a"] = path_a;
    j["b"] = path_b;
    j["alpha"] = alpha;
    j["tests"] = std::move(rows);
    write_file(out_path, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_inspect(const std::string& path, const std::string& schema) {
  cssc::SchemaMode mode = cssc::SchemaMode::Strict;
  if (schema == "lenient") mode = cssc::SchemaMode::Lenient;
  else if (!schema.empty() && schema != "strict")
    throw cssc::ConfigError("bad --schema value '" + schema + "'");

  const cssc::Dataset ds = cssc::load_csv(path, mode);
  const std::size_t normal = ds.count(cssc::Label::Normal);
  const std::size_t fraud = ds.count(cssc::Label::Fraud);
  std::cout << "file:            " << ds.provenance().source << '\n'
            << "rows:            " << ds.size() << '\n'
            << "labeled:         " << ds.labeled_count() << " (" << normal
            << " normal, " << fraud << " fraud)\n"
            << "unlabeled:       " << ds.unlabeled_count() << '\n';
  if (fraud > 0) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", cssc::class_ratio(ds));
    std::cout << "normal:fraud:    " << buf << " : 1\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-sensitive semi-supervised classification toolkit"};
  app.require_subcommand(1);

  CliOverrides run_opts;
  CLI::App* run = app.add_subcommand("run", "run a penalty-sweep experiment");
  add_common_flags(run, run_opts);

  CliOverrides tune_opts;
  CLI::App* tune = app.add_subcommand("tune", "grid-search hyper-parameters");
  add_common_flags(tune, tune_opts);

  std::string cmp_a, cmp_b, cmp_out;
  double cmp_alpha = 0.05;
  bool cmp_naive = false;
  CLI::App* compare = app.add_subcommand("compare", "significance-test two result files");
  compare->add_option("--a", cmp_a, "first results JSON")->required();
  compare->add_option("--b", cmp_b, "second results JSON")->required();
  compare->add_option("--alpha", cmp_alpha, "significance level (default 0.05)");
  compare->add_option("-o,--out", cmp_out, "write the verdicts as JSON");
  compare->add_flag("--naive", cmp_naive, "use the naive (uncorrected) paired t-test");

  std::string inspect_path, inspect_schema;
  CLI::App* inspect = app.add_subcommand("inspect-data", "validate and summarize a data file");
  inspect->add_option("--data", inspect_path, "CSV file")->required();
  inspect->add_option("--schema", inspect_schema, "strict|lenient");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (tune->parsed()) return cmd_tune(tune_opts);
    if (compare->parsed())
      return cmd_compare(cmp_a, cmp_b, cmp_alpha, cmp_out, cmp_naive);
    if (inspect->parsed()) return cmd_inspect(inspect_path, inspect_schema);
  } catch (const cssc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cssc::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
