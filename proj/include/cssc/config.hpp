#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cssc/dataset.hpp"
#include "cssc/pipeline.hpp"
#include "cssc/tuning.hpp"

namespace cssc {

// Declarative experiment description: data paths, CV schedule, penalty
// sweep, pipelines. Parsed from an INI-style file; every key can be
// overridden by a CLI flag.
struct ExperimentConfig {
  std::string data_path;      // one file holding labeled + unlabeled rows
  std::string labeled_path;   // alternative: separate files
  std::string unlabeled_path;
  SchemaMode schema = SchemaMode::Strict;
  bool scale_features = false;
  int folds = 10;
  int runs = 10;
  std::uint64_t seed = 1;
  std::vector<double> penalties = {2, 3, 4, 5};
  double cost_fp = 1;
  int threads = 1;
  double alpha = 0.05;
  std::string out_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  std::string baseline;  // marker reference pipeline; empty = first listed
  std::vector<PipelineSpec> pipelines;
  std::vector<GridParam> grid;  // tune only
};

// The four pipeline presets evaluated in this toolkit plus their
// non-cost-sensitive baselines. "csl+" prefixes the MetaCost wrapper.
inline PipelineSpec builtin_pipeline(const std::string& name) {
  PipelineSpec spec;
  spec.name = name;
  std::string base = name;
  if (base.rfind("csl+", 0) == 0) {
    spec.metacost = MetaCostConfig{};
    base = base.substr(4);
  }
  if (base == "chopper") {
    spec.ssc = SscKind::Chopper;
  } else if (base == "yatsi-nb") {
    spec.ssc = SscKind::Yatsi;
    spec.yatsi.first_learner = parse_learner_spec("nb");
  } else if (base == "yatsi-j48") {
    spec.ssc = SscKind::Yatsi;
    spec.yatsi.first_learner = parse_learner_spec("j48");
  } else if (base == "yatsi-knn") {
    spec.ssc = SscKind::Yatsi;
    spec.yatsi.first_learner = parse_learner_spec("knn");
  } else {
    throw ConfigError("unknown pipeline '" + name +
                      "' (presets: [csl+]chopper, [csl+]yatsi-nb, "
                      "[csl+]yatsi-j48, [csl+]yatsi-knn)");
  }
  return spec;
}

namespace detail {

struct IniSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
};

inline std::vector<IniSection> parse_ini(std::istream& in, const std::string& origin) {
  std::vector<IniSection> sections;
  sections.push_back({"", {}});
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": bad section header");
      sections.push_back({trim(text.substr(1, text.size() - 2)), {}});
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    sections.back().entries.emplace_back(trim(text.substr(0, eq)),
                                         trim(text.substr(eq + 1)));
  }
  return sections;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("bad boolean for '" + key + "': " + v);
}

inline double parse_num(const std::string& v, const std::string& key) {
  const auto d = parse_double(v);
  if (!d) throw ConfigError("bad number for '" + key + "': " + v);
  return *d;
}

inline std::vector<double> parse_num_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_num(item, key));
  }
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

inline void apply_pipeline_key(PipelineSpec& spec, const std::string& key,
                               const std::string& value) {
  if (key == "ssc") {
    spec.ssc = parse_ssc_kind(value);
  } else if (key == "first") {
    const LearnerSpec ls = parse_learner_spec(value);
    spec.yatsi.first_learner = ls;
    spec.chopper.first_learner = ls;
  } else if (key == "second") {
    spec.chopper.second_learner = parse_learner_spec(value);
  } else if (key == "k") {
    spec.yatsi.k = static_cast<int>(parse_num(value, key));
  } else if (key == "f") {
    spec.yatsi.weighting_factor = parse_num(value, key);
  } else if (key == "chunk_fraction") {
    spec.chopper.chunk_fraction = parse_num(value, key);
  } else if (key == "max_iterations") {
    spec.chopper.max_iterations =
        static_cast<std::size_t>(parse_num(value, key));
  } else if (key == "metacost") {
    if (parse_bool(value, key)) {
      if (!spec.metacost) spec.metacost = MetaCostConfig{};
    } else {
      spec.metacost.reset();
    }
  } else if (key == "bags") {
    if (!spec.metacost) spec.metacost = MetaCostConfig{};
    spec.metacost->n_bags = static_cast<int>(parse_num(value, key));
  } else if (key == "bag_size") {
    if (!spec.metacost) spec.metacost = MetaCostConfig{};
    spec.metacost->bag_size = static_cast<std::size_t>(parse_num(value, key));
  } else if (key == "use_all_models") {
    if (!spec.metacost) spec.metacost = MetaCostConfig{};
    spec.metacost->use_all_models = parse_bool(value, key);
  } else if (key == "bootstrap") {
    if (!spec.metacost) spec.metacost = MetaCostConfig{};
    spec.metacost->bootstrap = parse_bool(value, key);
  } else if (key == "risk_at_predict") {
    spec.risk_at_predict = parse_bool(value, key);
  } else if (key == "seed") {
    spec.seed = static_cast<std::uint64_t>(parse_num(value, key));
  } else {
    // Dotted learner hyper-parameters share the tuning syntax.
    apply_param(spec, key, parse_num(value, key));
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  for (const auto& section : detail::parse_ini(in, origin)) {
    if (section.name.empty() || section.name == "experiment") {
      for (const auto& [key, value] : section.entries) {
        if (key == "data") cfg.data_path = value;
        else if (key == "labeled") cfg.labeled_path = value;
        else if (key == "unlabeled") cfg.unlabeled_path = value;
        else if (key == "schema") {
          const std::string v = detail::lower(value);
          if (v == "strict") cfg.schema = SchemaMode::Strict;
          else if (v == "lenient") cfg.schema = SchemaMode::Lenient;
          else throw ConfigError("bad schema mode '" + value + "'");
        } else if (key == "scale_features") cfg.scale_features = detail::parse_bool(value, key);
        else if (key == "folds" || key == "k") cfg.folds = static_cast<int>(detail::parse_num(value, key));
        else if (key == "runs") cfg.runs = static_cast<int>(detail::parse_num(value, key));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_num(value, key));
        else if (key == "penalties") cfg.penalties = detail::parse_num_list(value, key);
        else if (key == "cost_fp") cfg.cost_fp = detail::parse_num(value, key);
        else if (key == "threads") cfg.threads = static_cast<int>(detail::parse_num(value, key));
        else if (key == "alpha") cfg.alpha = detail::parse_num(value, key);
        else if (key == "out") cfg.out_dir = value;
        else if (key == "baseline") cfg.baseline = value;
        else if (key == "emit") {
          cfg.emit_csv = value.find("csv") != std::string::npos;
          cfg.emit_json = value.find("json") != std::string::npos;
        } else throw ConfigError(origin + ": unknown experiment key '" + key + "'");
      }
    } else if (section.name.rfind("pipeline", 0) == 0) {
      std::string name = detail::trim(section.name.substr(8));
      if (name.empty())
        throw ConfigError(origin + ": pipeline section needs a name: [pipeline NAME]");
      PipelineSpec spec;
      try {
        spec = builtin_pipeline(name);  // named like a preset: start from it
      } catch (const ConfigError&) {
        spec.name = name;
      }
      for (const auto& [key, value] : section.entries)
        detail::apply_pipeline_key(spec, key, value);
      cfg.pipelines.push_back(std::move(spec));
    } else if (section.name == "grid") {
      for (const auto& [key, value] : section.entries)
        cfg.grid.push_back({key, detail::parse_num_list(value, key)});
    } else {
      throw ConfigError(origin + ": unknown section [" + section.name + "]");
    }
  }
  return cfg;
}

// Fills derived defaults: pipelines inherit the experiment seed unless they
// set their own, and every pipeline prices with the experiment's FP cost
// and starts the sweep at the first penalty.
inline void resolve_config(ExperimentConfig& cfg) {
  for (auto& spec : cfg.pipelines) {
    if (spec.seed == 0) spec.seed = cfg.seed;
    spec.cost.c_fp = cfg.cost_fp;
    if (!cfg.penalties.empty()) spec.cost.c_fn = cfg.penalties.front();
  }
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, path);
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.folds < 2) throw ConfigError("folds must be >= 2");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.penalties.empty()) throw ConfigError("at least one penalty required");
  if (cfg.pipelines.empty()) throw ConfigError("at least one pipeline required");
  if (cfg.data_path.empty() && cfg.labeled_path.empty())
    throw ConfigError("no data file configured (data= or labeled=)");
  for (const auto& spec : cfg.pipelines) {
    if (!(spec.chopper.chunk_fraction > 0 && spec.chopper.chunk_fraction <= 1))
      throw ConfigError("pipeline '" + spec.name + "': chunk_fraction must be in (0,1]");
    if (spec.yatsi.k < 1 || spec.yatsi.weighting_factor < 0)
      throw ConfigError("pipeline '" + spec.name + "': bad yatsi parameters");
    if (spec.metacost && spec.metacost->n_bags < 1)
      throw ConfigError("pipeline '" + spec.name + "': metacost bags must be >= 1");
  }
}

}  // namespace cssc
