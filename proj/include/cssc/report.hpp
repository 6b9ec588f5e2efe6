#pragma once

#include <array>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cssc/evaluate.hpp"
#include "cssc/serialize.hpp"

namespace cssc {

// Row order of the published performance tables.
inline constexpr std::array<MetricName, 6> kTableMetrics = {
    MetricName::Kappa, MetricName::Fnr,  MetricName::Fpr,
    MetricName::Recall, MetricName::Auc, MetricName::TotalCost};

inline const char* table_row_name(MetricName m) {
  switch (m) {
    case MetricName::Kappa: return "Kappa";
    case MetricName::Fnr: return "FNR";
    case MetricName::Fpr: return "FPR";
    case MetricName::Recall: return "Recall";
    case MetricName::Auc: return "AUC";
    default: return "Cost";
  }
}

// "2" for 2.0, "2.5" for 2.5; used in file names and headers.
inline std::string format_penalty(double p) {
  std::ostringstream out;
  out << p;
  return out.str();
}

inline std::string format_cell(const std::optional<double>& v, int decimals = 2) {
  if (!v) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, *v);
  return buf;
}

// Per-column significance markers against a baseline column: "**" when the
// column is significantly better than the baseline for that metric, "*"
// when significantly worse, "" otherwise. The baseline column stays blank.
using MarkerTable = std::vector<std::array<std::string, kTableMetrics.size()>>;

inline MarkerTable significance_markers(const std::vector<const RunResults*>& columns,
                                        std::size_t baseline, double alpha,
                                        bool corrected = true) {
  MarkerTable markers(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c == baseline) continue;
    for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
      const TTestResult t = paired_ttest(*columns[c], *columns[baseline],
                                         kTableMetrics[m], alpha, corrected);
      if (t.verdict == Verdict::SignificantlyBetter) markers[c][m] = "**";
      else if (t.verdict == Verdict::SignificantlyWorse) markers[c][m] = "*";
    }
  }
  return markers;
}

// Human table: metrics as rows, pipelines as columns, two decimals, markers
// appended. Pass an empty MarkerTable to omit markers.
inline std::string format_table_text(double penalty,
                                     const std::vector<const RunResults*>& columns,
                                     const MarkerTable& markers) {
  std::ostringstream out;
  out << "Performance when penalty is " << format_penalty(penalty)
      << " ('*' significantly worse, '**' significantly better than baseline)\n";
  std::vector<std::size_t> widths;
  widths.push_back(8);
  for (const auto* col : columns)
    widths.push_back(std::max<std::size_t>(col->pipeline_name.size() + 2, 12));

  out << std::left << std::setw(static_cast<int>(widths[0])) << "";
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << std::setw(static_cast<int>(widths[c + 1])) << columns[c]->pipeline_name;
  out << '\n';

  for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
    out << std::setw(static_cast<int>(widths[0])) << table_row_name(kTableMetrics[m]);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      std::string cell =
          format_cell(metric_value(columns[c]->aggregate, kTableMetrics[m]));
      if (!markers.empty() && !markers[c][m].empty()) cell += " " + markers[c][m];
      out << std::setw(static_cast<int>(widths[c + 1])) << cell;
    }
    out << '\n';
  }
  return out.str();
}

// CSV table with `#`-prefixed provenance comments carrying the resolved
// configuration of every column.
inline std::string format_table_csv(double penalty,
                                    const std::vector<const RunResults*>& columns,
                                    const MarkerTable& markers,
                                    const std::vector<Json>& column_configs) {
  std::ostringstream out;
  out << "# penalty " << format_penalty(penalty) << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << "# config " << columns[c]->pipeline_name << ' '
        << column_configs[c].dump() << '\n';
  out << "metric";
  for (const auto* col : columns) out << ',' << col->pipeline_name;
  out << ",marker_legend:*worse **better\n";
  for (std::size_t m = 0; m < kTableMetrics.size(); ++m) {
    out << table_row_name(kTableMetrics[m]);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto v = metric_value(columns[c]->aggregate, kTableMetrics[m]);
      out << ',' << format_cell(v);
      if (!markers.empty() && !markers[c][m].empty()) out << ' ' << markers[c][m];
    }
    out << '\n';
  }
  return out.str();
}

// Learning-curve series: one row per (penalty, pipeline), full precision.
inline std::string format_curve_csv(
    const std::vector<std::pair<std::string, std::vector<PenaltyPoint>>>& sweeps) {
  std::ostringstream out;
  out << "penalty,pipeline,total_cost,recall,fnr,fpr,kappa,auc\n";
  auto num = [](const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string("n/a");
  };
  for (const auto& [name, points] : sweeps) {
    for (const auto& point : points) {
      const MetricsReport& agg = point.results.aggregate;
      out << detail::format_double(point.penalty) << ',' << name << ','
          << detail::format_double(agg.total_cost) << ',' << num(agg.recall) << ','
          << num(agg.fnr) << ',' << num(agg.fpr) << ',' << num(agg.kappa) << ','
          << num(agg.auc) << '\n';
    }
  }
  return out.str();
}

}  // namespace cssc
