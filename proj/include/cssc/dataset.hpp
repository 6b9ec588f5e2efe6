#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cssc/core.hpp"

namespace cssc {

enum class SchemaMode { Strict, Lenient };

struct Provenance {
  std::string source;
  std::size_t row_count = 0;
};

// Immutable collection of instances. (bidder_id, auction_id) pairs are
// unique within a dataset; derived training sets (bootstrap bags, augmented
// pools) are plain instance vectors and do not carry this invariant.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<Instance> instances, Provenance provenance = {})
      : instances_(std::move(instances)), provenance_(std::move(provenance)) {
    std::unordered_set<std::string> seen;
    seen.reserve(instances_.size());
    for (const auto& inst : instances_) {
      if (!seen.insert(key(inst)).second) {
        throw DataError("duplicate (bidder_id, auction_id) pair: (" +
                        inst.bidder_id + ", " + inst.auction_id + ")");
      }
      if (inst.label != Label::Unlabeled) ++labeled_count_;
    }
    if (provenance_.row_count == 0) provenance_.row_count = instances_.size();
  }

  const std::vector<Instance>& instances() const { return instances_; }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  const Provenance& provenance() const { return provenance_; }

  std::size_t labeled_count() const { return labeled_count_; }
  std::size_t unlabeled_count() const { return size() - labeled_count_; }

  std::size_t count(Label l) const {
    return static_cast<std::size_t>(
        std::count_if(instances_.begin(), instances_.end(),
                      [l](const Instance& i) { return i.label == l; }));
  }

  bool operator==(const Dataset& other) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      const Instance &a = instances_[i], &b = other.instances_[i];
      if (a.bidder_id != b.bidder_id || a.auction_id != b.auction_id ||
          a.label != b.label || a.features != b.features)
        return false;
    }
    return true;
  }

 private:
  static std::string key(const Instance& inst) {
    return inst.bidder_id + '\x1f' + inst.auction_id;
  }

  std::vector<Instance> instances_;
  Provenance provenance_;
  std::size_t labeled_count_ = 0;
};

namespace detail {

// Splits one CSV record. Handles double-quoted fields with embedded commas
// and doubled quotes; no multi-line fields.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::optional<Label> parse_label(const std::string& raw) {
  const std::string v = lower(trim(raw));
  if (v.empty() || v == "unlabeled") return Label::Unlabeled;
  if (v == "normal") return Label::Normal;
  if (v == "fraud") return Label::Fraud;
  return std::nullopt;
}

inline std::optional<double> parse_double(const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return out;
}

// Shortest round-trip decimal form, so save/load is lossless.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

// Loads the canonical CSV schema: bidder_id, auction_id, the nine features
// in kFeatureNames order, label. Strict mode requires exactly those twelve
// columns; lenient mode additionally accepts a leading record-index column
// (public variants of the dataset carry one), which is dropped.
inline Dataset load_csv(const std::string& path, SchemaMode mode = SchemaMode::Strict) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": missing header row");
  const auto header = detail::split_csv_line(line);
  constexpr std::size_t kColumns = kNumFeatures + 3;  // ids + features + label

  std::size_t skip_lead = 0;
  if (header.size() == kColumns) {
    skip_lead = 0;
  } else if (mode == SchemaMode::Lenient && header.size() == kColumns + 1) {
    skip_lead = 1;
  } else {
    std::ostringstream msg;
    msg << path << ": expected " << kColumns << " columns"
        << (mode == SchemaMode::Lenient ? " (or 13 with a leading index)" : "")
        << ", found " << header.size();
    throw DataError(msg.str());
  }

  std::vector<Instance> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_csv_line(line);
    if (fields.size() != kColumns + skip_lead) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << kColumns + skip_lead
          << " fields, found " << fields.size();
      throw DataError(msg.str());
    }
    Instance inst;
    inst.bidder_id = detail::trim(fields[skip_lead]);
    inst.auction_id = detail::trim(fields[skip_lead + 1]);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const auto v = detail::parse_double(fields[skip_lead + 2 + f]);
      if (!v || !std::isfinite(*v)) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": non-numeric or non-finite value '"
            << fields[skip_lead + 2 + f] << "' in column " << kFeatureNames[f];
        throw DataError(msg.str());
      }
      inst.features[f] = *v;
    }
    const auto label = detail::parse_label(fields[skip_lead + 2 + kNumFeatures]);
    if (!label) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": unknown label '"
          << fields[skip_lead + 2 + kNumFeatures] << "'";
      throw DataError(msg.str());
    }
    inst.label = *label;
    rows.push_back(std::move(inst));
  }
  const std::size_t n_rows = rows.size();
  return Dataset(std::move(rows), Provenance{path, n_rows});
}

inline void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write data file: " + path);
  out << "bidder_id,auction_id";
  for (const char* name : kFeatureNames) out << ',' << name;
  out << ",label\n";
  for (const auto& inst : ds.instances()) {
    out << inst.bidder_id << ',' << inst.auction_id;
    for (const double v : inst.features) out << ',' << detail::format_double(v);
    out << ',' << to_string(inst.label) << '\n';
  }
}

// Partitions into (labeled, unlabeled), preserving order; the union
// reconstructs the input.
inline std::pair<Dataset, Dataset> split_labeled_unlabeled(const Dataset& ds) {
  std::vector<Instance> labeled, unlabeled;
  for (const auto& inst : ds.instances()) {
    (inst.label == Label::Unlabeled ? unlabeled : labeled).push_back(inst);
  }
  const auto& src = ds.provenance().source;
  return {Dataset(std::move(labeled), {src + "#labeled", 0}),
          Dataset(std::move(unlabeled), {src + "#unlabeled", 0})};
}

// Normal:Fraud ratio of the labeled part.
inline double class_ratio(const Dataset& ds) {
  const std::size_t fraud = ds.count(Label::Fraud);
  if (fraud == 0) throw DataError("class_ratio: dataset has no Fraud instances");
  return static_cast<double>(ds.count(Label::Normal)) / static_cast<double>(fraud);
}

// Optional per-feature min-max scaling for distance-based learners
// (disabled by default; the features are already rate-like).
struct MinMaxScaler {
  FeatureVector lo{};
  FeatureVector hi{};

  static MinMaxScaler fit(const Dataset& ds) {
    MinMaxScaler s;
    s.lo.fill(std::numeric_limits<double>::infinity());
    s.hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& inst : ds.instances()) {
      for (std::size_t f = 0; f < kNumFeatures; ++f) {
        s.lo[f] = std::min(s.lo[f], inst.features[f]);
        s.hi[f] = std::max(s.hi[f], inst.features[f]);
      }
    }
    return s;
  }

  FeatureVector apply(const FeatureVector& x) const {
    FeatureVector out;
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      const double span = hi[f] - lo[f];
      out[f] = span > 0 ? (x[f] - lo[f]) / span : 0.0;
    }
    return out;
  }

  Dataset apply(const Dataset& ds) const {
    std::vector<Instance> rows = ds.instances();
    for (auto& inst : rows) inst.features = apply(inst.features);
    return Dataset(std::move(rows), ds.provenance());
  }
};

}  // namespace cssc
