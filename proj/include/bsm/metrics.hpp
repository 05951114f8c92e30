#pragma once

// Build-metric schema, per-build instances, and file-to-build aggregation.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bsm/errors.hpp"

namespace bsm {

enum class MetricCategory { Complexity, Halstead, Basic, Dependency, Cohesion };

inline const char* to_string(MetricCategory c) {
  switch (c) {
    case MetricCategory::Complexity: return "Complexity";
    case MetricCategory::Halstead: return "Halstead";
    case MetricCategory::Basic: return "Basic";
    case MetricCategory::Dependency: return "Dependency";
    case MetricCategory::Cohesion: return "Cohesion";
  }
  return "Unknown";
}

enum class BuildOutcome : int { Failure = 0, Success = 1 };

inline constexpr std::size_t kClassCount = 2;

inline std::size_t class_index(BuildOutcome outcome) {
  return outcome == BuildOutcome::Success ? 1 : 0;
}

inline BuildOutcome outcome_from_index(std::size_t index) {
  return index == 1 ? BuildOutcome::Success : BuildOutcome::Failure;
}

inline const char* to_string(BuildOutcome outcome) {
  return outcome == BuildOutcome::Success ? "success" : "failure";
}

inline std::optional<BuildOutcome> outcome_from_string(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "success") return BuildOutcome::Success;
  if (lower == "failure") return BuildOutcome::Failure;
  return std::nullopt;
}

// Ordered list of metric names with the category profile of the standard
// 42-metric build schema: 4 complexity, 12 Halstead, 5 dependency,
// 3 cohesion, 18 basic.
class MetricSchema {
 public:
  static constexpr std::size_t kMetricCount = 42;

  MetricSchema(std::vector<std::pair<std::string, MetricCategory>> entries) {
    if (entries.size() != kMetricCount) {
      raise(ErrorKind::SchemaMismatch,
            "schema must define exactly " + std::to_string(kMetricCount) +
                " metrics, got " + std::to_string(entries.size()));
    }
    std::map<MetricCategory, std::size_t> counts;
    names_.reserve(entries.size());
    categories_.reserve(entries.size());
    for (auto& [name, category] : entries) {
      if (index_.count(name) != 0) {
        raise(ErrorKind::SchemaMismatch, "duplicate metric name '" + name + "'");
      }
      index_.emplace(name, names_.size());
      names_.push_back(std::move(name));
      categories_.push_back(category);
      ++counts[category];
    }
    const std::map<MetricCategory, std::size_t> expected = {
        {MetricCategory::Complexity, 4}, {MetricCategory::Halstead, 12},
        {MetricCategory::Dependency, 5}, {MetricCategory::Cohesion, 3},
        {MetricCategory::Basic, 18},
    };
    if (counts != expected) {
      raise(ErrorKind::SchemaMismatch, "category counts do not match the 4/12/5/3/18 profile");
    }
  }

  static const MetricSchema& standard();

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  MetricCategory category(std::size_t i) const { return categories_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) raise(ErrorKind::SchemaMismatch, "unknown metric '" + std::string(name) + "'");
    return *idx;
  }

 private:
  std::vector<std::string> names_;
  std::vector<MetricCategory> categories_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline const MetricSchema& MetricSchema::standard() {
  using C = MetricCategory;
  static const MetricSchema schema([] {
    std::vector<std::pair<std::string, C>> entries = {
        {"Average block depth", C::Complexity},
        {"Weighted methods per class", C::Complexity},
        {"Maintainability index", C::Complexity},
        {"Cyclomatic complexity", C::Complexity},
        {"Number of operands", C::Halstead},
        {"Number of operators", C::Halstead},
        {"Number of unique operands", C::Halstead},
        {"Number of unique operators", C::Halstead},
        {"Number of delivered bugs", C::Halstead},
        {"Difficulty level", C::Halstead},
        {"Effort to implement", C::Halstead},
        {"Time to implement", C::Halstead},
        {"Program length", C::Halstead},
        {"Program level", C::Halstead},
        {"Program vocabulary size", C::Halstead},
        {"Program volume", C::Halstead},
        {"Abstractness", C::Dependency},
        {"Afferent coupling", C::Dependency},
        {"Efferent coupling", C::Dependency},
        {"Instability", C::Dependency},
        {"Normalized Distance", C::Dependency},
        {"Lack of cohesion 1", C::Cohesion},
        {"Lack of cohesion 2", C::Cohesion},
        {"Lack of cohesion 3", C::Cohesion},
        {"Depth of Inheritance", C::Basic},
        {"Number of attributes", C::Basic},
        {"Average number of attributes per class", C::Basic},
        {"Average number of constructors per class", C::Basic},
        {"Average number of comments", C::Basic},
        {"Average lines of code per method", C::Basic},
        {"Average number of methods", C::Basic},
        {"Average number of parameters", C::Basic},
        {"Number of types per package", C::Basic},
        {"Comment/Code Ratio", C::Basic},
        {"Number of constructors", C::Basic},
        {"Number of import statements", C::Basic},
        {"Number of interfaces", C::Basic},
        {"Lines of code", C::Basic},
        {"Number of comments", C::Basic},
        {"Number of methods", C::Basic},
        {"Number of parameters", C::Basic},
        {"Number of lines", C::Basic},
    };
    return entries;
  }());
  return schema;
}

// One build's metric values, positionally aligned with a MetricSchema.
struct MetricVector {
  std::vector<double> values;

  MetricVector() = default;
  explicit MetricVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  void validate(const MetricSchema& schema) const {
    if (values.size() != schema.size()) {
      raise(ErrorKind::SchemaMismatch,
            "metric vector has " + std::to_string(values.size()) + " values, schema expects " +
                std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        raise(ErrorKind::NonNumericValue, "metric '" + schema.name(i) + "' is not finite");
      }
    }
  }

  bool operator==(const MetricVector& other) const = default;
};

struct BuildInstance {
  std::string build_id;
  std::size_t ordinal = 0;
  MetricVector metrics;
  BuildOutcome outcome = BuildOutcome::Failure;
};

enum class AggregationStrategy { Max, Mean, Median, Sum };

inline const char* to_string(AggregationStrategy s) {
  switch (s) {
    case AggregationStrategy::Max: return "max";
    case AggregationStrategy::Mean: return "mean";
    case AggregationStrategy::Median: return "median";
    case AggregationStrategy::Sum: return "sum";
  }
  return "unknown";
}

inline std::optional<AggregationStrategy> aggregation_from_string(std::string_view text) {
  if (text == "max") return AggregationStrategy::Max;
  if (text == "mean") return AggregationStrategy::Mean;
  if (text == "median") return AggregationStrategy::Median;
  if (text == "sum") return AggregationStrategy::Sum;
  return std::nullopt;
}

// Strict numeric parse: whole string must be consumed and the value finite.
inline std::optional<double> parse_finite_double(std::string_view text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

// Builds a validated instance from a parsed field map. The record must carry
// build_id, outcome, one field per schema metric, and either an explicit
// ordinal or a timestamp; timestamp-ordered files get their ordinals assigned
// by the loader, which passes the file position as fallback_ordinal.
inline BuildInstance parse_build_record(const std::map<std::string, std::string>& record,
                                        const MetricSchema& schema,
                                        std::size_t fallback_ordinal = 0) {
  BuildInstance instance;

  auto id_it = record.find("build_id");
  if (id_it == record.end()) raise(ErrorKind::ParseError, "record is missing 'build_id'");
  instance.build_id = id_it->second;

  auto ord_it = record.find("ordinal");
  if (ord_it != record.end()) {
    std::size_t ordinal = 0;
    const std::string& text = ord_it->second;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), ordinal);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      raise(ErrorKind::NonNumericValue,
            "ordinal '" + text + "' is not a nonnegative integer (build " + instance.build_id + ")");
    }
    instance.ordinal = ordinal;
  } else if (record.count("timestamp") != 0) {
    if (!parse_finite_double(record.at("timestamp"))) {
      raise(ErrorKind::NonNumericValue,
            "timestamp '" + record.at("timestamp") + "' is not numeric (build " +
                instance.build_id + ")");
    }
    instance.ordinal = fallback_ordinal;
  } else {
    raise(ErrorKind::ParseError,
          "record needs 'ordinal' or 'timestamp' (build " + instance.build_id + ")");
  }

  auto out_it = record.find("outcome");
  if (out_it == record.end()) {
    raise(ErrorKind::ParseError, "record is missing 'outcome' (build " + instance.build_id + ")");
  }
  auto outcome = outcome_from_string(out_it->second);
  if (!outcome) {
    raise(ErrorKind::UnknownOutcome,
          "outcome '" + out_it->second + "' is neither success nor failure (build " +
              instance.build_id + ")");
  }
  instance.outcome = *outcome;

  instance.metrics.values.reserve(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) {
    const std::string& name = schema.name(i);
    auto it = record.find(name);
    if (it == record.end()) {
      raise(ErrorKind::MissingMetric,
            "metric '" + name + "' absent from record (build " + instance.build_id + ")");
    }
    auto value = parse_finite_double(it->second);
    if (!value) {
      raise(ErrorKind::NonNumericValue,
            "metric '" + name + "' has non-numeric value '" + it->second + "' (build " +
                instance.build_id + ")");
    }
    instance.metrics.values.push_back(*value);
  }
  return instance;
}

// Componentwise aggregate of per-file metric rows into one build-level row.
// Median of an even count is the mean of the two middle values.
inline MetricVector aggregate_file_metrics(const std::vector<MetricVector>& file_rows,
                                           AggregationStrategy strategy) {
  if (file_rows.empty()) raise(ErrorKind::EmptyInput, "no file rows to aggregate");
  const std::size_t width = file_rows.front().size();
  for (const auto& row : file_rows) {
    if (row.size() != width) {
      raise(ErrorKind::SchemaMismatch, "file rows disagree on metric count");
    }
  }

  MetricVector result;
  result.values.resize(width, 0.0);
  std::vector<double> column(file_rows.size());
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t r = 0; r < file_rows.size(); ++r) column[r] = file_rows[r][c];
    switch (strategy) {
      case AggregationStrategy::Max:
        result.values[c] = *std::max_element(column.begin(), column.end());
        break;
      case AggregationStrategy::Sum: {
        double sum = 0.0;
        for (double v : column) sum += v;
        result.values[c] = sum;
        break;
      }
      case AggregationStrategy::Mean: {
        double sum = 0.0;
        for (double v : column) sum += v;
        result.values[c] = sum / static_cast<double>(column.size());
        break;
      }
      case AggregationStrategy::Median: {
        std::sort(column.begin(), column.end());
        const std::size_t n = column.size();
        result.values[c] =
            (n % 2 == 1) ? column[n / 2] : (column[n / 2 - 1] + column[n / 2]) / 2.0;
        break;
      }
    }
  }
  return result;
}

}  // namespace bsm
