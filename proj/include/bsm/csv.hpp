#pragma once

// Canonical dataset CSV: header `build_id,ordinal,outcome` (or `timestamp` in
// place of `ordinal`) followed by the 42 metric columns in schema order.
// Repeated build_id rows are per-file measurements and aggregate into one
// build instance. All writes go through a temp file and a rename.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"
#include "bsm/stream.hpp"

namespace bsm {

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::InvalidPath, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) raise(ErrorKind::InvalidPath, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::FileNotFound, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

inline std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

inline std::string dataset_header(const MetricSchema& schema) {
  std::string header = "build_id,ordinal,outcome";
  for (const std::string& name : schema.names()) {
    header += ',';
    header += name;
  }
  return header;
}

inline std::string dataset_to_csv(const BuildDataset& dataset, const MetricSchema& schema) {
  std::string out = dataset_header(schema);
  out += '\n';
  for (const BuildInstance& instance : dataset.instances) {
    out += instance.build_id;
    out += ',';
    out += std::to_string(instance.ordinal);
    out += ',';
    out += to_string(instance.outcome);
    for (double value : instance.metrics.values) {
      out += ',';
      out += format_double(value);
    }
    out += '\n';
  }
  return out;
}

inline void write_dataset(const std::filesystem::path& path, const BuildDataset& dataset,
                          const MetricSchema& schema) {
  write_file_atomic(path, dataset_to_csv(dataset, schema));
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

[[noreturn]] inline void parse_fail(std::size_t line_number, const std::string& what) {
  raise(ErrorKind::ParseError, "line " + std::to_string(line_number) + ": " + what);
}

struct RawRow {
  std::string build_id;
  std::size_t ordinal = 0;
  double timestamp = 0.0;
  std::size_t file_order = 0;
  BuildOutcome outcome = BuildOutcome::Failure;
  MetricVector metrics;
};

}  // namespace detail

struct LoadResult {
  BuildDataset dataset;
  std::size_t source_rows = 0;
  bool timestamps = false;       // ordinals were assigned from timestamp order
  bool aggregated_rows = false;  // at least one build spanned multiple rows
};

inline LoadResult load_dataset(const std::filesystem::path& path, const MetricSchema& schema,
                               AggregationStrategy strategy = AggregationStrategy::Mean) {
  if (!std::filesystem::exists(path)) {
    raise(ErrorKind::FileNotFound, "input file " + path.string() + " does not exist");
  }
  const std::string content = read_file(path);

  std::vector<std::string_view> lines;
  {
    std::string_view rest = content;
    while (!rest.empty()) {
      std::size_t eol = rest.find('\n');
      std::string_view line = eol == std::string_view::npos ? rest : rest.substr(0, eol);
      if (line.ends_with('\r')) line.remove_suffix(1);
      lines.push_back(line);
      if (eol == std::string_view::npos) break;
      rest = rest.substr(eol + 1);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) raise(ErrorKind::EmptyInput, "input file " + path.string() + " is empty");

  const std::vector<std::string_view> header = detail::split_fields(lines[0]);
  const std::size_t expected_fields = 3 + schema.size();
  if (header.size() != expected_fields) {
    detail::parse_fail(1, "expected " + std::to_string(expected_fields) + " header fields, got " +
                              std::to_string(header.size()));
  }
  if (header[0] != "build_id") detail::parse_fail(1, "first column must be build_id");
  const bool timestamps = header[1] == "timestamp";
  if (!timestamps && header[1] != "ordinal") {
    detail::parse_fail(1, "second column must be ordinal or timestamp");
  }
  if (header[2] != "outcome") detail::parse_fail(1, "third column must be outcome");
  for (std::size_t a = 0; a < schema.size(); ++a) {
    if (header[3 + a] != schema.name(a)) {
      detail::parse_fail(1, "metric column " + std::to_string(a + 1) + " must be \"" +
                                schema.name(a) + "\", got \"" + std::string(header[3 + a]) +
                                "\"");
    }
  }

  std::vector<detail::RawRow> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_number = li + 1;
    if (lines[li].empty()) continue;
    const std::vector<std::string_view> fields = detail::split_fields(lines[li]);
    if (fields.size() != expected_fields) {
      detail::parse_fail(line_number, "expected " + std::to_string(expected_fields) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    detail::RawRow row;
    row.build_id = std::string(fields[0]);
    if (row.build_id.empty()) detail::parse_fail(line_number, "empty build_id");
    row.file_order = li;
    if (timestamps) {
      const auto ts = parse_finite_double(fields[1]);
      if (!ts) {
        detail::parse_fail(line_number,
                           "timestamp \"" + std::string(fields[1]) + "\" is not numeric");
      }
      row.timestamp = *ts;
    } else {
      const auto text = fields[1];
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), row.ordinal);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        detail::parse_fail(line_number, "ordinal \"" + std::string(text) +
                                            "\" is not a nonnegative integer");
      }
    }
    const auto outcome = outcome_from_string(fields[2]);
    if (!outcome) {
      detail::parse_fail(line_number, "outcome \"" + std::string(fields[2]) +
                                          "\" is neither success nor failure");
    }
    row.outcome = *outcome;
    row.metrics.values.reserve(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto value = parse_finite_double(fields[3 + a]);
      if (!value) {
        detail::parse_fail(line_number, "metric \"" + schema.name(a) + "\" value \"" +
                                            std::string(fields[3 + a]) + "\" is not numeric");
      }
      row.metrics.values.push_back(*value);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(ErrorKind::EmptyInput, "input file has a header but no data rows");

  if (timestamps) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const detail::RawRow& a, const detail::RawRow& b) {
                       return a.timestamp < b.timestamp;
                     });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].ordinal = i;
  }

  // Group per-file rows of the same build into one instance.
  std::map<std::string, std::vector<std::size_t>> by_build;
  std::vector<std::string> build_order;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, inserted] = by_build.try_emplace(rows[i].build_id);
    if (inserted) build_order.push_back(rows[i].build_id);
    it->second.push_back(i);
  }

  LoadResult result;
  result.source_rows = rows.size();
  result.timestamps = timestamps;
  std::vector<BuildInstance> instances;
  instances.reserve(build_order.size());
  for (const std::string& build_id : build_order) {
    const std::vector<std::size_t>& members = by_build[build_id];
    BuildInstance instance;
    instance.build_id = build_id;
    instance.ordinal = rows[members.front()].ordinal;
    instance.outcome = rows[members.front()].outcome;
    if (members.size() == 1) {
      instance.metrics = std::move(rows[members.front()].metrics);
    } else {
      result.aggregated_rows = true;
      std::vector<MetricVector> group;
      group.reserve(members.size());
      for (std::size_t i : members) {
        if (rows[i].outcome != instance.outcome) {
          raise(ErrorKind::ParseError, "build " + build_id + " has conflicting outcomes");
        }
        instance.ordinal = std::min(instance.ordinal, rows[i].ordinal);
        group.push_back(std::move(rows[i].metrics));
      }
      instance.metrics = aggregate_file_metrics(group, strategy);
    }
    instance.metrics.validate(schema);
    instances.push_back(std::move(instance));
  }
  result.dataset = BuildDataset::from_instances(std::move(instances));
  return result;
}

}  // namespace bsm
