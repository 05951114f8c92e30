#pragma once

// Prequential (test-then-train) evaluation and the derived statistics:
// per-class confusion rates, phase descriptives, attribute churn, and
// side-by-side model-shape comparisons.

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bsm/adwin.hpp"
#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"
#include "bsm/stats.hpp"
#include "bsm/stream.hpp"
#include "bsm/tree.hpp"

namespace bsm {

struct PrequentialRecord {
  std::size_t stream_index = 0;     // 1-based position among evaluated instances
  std::size_t instance_number = 0;  // global position including the warmup prefix
  BuildOutcome predicted = BuildOutcome::Failure;
  BuildOutcome actual = BuildOutcome::Failure;
  bool drift = false;
  double cumulative_accuracy = 0.0;
};

struct PrequentialResult {
  std::vector<PrequentialRecord> records;
  std::vector<DriftEvent> drift_events;

  double final_accuracy() const {
    return records.empty() ? 0.0 : records.back().cumulative_accuracy;
  }
};

namespace detail {

template <typename Learner>
BuildOutcome predict_label(const Learner& learner, const MetricVector& metrics) {
  auto p = learner.predict(metrics);
  if constexpr (requires { p.first; }) {
    return p.first;
  } else {
    return p;
  }
}

}  // namespace detail

// Each pool instance is classified before it trains the learner; the 0/1
// error feeds the detector, and a detection resets the statistics of the leaf
// that absorbed the triggering instance before learning resumes.
template <typename Learner, typename Detector>
PrequentialResult prequential_run(Learner& learner, Detector& detector,
                                  std::span<const BuildInstance> warmup,
                                  std::span<const BuildInstance> pool) {
  for (const BuildInstance& instance : warmup) learner.learn_one(instance);

  PrequentialResult result;
  result.records.reserve(pool.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const BuildInstance& instance = pool[i];
    PrequentialRecord record;
    record.stream_index = i + 1;
    record.instance_number = warmup.size() + i + 1;
    record.predicted = detail::predict_label(learner, instance.metrics);
    record.actual = instance.outcome;
    if (record.predicted == record.actual) ++correct;

    const auto event = detector.add(record.predicted == record.actual ? 0.0 : 1.0);
    if (event) {
      record.drift = true;
      result.drift_events.push_back(*event);
      if constexpr (requires { learner.prune_subtree(learner.path_to_leaf(instance.metrics)); }) {
        learner.prune_subtree(learner.path_to_leaf(instance.metrics));
      }
    }

    learner.learn_one(instance);
    record.cumulative_accuracy = static_cast<double>(correct) / static_cast<double>(i + 1);
    result.records.push_back(record);
  }
  return result;
}

struct ConfusionRates {
  std::size_t considered = 0;
  std::array<std::array<std::size_t, kClassCount>, kClassCount> counts{};  // [actual][predicted]
  std::optional<double> tp_success;
  std::optional<double> fp_success;
  std::optional<double> tp_failure;
  std::optional<double> fp_failure;
};

// TP(c) = P(predicted c | actual c); FP(c) = P(predicted c | actual != c).
// Rates whose conditioning class is absent stay unset rather than zero.
inline ConfusionRates confusion_rates(std::span<const PrequentialRecord> records,
                                      std::optional<std::size_t> trailing = std::nullopt) {
  std::span<const PrequentialRecord> slice = records;
  if (trailing && *trailing < records.size()) {
    slice = records.subspan(records.size() - *trailing);
  }
  if (slice.empty()) raise(ErrorKind::UndefinedRate, "no records to compute rates from");

  ConfusionRates rates;
  rates.considered = slice.size();
  for (const PrequentialRecord& r : slice) {
    ++rates.counts[class_index(r.actual)][class_index(r.predicted)];
  }
  const double actual_failed = static_cast<double>(rates.counts[0][0] + rates.counts[0][1]);
  const double actual_success = static_cast<double>(rates.counts[1][0] + rates.counts[1][1]);
  if (actual_success > 0.0) {
    rates.tp_success = rates.counts[1][1] / actual_success;
    rates.fp_failure = rates.counts[1][0] / actual_success;
  }
  if (actual_failed > 0.0) {
    rates.tp_failure = rates.counts[0][0] / actual_failed;
    rates.fp_success = rates.counts[0][1] / actual_failed;
  }
  return rates;
}

struct RatesPoint {
  std::size_t stream_index = 0;
  std::optional<double> tp_success;
  std::optional<double> fp_success;
  std::optional<double> tp_failure;
  std::optional<double> fp_failure;
};

inline std::vector<RatesPoint> rates_series(std::span<const PrequentialRecord> records) {
  std::vector<RatesPoint> series;
  series.reserve(records.size());
  std::array<std::array<std::size_t, kClassCount>, kClassCount> counts{};
  for (const PrequentialRecord& r : records) {
    ++counts[class_index(r.actual)][class_index(r.predicted)];
    RatesPoint point;
    point.stream_index = r.stream_index;
    const double actual_failed = static_cast<double>(counts[0][0] + counts[0][1]);
    const double actual_success = static_cast<double>(counts[1][0] + counts[1][1]);
    if (actual_success > 0.0) {
      point.tp_success = counts[1][1] / actual_success;
      point.fp_failure = counts[1][0] / actual_success;
    }
    if (actual_failed > 0.0) {
      point.tp_failure = counts[0][0] / actual_failed;
      point.fp_success = counts[0][1] / actual_failed;
    }
    series.push_back(point);
  }
  return series;
}

struct Phase {
  std::string label;
  std::size_t start = 0;  // instance numbers, inclusive bounds
  std::size_t end = 0;

  bool operator==(const Phase&) const = default;
};

struct PhaseSpec {
  std::vector<Phase> phases;

  // Boundaries are instance numbers on the same axis as the warmup count;
  // the first phase starts right after the warmup and a final phase picks up
  // whatever the last boundary leaves before the stream end.
  static PhaseSpec from_boundaries(std::size_t warmup, std::span<const std::size_t> boundaries,
                                   std::size_t total) {
    if (total <= warmup) raise(ErrorKind::ConfigError, "stream ends inside the warmup prefix");
    PhaseSpec spec;
    std::size_t previous = warmup;
    for (std::size_t boundary : boundaries) {
      if (boundary <= previous) {
        raise(ErrorKind::ConfigError,
              "phase boundary " + std::to_string(boundary) + " does not advance past " +
                  std::to_string(previous));
      }
      if (previous >= total) break;
      Phase phase;
      phase.label = "Phase " + std::to_string(spec.phases.size() + 1);
      phase.start = previous + 1;
      phase.end = std::min(boundary, total);
      spec.phases.push_back(phase);
      previous = boundary;
    }
    if (previous < total) {
      Phase phase;
      phase.label = "Phase " + std::to_string(spec.phases.size() + 1);
      phase.start = previous + 1;
      phase.end = total;
      spec.phases.push_back(phase);
    }
    return spec;
  }
};

struct PhaseStat {
  Phase phase;
  Descriptives stats;
};

struct PhaseReport {
  std::vector<PhaseStat> phases;
};

inline PhaseReport phase_stats(std::span<const std::pair<std::size_t, double>> series,
                               const PhaseSpec& spec) {
  PhaseReport report;
  for (const Phase& phase : spec.phases) {
    std::vector<double> values;
    for (const auto& [instance_number, value] : series) {
      if (instance_number >= phase.start && instance_number <= phase.end) {
        values.push_back(value);
      }
    }
    if (values.empty()) {
      raise(ErrorKind::EmptyPhase, phase.label + " (" + std::to_string(phase.start) + ".." +
                                       std::to_string(phase.end) + ") has no samples");
    }
    report.phases.push_back({phase, describe(values)});
  }
  return report;
}

struct ChurnResult {
  std::size_t added = 0;    // N_A
  std::size_t deleted = 0;  // N_D
  std::size_t total = 0;    // N_T, attributes in the current tree
  double churn_percent = 0.0;

  bool operator==(const ChurnResult&) const = default;
};

inline ChurnResult attribute_churn(const std::set<std::string>& previous,
                                   const std::set<std::string>& current) {
  if (current.empty()) raise(ErrorKind::EmptyCurrentTree, "current tree has no split attributes");
  ChurnResult result;
  for (const std::string& attr : current) {
    if (!previous.contains(attr)) ++result.added;
  }
  for (const std::string& attr : previous) {
    if (!current.contains(attr)) ++result.deleted;
  }
  result.total = current.size();
  result.churn_percent = 100.0 * static_cast<double>(result.added + result.deleted) /
                         static_cast<double>(result.total);
  return result;
}

struct ComparisonRow {
  std::string label;
  std::size_t depth = 0;
  std::size_t test_count = 0;
  std::size_t leaf_count = 0;
  std::set<std::string> attribute_set;
  std::optional<ChurnResult> churn;  // unset for the first snapshot

  bool operator==(const ComparisonRow&) const = default;
};

struct ModelComparison {
  std::vector<ComparisonRow> rows;

  bool operator==(const ModelComparison&) const = default;
};

inline ModelComparison compare_models(
    std::span<const std::pair<std::string, TreeShape>> snapshots) {
  if (snapshots.empty()) raise(ErrorKind::InsufficientData, "no snapshots to compare");
  ModelComparison comparison;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& [label, shape] = snapshots[i];
    ComparisonRow row;
    row.label = label;
    row.depth = shape.depth;
    row.test_count = shape.test_count;
    row.leaf_count = shape.leaf_count;
    row.attribute_set = shape.attribute_set;
    if (i > 0 && !shape.attribute_set.empty()) {
      row.churn = attribute_churn(snapshots[i - 1].second.attribute_set, shape.attribute_set);
    }
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

}  // namespace bsm
