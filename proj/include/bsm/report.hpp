#pragma once

// Run engine behind the command-line surface: generation, chronological
// evaluation, the sequence-ordering experiment, and the batch-vs-stream
// comparison. Each run writes one JSON report plus plot-ready CSVs; every
// file is assembled in memory and written through a rename so failed runs
// leave nothing behind.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bsm/adwin.hpp"
#include "bsm/batch_tree.hpp"
#include "bsm/csv.hpp"
#include "bsm/errors.hpp"
#include "bsm/evaluation.hpp"
#include "bsm/hoeffding_tree.hpp"
#include "bsm/metrics.hpp"
#include "bsm/stats.hpp"
#include "bsm/stream.hpp"
#include "bsm/synth.hpp"

namespace bsm {

enum class Command { Generate, Evaluate, Sequences, Compare };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Generate: return "generate";
    case Command::Evaluate: return "evaluate";
    case Command::Sequences: return "sequences";
    case Command::Compare: return "compare";
  }
  return "unknown";
}

struct RunConfig {
  Command command = Command::Evaluate;
  std::filesystem::path input;
  std::filesystem::path output = "out";
  double delta = 1e-7;
  std::uint64_t grace = 25;
  double tau = 0.05;
  double drift_confidence = 0.99;
  std::size_t warmup = 20;
  std::vector<std::size_t> phases = {40, 80, 180};
  std::size_t sequences = 10;
  AggregationStrategy aggregate = AggregationStrategy::Mean;
  std::uint64_t seed = 1;
  bool seed_set = false;  // an explicit seed overrides a script file's seed
  std::vector<std::size_t> checkpoints = {160, 180};
  std::size_t count = 198;             // generate: stream length
  std::filesystem::path script;        // generate: optional script document
  double noise = 0.0;                  // generate: label noise for the bundled script
  std::size_t drift_at = 0;            // generate: 0 means no scripted drift
  std::size_t folds = 10;              // compare: cross-validation folds

  TreeParams tree_params() const { return {delta, 1.0, grace, tau}; }
};

inline constexpr std::size_t kSequenceTail = 21;

namespace detail {

inline nlohmann::ordered_json config_echo(const RunConfig& config) {
  nlohmann::ordered_json echo;
  echo["command"] = to_string(config.command);
  echo["input"] = config.input.string();
  echo["output"] = config.output.string();
  echo["delta"] = config.delta;
  echo["grace"] = config.grace;
  echo["tau"] = config.tau;
  echo["drift_confidence"] = config.drift_confidence;
  echo["warmup"] = config.warmup;
  echo["phases"] = config.phases;
  echo["sequences"] = config.sequences;
  echo["aggregate"] = to_string(config.aggregate);
  echo["seed"] = config.seed;
  echo["checkpoints"] = config.checkpoints;
  echo["count"] = config.count;
  echo["script"] = config.script.string();
  echo["noise"] = config.noise;
  echo["drift_at"] = config.drift_at;
  echo["folds"] = config.folds;
  return echo;
}

inline nlohmann::ordered_json descriptives_json(const Descriptives& d) {
  nlohmann::ordered_json doc;
  doc["count"] = d.count;
  doc["mean"] = d.mean;
  doc["stddev"] = d.stddev;
  doc["std_error"] = d.std_error;
  doc["ci_lower"] = d.ci_lower;
  doc["ci_upper"] = d.ci_upper;
  doc["degenerate"] = d.degenerate;
  return doc;
}

inline nlohmann::ordered_json rates_json(const ConfusionRates& rates) {
  nlohmann::ordered_json doc;
  doc["considered"] = rates.considered;
  const auto put = [&doc](const char* key, const std::optional<double>& value) {
    if (value) {
      doc[key] = *value;
    } else {
      doc[key] = nullptr;
    }
  };
  put("tp_success", rates.tp_success);
  put("fp_success", rates.fp_success);
  put("tp_failure", rates.tp_failure);
  put("fp_failure", rates.fp_failure);
  return doc;
}

inline nlohmann::ordered_json shape_json(const TreeShape& shape) {
  nlohmann::ordered_json doc;
  doc["depth"] = shape.depth;
  doc["tests"] = shape.test_count;
  doc["leaves"] = shape.leaf_count;
  doc["attributes"] = std::vector<std::string>(shape.attribute_set.begin(),
                                               shape.attribute_set.end());
  return doc;
}

inline nlohmann::ordered_json anova_json(const AnovaResult& anova) {
  nlohmann::ordered_json doc;
  doc["f"] = anova.f;
  doc["df_between"] = anova.df_between;
  doc["df_within"] = anova.df_within;
  doc["p_value"] = anova.p_value;
  doc["p_display"] = format_p_value(anova.p_value);
  doc["ms_between"] = anova.ms_between;
  doc["ms_within"] = anova.ms_within;
  return doc;
}

inline nlohmann::ordered_json contrast_json(const ContrastResult& c, const std::string& label) {
  nlohmann::ordered_json doc;
  doc["label"] = label;
  doc["mean_difference"] = c.mean_difference;
  doc["t"] = c.t;
  doc["df"] = c.df;
  doc["p_value"] = c.p_value;
  doc["p_display"] = format_p_value(c.p_value);
  return doc;
}

inline nlohmann::ordered_json comparison_to_json(const ModelComparison& comparison) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ComparisonRow& row : comparison.rows) {
    nlohmann::ordered_json doc;
    doc["label"] = row.label;
    doc["depth"] = row.depth;
    doc["tests"] = row.test_count;
    doc["leaves"] = row.leaf_count;
    doc["attributes"] = std::vector<std::string>(row.attribute_set.begin(),
                                                 row.attribute_set.end());
    if (row.churn) {
      doc["churn"] = {{"added", row.churn->added},
                      {"deleted", row.churn->deleted},
                      {"total", row.churn->total},
                      {"percent", row.churn->churn_percent}};
    } else {
      doc["churn"] = nullptr;
    }
    rows.push_back(std::move(doc));
  }
  return rows;
}

inline ModelComparison comparison_from_json(const nlohmann::json& rows) {
  ModelComparison comparison;
  for (const auto& doc : rows) {
    ComparisonRow row;
    row.label = doc.at("label").get<std::string>();
    row.depth = doc.at("depth").get<std::size_t>();
    row.test_count = doc.at("tests").get<std::size_t>();
    row.leaf_count = doc.at("leaves").get<std::size_t>();
    for (const auto& attr : doc.at("attributes")) {
      row.attribute_set.insert(attr.get<std::string>());
    }
    if (!doc.at("churn").is_null()) {
      ChurnResult churn;
      churn.added = doc.at("churn").at("added").get<std::size_t>();
      churn.deleted = doc.at("churn").at("deleted").get<std::size_t>();
      churn.total = doc.at("churn").at("total").get<std::size_t>();
      churn.churn_percent = doc.at("churn").at("percent").get<double>();
      row.churn = churn;
    }
    comparison.rows.push_back(std::move(row));
  }
  return comparison;
}

inline std::string csv_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

inline void write_json_report(const std::filesystem::path& dir,
                              const nlohmann::ordered_json& doc) {
  write_file_atomic(dir / "report.json", doc.dump(2) + "\n");
}

// Phase slices of the evaluated records; phases are instance-number ranges
// and records are contiguous in instance number.
inline std::span<const PrequentialRecord> phase_slice(std::span<const PrequentialRecord> records,
                                                      const Phase& phase, std::size_t warmup) {
  const std::size_t begin = phase.start - warmup - 1;
  const std::size_t count = phase.end - phase.start + 1;
  return records.subspan(begin, count);
}

}  // namespace detail

struct EvaluateArtifacts {
  LoadResult load;
  PrequentialResult run;
  PhaseSpec phase_spec;
  PhaseReport phase_report;
  ConfusionRates overall_rates;
  std::vector<ConfusionRates> phase_rates;
  TreeShape final_shape;
  std::string final_dump;
};

inline EvaluateArtifacts run_evaluate_pipeline(const RunConfig& config,
                                               const MetricSchema& schema) {
  EvaluateArtifacts artifacts;
  artifacts.load = load_dataset(config.input, schema, config.aggregate);
  const BuildDataset& dataset = artifacts.load.dataset;
  const ReplaySplit split = replay_chronological(dataset, config.warmup);

  HoeffdingTree tree(schema, config.tree_params());
  Adwin detector(config.drift_confidence);
  artifacts.run = prequential_run(tree, detector, split.warmup, split.pool);

  artifacts.phase_spec =
      PhaseSpec::from_boundaries(config.warmup, config.phases, dataset.size());
  std::vector<std::pair<std::size_t, double>> series;
  series.reserve(artifacts.run.records.size());
  for (const PrequentialRecord& r : artifacts.run.records) {
    series.emplace_back(r.instance_number, r.cumulative_accuracy);
  }
  artifacts.phase_report = phase_stats(series, artifacts.phase_spec);
  artifacts.overall_rates = confusion_rates(artifacts.run.records);
  for (const Phase& phase : artifacts.phase_spec.phases) {
    artifacts.phase_rates.push_back(
        confusion_rates(detail::phase_slice(artifacts.run.records, phase, config.warmup)));
  }
  artifacts.final_shape = tree.shape();
  artifacts.final_dump = tree.dump();
  return artifacts;
}

inline void execute_evaluate(const RunConfig& config) {
  const MetricSchema& schema = MetricSchema::standard();
  const EvaluateArtifacts a = run_evaluate_pipeline(config, schema);

  nlohmann::ordered_json doc;
  doc["command"] = "evaluate";
  doc["config"] = detail::config_echo(config);
  doc["dataset"] = {{"instances", a.load.dataset.size()},
                    {"source_rows", a.load.source_rows},
                    {"timestamps", a.load.timestamps},
                    {"aggregated_rows", a.load.aggregated_rows}};
  doc["stream"] = {{"warmup", config.warmup},
                   {"evaluated", a.run.records.size()},
                   {"final_accuracy", a.run.final_accuracy()},
                   {"drift_count", a.run.drift_events.size()}};

  doc["phases"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.phase_report.phases.size(); ++i) {
    const PhaseStat& stat = a.phase_report.phases[i];
    nlohmann::ordered_json phase;
    phase["label"] = stat.phase.label;
    phase["start"] = stat.phase.start;
    phase["end"] = stat.phase.end;
    phase["accuracy"] = detail::descriptives_json(stat.stats);
    phase["rates"] = detail::rates_json(a.phase_rates[i]);
    doc["phases"].push_back(std::move(phase));
  }
  doc["rates"] = detail::rates_json(a.overall_rates);

  doc["drift_events"] = nlohmann::ordered_json::array();
  for (const DriftEvent& event : a.run.drift_events) {
    doc["drift_events"].push_back({{"stream_index", event.stream_index},
                                   {"instance_number", config.warmup + event.stream_index},
                                   {"discarded_count", event.discarded_count},
                                   {"discarded_mean", event.discarded_mean},
                                   {"retained_mean", event.retained_mean}});
  }
  doc["model"] = {{"shape", detail::shape_json(a.final_shape)},
                  {"dump", a.final_dump}};

  std::string accuracy_csv = "stream_index,instance_number,predicted,actual,drift,"
                             "cumulative_accuracy\n";
  for (const PrequentialRecord& r : a.run.records) {
    accuracy_csv += std::to_string(r.stream_index) + ',' + std::to_string(r.instance_number) +
                    ',' + to_string(r.predicted) + ',' + to_string(r.actual) + ',' +
                    (r.drift ? "1" : "0") + ',' + format_double(r.cumulative_accuracy) + '\n';
  }

  std::string rates_csv = "stream_index,tp_success,fp_success,tp_failure,fp_failure\n";
  for (const RatesPoint& point : rates_series(a.run.records)) {
    rates_csv += std::to_string(point.stream_index) + ',' + detail::csv_cell(point.tp_success) +
                 ',' + detail::csv_cell(point.fp_success) + ',' +
                 detail::csv_cell(point.tp_failure) + ',' + detail::csv_cell(point.fp_failure) +
                 '\n';
  }

  std::string drifts_csv = "stream_index,cumulative_drifts\n";
  {
    std::size_t drifts = 0;
    std::size_t next_event = 0;
    for (const PrequentialRecord& r : a.run.records) {
      if (next_event < a.run.drift_events.size() &&
          a.run.drift_events[next_event].stream_index == r.stream_index) {
        ++drifts;
        ++next_event;
      }
      drifts_csv += std::to_string(r.stream_index) + ',' + std::to_string(drifts) + '\n';
    }
  }

  detail::write_json_report(config.output, doc);
  write_file_atomic(config.output / "accuracy.csv", accuracy_csv);
  write_file_atomic(config.output / "rates.csv", rates_csv);
  write_file_atomic(config.output / "drifts.csv", drifts_csv);
}

struct SequenceOutcome {
  int sequence_id = 0;
  std::vector<double> tail_accuracy;  // cumulative accuracy over the final stretch
  double final_accuracy = 0.0;
  std::size_t drift_count = 0;
  Descriptives stats;
};

inline std::vector<SequenceOutcome> run_sequence_pipelines(const RunConfig& config,
                                                           const MetricSchema& schema,
                                                           const SequencePlan& plan) {
  std::vector<std::future<SequenceOutcome>> futures;
  futures.reserve(plan.sequences.size());
  for (const StreamSequence& sequence : plan.sequences) {
    futures.push_back(std::async(std::launch::async, [&config, &schema, &plan, &sequence] {
      HoeffdingTree tree(schema, config.tree_params());
      Adwin detector(config.drift_confidence);
      const std::vector<BuildInstance> stream = plan.materialize(sequence);
      const PrequentialResult result = prequential_run(
          tree, detector, std::span<const BuildInstance>(plan.warmup), stream);

      SequenceOutcome outcome;
      outcome.sequence_id = sequence.sequence_id;
      const std::size_t tail = std::min(kSequenceTail, result.records.size());
      for (std::size_t i = result.records.size() - tail; i < result.records.size(); ++i) {
        outcome.tail_accuracy.push_back(result.records[i].cumulative_accuracy);
      }
      outcome.final_accuracy = result.final_accuracy();
      outcome.drift_count = result.drift_events.size();
      outcome.stats = describe(outcome.tail_accuracy);
      return outcome;
    }));
  }
  std::vector<SequenceOutcome> outcomes;
  outcomes.reserve(futures.size());
  for (auto& future : futures) outcomes.push_back(future.get());
  return outcomes;
}

inline void execute_sequences(const RunConfig& config) {
  const MetricSchema& schema = MetricSchema::standard();
  const LoadResult load = load_dataset(config.input, schema, config.aggregate);
  const SequencePlan plan = make_sequences(load.dataset, config.sequences, config.warmup);
  const std::vector<SequenceOutcome> outcomes = run_sequence_pipelines(config, schema, plan);

  nlohmann::ordered_json doc;
  doc["command"] = "sequences";
  doc["config"] = detail::config_echo(config);
  doc["dataset"] = {{"instances", load.dataset.size()},
                    {"pool", plan.pool.size()},
                    {"tail", std::min(kSequenceTail, plan.pool.size())}};

  doc["sequences"] = nlohmann::ordered_json::array();
  std::vector<std::vector<double>> groups;
  for (const SequenceOutcome& outcome : outcomes) {
    nlohmann::ordered_json seq;
    seq["sequence"] = "S" + std::to_string(outcome.sequence_id);
    seq["accuracy"] = detail::descriptives_json(outcome.stats);
    seq["final_accuracy"] = outcome.final_accuracy;
    seq["drift_count"] = outcome.drift_count;
    doc["sequences"].push_back(std::move(seq));
    groups.push_back(outcome.tail_accuracy);
  }

  doc["contrasts"] = nlohmann::ordered_json::array();
  try {
    const AnovaResult anova = one_way_anova(groups);
    doc["anova"] = detail::anova_json(anova);
    const std::size_t last = groups.size() - 1;
    if (groups.size() >= 2) {
      doc["contrasts"].push_back(detail::contrast_json(
          contrast(anova, last, last - 1),
          "S" + std::to_string(last + 1) + " vs S" + std::to_string(last)));
    }
    if (groups.size() >= 3) {
      doc["contrasts"].push_back(detail::contrast_json(
          contrast(anova, last, 0), "S" + std::to_string(last + 1) + " vs S1"));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateVariance) throw;
    doc["anova"] = nullptr;
    doc["anova_note"] = "within-group variance is zero; F is undefined";
  }

  std::string csv =
      "sequence,count,mean,stddev,std_error,ci_lower,ci_upper,final_accuracy,drift_count\n";
  for (const SequenceOutcome& outcome : outcomes) {
    const Descriptives& d = outcome.stats;
    csv += "S" + std::to_string(outcome.sequence_id) + ',' + std::to_string(d.count) + ',' +
           format_double(d.mean) + ',' + format_double(d.stddev) + ',' +
           format_double(d.std_error) + ',' + format_double(d.ci_lower) + ',' +
           format_double(d.ci_upper) + ',' + format_double(outcome.final_accuracy) + ',' +
           std::to_string(outcome.drift_count) + '\n';
  }

  detail::write_json_report(config.output, doc);
  write_file_atomic(config.output / "sequences.csv", csv);
}

struct CheckpointSnapshot {
  std::size_t checkpoint = 0;
  TreeShape stream_shape;
  std::string stream_dump;
  double stream_accuracy = 0.0;  // cumulative prequential accuracy at the checkpoint
  std::size_t drift_count = 0;
  TreeShape batch_shape;
  std::string batch_dump;
  CrossValidationResult batch_cv;
};

inline std::vector<CheckpointSnapshot> run_compare_pipeline(const RunConfig& config,
                                                            const MetricSchema& schema,
                                                            const BuildDataset& dataset) {
  std::vector<std::size_t> checkpoints;
  for (std::size_t c : config.checkpoints) {
    if (c > config.warmup && c <= dataset.size()) checkpoints.push_back(c);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.empty()) {
    raise(ErrorKind::ConfigError, "no checkpoint falls inside the dataset after the warmup");
  }

  const ReplaySplit split = replay_chronological(dataset, config.warmup);
  HoeffdingTree tree(schema, config.tree_params());
  Adwin detector(config.drift_confidence);

  std::vector<CheckpointSnapshot> snapshots;
  std::span<const BuildInstance> warmup_span(split.warmup);
  std::span<const BuildInstance> pool(split.pool);
  std::size_t consumed = 0;  // pool instances already replayed
  std::size_t correct = 0;
  std::size_t drifts = 0;
  for (std::size_t checkpoint : checkpoints) {
    const std::size_t pool_target = checkpoint - config.warmup;
    const PrequentialResult part = prequential_run(
        tree, detector, warmup_span, pool.subspan(consumed, pool_target - consumed));
    warmup_span = {};
    for (const PrequentialRecord& r : part.records) {
      if (r.predicted == r.actual) ++correct;
    }
    drifts += part.drift_events.size();
    consumed = pool_target;

    CheckpointSnapshot snapshot;
    snapshot.checkpoint = checkpoint;
    snapshot.stream_shape = tree.shape();
    snapshot.stream_dump = tree.dump();
    snapshot.stream_accuracy = static_cast<double>(correct) / static_cast<double>(consumed);
    snapshot.drift_count = drifts;

    BuildDataset prefix;
    prefix.instances.assign(dataset.instances.begin(),
                            dataset.instances.begin() + static_cast<std::ptrdiff_t>(checkpoint));
    const BatchTreeModel batch = fit_batch_tree(prefix, schema);
    snapshot.batch_shape = batch.shape();
    snapshot.batch_dump = batch.dump();
    snapshot.batch_cv = cross_validate(prefix, schema, config.folds, config.seed);
    snapshots.push_back(std::move(snapshot));
  }
  return snapshots;
}

inline void execute_compare(const RunConfig& config) {
  const MetricSchema& schema = MetricSchema::standard();
  const LoadResult load = load_dataset(config.input, schema, config.aggregate);
  const std::vector<CheckpointSnapshot> snapshots =
      run_compare_pipeline(config, schema, load.dataset);

  std::vector<std::pair<std::string, TreeShape>> stream_snaps;
  std::vector<std::pair<std::string, TreeShape>> batch_snaps;
  for (const CheckpointSnapshot& s : snapshots) {
    const std::string suffix = " (" + std::to_string(s.checkpoint) + " builds)";
    stream_snaps.emplace_back("Hoeffding tree" + suffix, s.stream_shape);
    batch_snaps.emplace_back("Batch tree" + suffix, s.batch_shape);
  }
  const ModelComparison stream_cmp = compare_models(stream_snaps);
  const ModelComparison batch_cmp = compare_models(batch_snaps);

  nlohmann::ordered_json doc;
  doc["command"] = "compare";
  doc["config"] = detail::config_echo(config);
  doc["dataset"] = {{"instances", load.dataset.size()}};
  doc["stream_models"] = detail::comparison_to_json(stream_cmp);
  doc["batch_models"] = detail::comparison_to_json(batch_cmp);

  doc["checkpoints"] = nlohmann::ordered_json::array();
  for (const CheckpointSnapshot& s : snapshots) {
    nlohmann::ordered_json entry;
    entry["checkpoint"] = s.checkpoint;
    entry["stream"] = {{"accuracy", s.stream_accuracy},
                       {"drift_count", s.drift_count},
                       {"shape", detail::shape_json(s.stream_shape)},
                       {"dump", s.stream_dump}};
    nlohmann::ordered_json cv;
    cv["accuracy"] = s.batch_cv.accuracy;
    cv["folds"] = config.folds;
    const auto put = [&cv](const char* key, const std::optional<double>& value) {
      if (value) {
        cv[key] = *value;
      } else {
        cv[key] = nullptr;
      }
    };
    put("tp_success", s.batch_cv.tp_success);
    put("fp_success", s.batch_cv.fp_success);
    put("tp_failure", s.batch_cv.tp_failure);
    put("fp_failure", s.batch_cv.fp_failure);
    entry["batch"] = {{"cross_validation", cv},
                      {"shape", detail::shape_json(s.batch_shape)},
                      {"dump", s.batch_dump}};
    doc["checkpoints"].push_back(std::move(entry));
  }

  std::string csv = "checkpoint,model,depth,tests,leaves,attributes,churn_percent\n";
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto row_csv = [&](const ComparisonRow& row, const char* model) {
      csv += std::to_string(snapshots[i].checkpoint) + ',' + model + ',' +
             std::to_string(row.depth) + ',' + std::to_string(row.test_count) + ',' +
             std::to_string(row.leaf_count) + ',' + std::to_string(row.attribute_set.size()) +
             ',' + (row.churn ? format_double(row.churn->churn_percent) : std::string("-")) +
             '\n';
    };
    row_csv(stream_cmp.rows[i], "hoeffding");
    row_csv(batch_cmp.rows[i], "batch");
  }

  detail::write_json_report(config.output, doc);
  write_file_atomic(config.output / "churn.csv", csv);
}

inline void execute_generate(const RunConfig& config) {
  const MetricSchema& schema = MetricSchema::standard();
  DriftScript script;
  if (!config.script.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(config.script));
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::InvalidScript, "script file does not parse: " + std::string(e.what()));
    }
    script = script_from_json(doc, schema);
    if (config.seed_set) script.seed = config.seed;
  } else if (config.drift_at > 0) {
    script = reference_drift_script(config.seed, config.drift_at, config.noise);
  } else {
    script = reference_script(config.seed, config.noise);
  }
  const BuildDataset dataset = generate_stream(script, schema, config.count);
  std::filesystem::path target = config.output;
  if (target.extension() != ".csv") target = target / "dataset.csv";
  write_dataset(target, dataset, schema);
}

inline void execute(const RunConfig& config) {
  if (config.command != Command::Generate && config.warmup < 1) {
    raise(ErrorKind::ConfigError, "warmup must cover at least one instance");
  }
  switch (config.command) {
    case Command::Generate: execute_generate(config); return;
    case Command::Evaluate: execute_evaluate(config); return;
    case Command::Sequences: execute_sequences(config); return;
    case Command::Compare: execute_compare(config); return;
  }
  raise(ErrorKind::ConfigError, "unknown command");
}

// 0 ok, 1 usage/config, 2 data problem, 3 internal fault.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
      return 1;
    case ErrorKind::FileNotFound:
    case ErrorKind::ParseError:
    case ErrorKind::EmptyInput:
    case ErrorKind::MissingMetric:
    case ErrorKind::NonNumericValue:
    case ErrorKind::UnknownOutcome:
    case ErrorKind::SchemaMismatch:
    case ErrorKind::EmptyDataset:
    case ErrorKind::InsufficientData:
    case ErrorKind::PoolTooSmall:
    case ErrorKind::TooFewInstances:
    case ErrorKind::SingleClass:
    case ErrorKind::InvalidScript:
    case ErrorKind::EmptyPhase:
    case ErrorKind::UndefinedRate:
    case ErrorKind::DegenerateVariance:
      return 2;
    default:
      return 3;
  }
}

inline int run_command(const RunConfig& config, std::FILE* diagnostics = stderr) {
  try {
    execute(config);
    return 0;
  } catch (const Error& e) {
    std::fprintf(diagnostics, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(diagnostics, "internal error: %s\n", e.what());
    return 3;
  }
}

}  // namespace bsm
