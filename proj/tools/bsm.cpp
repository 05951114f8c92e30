// Command-line front end: generate synthetic build streams, evaluate a
// dataset chronologically, run the sequence-ordering experiment, or compare
// the incremental model against a batch-trained tree.

#include <cstdint>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bsm/bsm.hpp"

namespace {

void add_stream_options(CLI::App* cmd, bsm::RunConfig& config) {
  cmd->add_option("--input", config.input, "Build metrics CSV")->required();
  cmd->add_option("--output", config.output, "Report directory");
  cmd->add_option("--delta", config.delta, "Split confidence for the incremental tree");
  cmd->add_option("--grace", config.grace, "Instances between split attempts at a leaf");
  cmd->add_option("--tau", config.tau, "Tie-break threshold for near-equal splits");
  cmd->add_option("--drift-confidence", config.drift_confidence,
                  "Change detector confidence level");
  cmd->add_option("--warmup", config.warmup, "Instances learned before scoring starts");
  cmd->add_option("--aggregate", config.aggregate,
                  "Per-file metric aggregation for repeated build ids")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, bsm::AggregationStrategy>{
              {"max", bsm::AggregationStrategy::Max},
              {"mean", bsm::AggregationStrategy::Mean},
              {"median", bsm::AggregationStrategy::Median},
              {"sum", bsm::AggregationStrategy::Sum}},
          CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming decision trees over software build metrics"};
  app.require_subcommand(1);

  bsm::RunConfig config;

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic build stream");
  generate->add_option("--output", config.output, "Target CSV file or directory")->required();
  generate->add_option("--count", config.count, "Number of builds to generate");
  generate->add_option("--script", config.script, "Concept script JSON")
      ->check(CLI::ExistingFile);
  generate->add_option("--noise", config.noise, "Label flip probability")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--drift-at", config.drift_at,
                       "Switch the bundled concept at this build (0 keeps it fixed)");
  CLI::Option* generate_seed =
      generate->add_option("--seed", config.seed, "Generator seed")->envname("BSM_SEED");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Replay a dataset chronologically");
  add_stream_options(evaluate, config);
  evaluate->add_option("--phases", config.phases, "Phase boundaries (instance numbers)")
      ->delimiter(',');

  CLI::App* sequences = app.add_subcommand("sequences", "Replay reordered streams");
  add_stream_options(sequences, config);
  sequences->add_option("--sequences", config.sequences, "Number of orderings")
      ->check(CLI::PositiveNumber);

  CLI::App* compare = app.add_subcommand("compare", "Incremental versus batch trees");
  add_stream_options(compare, config);
  compare->add_option("--checkpoints", config.checkpoints, "Snapshot sizes (instance numbers)")
      ->delimiter(',');
  compare->add_option("--folds", config.folds, "Cross-validation folds")
      ->check(CLI::Range(2, 1000));
  CLI::Option* compare_seed =
      compare->add_option("--seed", config.seed, "Fold shuffle seed")->envname("BSM_SEED");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (generate->parsed()) {
    config.command = bsm::Command::Generate;
    config.seed_set = generate_seed->count() > 0;
  } else if (evaluate->parsed()) {
    config.command = bsm::Command::Evaluate;
  } else if (sequences->parsed()) {
    config.command = bsm::Command::Sequences;
  } else {
    config.command = bsm::Command::Compare;
    config.seed_set = compare_seed->count() > 0;
  }
  return bsm::run_command(config);
}
