#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <string>

#include "bsm/bsm.hpp"
#include "helpers.hpp"

using bsm::AggregationStrategy;
using bsm::BuildOutcome;
using bsm::ErrorKind;
using bsm::MetricSchema;
using bsm::MetricVector;

namespace {

std::map<std::string, std::string> full_record(const MetricSchema& schema,
                                               const std::string& value = "0.0") {
  std::map<std::string, std::string> record;
  record["build_id"] = "b1";
  record["ordinal"] = "0";
  record["outcome"] = "success";
  for (const std::string& name : schema.names()) record[name] = value;
  return record;
}

}  // namespace

TEST_CASE("outcome strings parse case-insensitively") {
  CHECK(bsm::outcome_from_string("success") == BuildOutcome::Success);
  CHECK(bsm::outcome_from_string("FAILURE") == BuildOutcome::Failure);
  CHECK(bsm::outcome_from_string("Success") == BuildOutcome::Success);
  CHECK_FALSE(bsm::outcome_from_string("ok").has_value());
  CHECK_FALSE(bsm::outcome_from_string("").has_value());
}

TEST_CASE("standard schema carries the expected 42 metrics") {
  const MetricSchema& schema = MetricSchema::standard();
  REQUIRE(schema.size() == 42);
  CHECK(schema.index_of("Cyclomatic complexity").has_value());
  CHECK(schema.index_of("Number of interfaces").has_value());
  CHECK(schema.index_of("Average number of attributes per class").has_value());
  CHECK_FALSE(schema.index_of("Nonexistent metric").has_value());

  std::map<bsm::MetricCategory, int> counts;
  for (std::size_t i = 0; i < schema.size(); ++i) ++counts[schema.category(i)];
  CHECK(counts[bsm::MetricCategory::Complexity] == 4);
  CHECK(counts[bsm::MetricCategory::Halstead] == 12);
  CHECK(counts[bsm::MetricCategory::Dependency] == 5);
  CHECK(counts[bsm::MetricCategory::Cohesion] == 3);
  CHECK(counts[bsm::MetricCategory::Basic] == 18);
}

TEST_CASE("zero record parses to a success instance with a zero vector") {
  const MetricSchema& schema = MetricSchema::standard();
  const bsm::BuildInstance instance = bsm::parse_build_record(full_record(schema), schema);
  CHECK(instance.build_id == "b1");
  CHECK(instance.ordinal == 0);
  CHECK(instance.outcome == BuildOutcome::Success);
  REQUIRE(instance.metrics.size() == 42);
  for (double v : instance.metrics.values) CHECK(v == 0.0);
}

TEST_CASE("a missing metric is reported by name") {
  const MetricSchema& schema = MetricSchema::standard();
  auto record = full_record(schema);
  record.erase("Cyclomatic complexity");
  try {
    bsm::parse_build_record(record, schema);
    FAIL("expected MissingMetric");
  } catch (const bsm::Error& e) {
    CHECK(e.kind() == ErrorKind::MissingMetric);
    CHECK(std::string(e.what()).find("Cyclomatic complexity") != std::string::npos);
  }
}

TEST_CASE("malformed fields raise typed errors") {
  const MetricSchema& schema = MetricSchema::standard();

  auto bad_value = full_record(schema);
  bad_value["Lines of code"] = "many";
  CHECK(helpers::raised_kind([&] { bsm::parse_build_record(bad_value, schema); }) ==
        ErrorKind::NonNumericValue);

  auto bad_outcome = full_record(schema);
  bad_outcome["outcome"] = "aborted";
  CHECK(helpers::raised_kind([&] { bsm::parse_build_record(bad_outcome, schema); }) ==
        ErrorKind::UnknownOutcome);

  auto no_order = full_record(schema);
  no_order.erase("ordinal");
  CHECK(helpers::raised_kind([&] { bsm::parse_build_record(no_order, schema); }) ==
        ErrorKind::ParseError);

  auto stamped = full_record(schema);
  stamped.erase("ordinal");
  stamped["timestamp"] = "1334524800";
  CHECK(bsm::parse_build_record(stamped, schema, 7).ordinal == 7);
}

TEST_CASE("strict double parsing rejects partial and non-finite input") {
  CHECK(bsm::parse_finite_double("2.5") == 2.5);
  CHECK(bsm::parse_finite_double("-3") == -3.0);
  CHECK_FALSE(bsm::parse_finite_double("2.5x").has_value());
  CHECK_FALSE(bsm::parse_finite_double("").has_value());
  CHECK_FALSE(bsm::parse_finite_double("nan").has_value());
  CHECK_FALSE(bsm::parse_finite_double("inf").has_value());
}

TEST_CASE("single-row aggregation is the identity for every strategy") {
  MetricVector row(std::vector<double>{1.5, -2.0, 7.25});
  for (auto strategy : {AggregationStrategy::Max, AggregationStrategy::Mean,
                        AggregationStrategy::Median, AggregationStrategy::Sum}) {
    CHECK(bsm::aggregate_file_metrics({row}, strategy) == row);
  }
}

TEST_CASE("aggregation strategies compute the expected components") {
  const std::vector<MetricVector> rows = {MetricVector({10.0}), MetricVector({20.0}),
                                          MetricVector({30.0})};
  CHECK(bsm::aggregate_file_metrics(rows, AggregationStrategy::Max)[0] == 30.0);
  CHECK(bsm::aggregate_file_metrics(rows, AggregationStrategy::Mean)[0] == 20.0);
  CHECK(bsm::aggregate_file_metrics(rows, AggregationStrategy::Sum)[0] == 60.0);
  CHECK(bsm::aggregate_file_metrics(rows, AggregationStrategy::Median)[0] == 20.0);

  const std::vector<MetricVector> four = {MetricVector({10.0}), MetricVector({20.0}),
                                          MetricVector({30.0}), MetricVector({40.0})};
  CHECK(bsm::aggregate_file_metrics(four, AggregationStrategy::Median)[0] == 25.0);
}

TEST_CASE("aggregation rejects empty and ragged input") {
  CHECK(helpers::raised_kind(
            [] { bsm::aggregate_file_metrics({}, AggregationStrategy::Mean); }) ==
        ErrorKind::EmptyInput);
  CHECK(helpers::raised_kind([] {
          bsm::aggregate_file_metrics({MetricVector({1.0}), MetricVector({1.0, 2.0})},
                                      AggregationStrategy::Mean);
        }) == ErrorKind::SchemaMismatch);
}

TEST_CASE("metric vectors validate against the schema") {
  const MetricSchema& schema = MetricSchema::standard();
  CHECK(helpers::raised_kind([&] { MetricVector({1.0, 2.0}).validate(schema); }) ==
        ErrorKind::SchemaMismatch);
  MetricVector bad = helpers::vector_with(schema);
  bad.values[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK(helpers::raised_kind([&] { bad.validate(schema); }) == ErrorKind::NonNumericValue);
  CHECK_FALSE(helpers::raised_kind([&] { helpers::vector_with(schema).validate(schema); })
                  .has_value());
}

TEST_CASE("aggregation strategy names round-trip") {
  for (auto strategy : {AggregationStrategy::Max, AggregationStrategy::Mean,
                        AggregationStrategy::Median, AggregationStrategy::Sum}) {
    CHECK(bsm::aggregation_from_string(bsm::to_string(strategy)) == strategy);
  }
  CHECK_FALSE(bsm::aggregation_from_string("mode").has_value());
}
