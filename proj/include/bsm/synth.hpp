#pragma once

// Seeded synthetic build streams with scripted abrupt concept drift. Metrics
// are independent uniform draws; labels come from an ordered threshold rule
// list, optionally flipped at a fixed noise rate. Ground truth stays trivially
// checkable, which is the whole point.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"
#include "bsm/stream.hpp"

namespace bsm {

// Fires when the named metric exceeds the threshold.
struct ConceptRule {
  std::string metric;
  double threshold = 0.0;
  BuildOutcome label = BuildOutcome::Failure;
  int metric_index = -1;  // resolved against the schema before generation
};

struct ConceptSpec {
  std::vector<ConceptRule> rules;  // ordered decision list, first match wins
  BuildOutcome default_label = BuildOutcome::Success;

  BuildOutcome evaluate(const MetricVector& metrics) const {
    for (const ConceptRule& rule : rules) {
      if (metrics.values[rule.metric_index] > rule.threshold) return rule.label;
    }
    return default_label;
  }
};

struct FeatureRange {
  double lo = 0.0;
  double hi = 10.0;
};

struct ScriptSegment {
  std::size_t start = 0;  // first ordinal governed by this concept
  ConceptSpec concept_spec;
};

struct DriftScript {
  std::vector<ScriptSegment> segments;
  double noise_rate = 0.0;
  std::vector<FeatureRange> ranges;  // one per schema metric
  std::uint64_t seed = 1;

  void validate(const MetricSchema& schema) {
    if (segments.empty()) raise(ErrorKind::InvalidScript, "script needs at least one segment");
    if (segments.front().start != 0) {
      raise(ErrorKind::InvalidScript, "first segment must start at ordinal 0");
    }
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (segments[i].start <= segments[i - 1].start) {
        raise(ErrorKind::InvalidScript, "segment starts must be strictly increasing");
      }
    }
    if (!(noise_rate >= 0.0) || noise_rate >= 0.5) {
      raise(ErrorKind::InvalidScript, "noise_rate must be in [0, 0.5)");
    }
    if (ranges.size() != schema.size()) {
      raise(ErrorKind::InvalidScript, "script supplies " + std::to_string(ranges.size()) +
                                          " feature ranges for " + std::to_string(schema.size()) +
                                          " metrics");
    }
    for (const FeatureRange& range : ranges) {
      if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.hi < range.lo) {
        raise(ErrorKind::InvalidScript, "feature ranges must be finite with hi >= lo");
      }
    }
    for (ScriptSegment& segment : segments) {
      for (ConceptRule& rule : segment.concept_spec.rules) {
        if (!std::isfinite(rule.threshold)) {
          raise(ErrorKind::InvalidScript, "rule threshold must be finite");
        }
        const auto index = schema.index_of(rule.metric);
        if (!index) {
          raise(ErrorKind::InvalidScript, "rule references unknown metric '" + rule.metric + "'");
        }
        rule.metric_index = static_cast<int>(*index);
      }
    }
  }
};

// Uniform draw in [0, 1) from the top 53 bits; byte-stable across platforms.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline BuildDataset generate_stream(DriftScript script, const MetricSchema& schema,
                                    std::size_t n) {
  if (n < 1) raise(ErrorKind::InvalidScript, "instance count must be at least 1");
  script.validate(schema);

  std::mt19937_64 rng(script.seed);
  std::vector<BuildInstance> instances;
  instances.reserve(n);
  std::size_t segment = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (segment + 1 < script.segments.size() && script.segments[segment + 1].start <= i) {
      ++segment;
    }
    BuildInstance instance;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%05zu", i + 1);
    instance.build_id = id;
    instance.ordinal = i;
    instance.metrics.values.resize(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const FeatureRange& range = script.ranges[a];
      instance.metrics.values[a] = range.lo + (range.hi - range.lo) * unit_draw(rng);
    }
    const double flip_draw = unit_draw(rng);  // always drawn, keeps streams aligned
    BuildOutcome label = script.segments[segment].concept_spec.evaluate(instance.metrics);
    if (flip_draw < script.noise_rate) {
      label = label == BuildOutcome::Success ? BuildOutcome::Failure : BuildOutcome::Success;
    }
    instance.outcome = label;
    instances.push_back(std::move(instance));
  }
  return BuildDataset::from_instances(std::move(instances));
}

constexpr const char* kPrimaryConceptMetric = "Average number of attributes per class";
constexpr const char* kSecondaryConceptMetric = "Number of interfaces";

// Two-rule concept shaped like the build-failure model this toolkit tends to
// learn: high attribute density fails, otherwise too many interfaces fail.
// With [0, 10] uniform features the success prior is 0.8 * 0.75 = 0.6.
inline ConceptSpec two_rule_concept(double theta1 = 8.0, double theta2 = 7.5) {
  ConceptSpec spec;
  spec.rules.push_back({kPrimaryConceptMetric, theta1, BuildOutcome::Failure});
  spec.rules.push_back({kSecondaryConceptMetric, theta2, BuildOutcome::Failure});
  spec.default_label = BuildOutcome::Success;
  return spec;
}

inline DriftScript reference_script(std::uint64_t seed, double noise_rate = 0.0) {
  DriftScript script;
  script.seed = seed;
  script.noise_rate = noise_rate;
  script.ranges.assign(MetricSchema::standard().size(), FeatureRange{0.0, 10.0});
  script.segments.push_back({0, two_rule_concept()});
  return script;
}

// Same stream with the first threshold tightened at drift_at, so the region
// 4 < primary metric <= 8 flips from the old concept's labels to FAILURE.
inline DriftScript reference_drift_script(std::uint64_t seed, std::size_t drift_at,
                                          double noise_rate = 0.0) {
  DriftScript script = reference_script(seed, noise_rate);
  script.segments.push_back({drift_at, two_rule_concept(4.0)});
  return script;
}

inline nlohmann::ordered_json script_to_json(const DriftScript& script,
                                             const MetricSchema& schema) {
  nlohmann::ordered_json doc;
  doc["seed"] = script.seed;
  doc["noise_rate"] = script.noise_rate;
  nlohmann::ordered_json ranges = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < script.ranges.size(); ++a) {
    ranges[schema.name(a)] = {script.ranges[a].lo, script.ranges[a].hi};
  }
  doc["ranges"] = std::move(ranges);
  doc["segments"] = nlohmann::ordered_json::array();
  for (const ScriptSegment& segment : script.segments) {
    nlohmann::ordered_json seg;
    seg["start"] = segment.start;
    seg["default"] = to_string(segment.concept_spec.default_label);
    seg["rules"] = nlohmann::ordered_json::array();
    for (const ConceptRule& rule : segment.concept_spec.rules) {
      seg["rules"].push_back({{"metric", rule.metric},
                              {"greater_than", rule.threshold},
                              {"label", to_string(rule.label)}});
    }
    doc["segments"].push_back(std::move(seg));
  }
  return doc;
}

// Accepts a per-metric "ranges" object with an optional "default" entry that
// covers every metric not named explicitly.
inline DriftScript script_from_json(const nlohmann::json& doc, const MetricSchema& schema) {
  const auto parse_label = [](const std::string& text) {
    const auto label = outcome_from_string(text);
    if (!label) {
      raise(ErrorKind::InvalidScript, "label '" + text + "' is neither success nor failure");
    }
    return *label;
  };
  DriftScript script;
  try {
    script.seed = doc.value("seed", std::uint64_t{1});
    script.noise_rate = doc.value("noise_rate", 0.0);
    FeatureRange fallback;
    script.ranges.assign(schema.size(), fallback);
    if (doc.contains("ranges")) {
      const auto& ranges = doc.at("ranges");
      if (ranges.contains("default")) {
        fallback = {ranges.at("default").at(0).get<double>(),
                    ranges.at("default").at(1).get<double>()};
        script.ranges.assign(schema.size(), fallback);
      }
      for (const auto& [name, bounds] : ranges.items()) {
        if (name == "default") continue;
        const auto index = schema.index_of(name);
        if (!index) {
          raise(ErrorKind::InvalidScript, "range references unknown metric '" + name + "'");
        }
        script.ranges[*index] = {bounds.at(0).get<double>(), bounds.at(1).get<double>()};
      }
    }
    for (const auto& seg : doc.at("segments")) {
      ScriptSegment segment;
      segment.start = seg.value("start", std::size_t{0});
      segment.concept_spec.default_label = parse_label(seg.value("default", "success"));
      if (seg.contains("rules")) {
        for (const auto& rule_doc : seg.at("rules")) {
          ConceptRule rule;
          rule.metric = rule_doc.at("metric").get<std::string>();
          rule.threshold = rule_doc.at("greater_than").get<double>();
          rule.label = parse_label(rule_doc.at("label").get<std::string>());
          segment.concept_spec.rules.push_back(std::move(rule));
        }
      }
      script.segments.push_back(std::move(segment));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorKind::InvalidScript, std::string("malformed script document: ") + e.what());
  }
  script.validate(schema);
  return script;
}

}  // namespace bsm
