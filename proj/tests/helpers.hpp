#pragma once

// Shared fixtures for the test suite: quick instance builders over the
// standard 42-metric schema and an error-kind capture helper.

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsm/bsm.hpp"

namespace helpers {

inline bsm::MetricVector vector_with(
    const bsm::MetricSchema& schema,
    std::initializer_list<std::pair<const char*, double>> overrides = {}) {
  bsm::MetricVector v;
  v.values.assign(schema.size(), 0.0);
  for (const auto& [name, value] : overrides) {
    v.values[schema.require_index(name)] = value;
  }
  return v;
}

inline bsm::BuildInstance instance_with(
    const bsm::MetricSchema& schema, std::size_t ordinal, bsm::BuildOutcome outcome,
    std::initializer_list<std::pair<const char*, double>> overrides = {}) {
  bsm::BuildInstance instance;
  instance.build_id = "build-" + std::to_string(ordinal);
  instance.ordinal = ordinal;
  instance.outcome = outcome;
  instance.metrics = vector_with(schema, overrides);
  return instance;
}

template <typename Fn>
std::optional<bsm::ErrorKind> raised_kind(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const bsm::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace helpers
