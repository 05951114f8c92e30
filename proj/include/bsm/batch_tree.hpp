#pragma once

// Batch decision tree in the C4.5 family: binary numeric splits at midpoints,
// gain-ratio selection, pessimistic error pruning. Serves as the instability
// counterpoint to the incremental learner.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "bsm/errors.hpp"
#include "bsm/hoeffding_tree.hpp"
#include "bsm/metrics.hpp"
#include "bsm/stream.hpp"
#include "bsm/tree.hpp"

namespace bsm {

struct BatchTreeParams {
  std::size_t min_leaf = 2;
  bool use_gain_ratio = true;
  bool prune = true;
  double confidence = 0.25;

  void validate() const {
    if (min_leaf < 1) raise(ErrorKind::ConfigError, "min_leaf must be at least 1");
    if (!(confidence > 0.0) || confidence > 0.5) {
      raise(ErrorKind::ConfigError, "confidence factor must be in (0, 0.5]");
    }
  }
};

struct BatchTreeModel {
  std::unique_ptr<SketchNode> root;
  std::size_t training_size = 0;

  BatchTreeModel() = default;
  BatchTreeModel(std::unique_ptr<SketchNode> r, std::size_t n)
      : root(std::move(r)), training_size(n) {}
  BatchTreeModel(const BatchTreeModel& other)
      : root(other.root ? other.root->clone() : nullptr), training_size(other.training_size) {}
  BatchTreeModel& operator=(const BatchTreeModel& other) {
    if (this != &other) {
      root = other.root ? other.root->clone() : nullptr;
      training_size = other.training_size;
    }
    return *this;
  }
  BatchTreeModel(BatchTreeModel&&) = default;
  BatchTreeModel& operator=(BatchTreeModel&&) = default;

  TreeShape shape() const { return sketch_shape(*root); }
  std::string dump() const { return sketch_dump(*root); }
};

inline BuildOutcome predict_batch(const BatchTreeModel& model, const MetricVector& metrics) {
  if (!model.root) raise(ErrorKind::EmptyModel, "batch model has no tree");
  const SketchNode* node = model.root.get();
  while (!node->leaf) {
    node = metrics.values[node->attribute_index] <= node->threshold ? node->left.get()
                                                                    : node->right.get();
  }
  return node->label;
}

namespace detail {

// Pessimistic extra-error estimate at confidence cf for a node covering n
// instances with e misclassified (Wilson-style upper bound on the error rate).
inline double added_errors(double n, double e, double cf) {
  if (n <= 0.0) return 0.0;
  if (e < 1e-9) return n * (1.0 - std::pow(cf, 1.0 / n));
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = boost::math::quantile(boost::math::normal_distribution<>(), 1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2.0 * n) +
                    z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
                   (1.0 + z * z / n);
  return r * n - e;
}

struct LabeledRow {
  const MetricVector* metrics;
  int cls;
};

struct BestSplit {
  int attribute = -1;
  double threshold = 0.0;
  double gain = 0.0;
  double criterion = -1.0;
};

inline BestSplit best_split(const std::vector<LabeledRow>& rows,
                            const std::vector<std::size_t>& indices, std::size_t attributes,
                            const BatchTreeParams& params) {
  std::array<double, kClassCount> totals{};
  for (std::size_t idx : indices) totals[rows[idx].cls] += 1.0;
  const double n = totals[0] + totals[1];
  const double base = entropy2(totals[0], totals[1]);

  BestSplit best;
  std::vector<std::pair<double, int>> column(indices.size());
  for (std::size_t a = 0; a < attributes; ++a) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      const LabeledRow& row = rows[indices[i]];
      column[i] = {row.metrics->values[a], row.cls};
    }
    std::sort(column.begin(), column.end());

    std::array<double, kClassCount> left{};
    for (std::size_t i = 1; i < column.size(); ++i) {
      left[column[i - 1].second] += 1.0;
      if (column[i].first <= column[i - 1].first) continue;
      const double nl = left[0] + left[1];
      const double nr = n - nl;
      if (nl < params.min_leaf || nr < params.min_leaf) continue;
      const double gain = base - (nl / n) * entropy2(left[0], left[1]) -
                          (nr / n) * entropy2(totals[0] - left[0], totals[1] - left[1]);
      if (gain <= 1e-12) continue;
      double criterion = gain;
      if (params.use_gain_ratio) {
        const double split_info = entropy2(nl, nr);
        if (split_info <= 1e-12) continue;
        criterion = gain / split_info;
      }
      if (criterion > best.criterion) {
        best.attribute = static_cast<int>(a);
        best.threshold = (column[i - 1].first + column[i].first) / 2.0;
        best.gain = gain;
        best.criterion = criterion;
      }
    }
  }
  return best;
}

inline std::unique_ptr<SketchNode> leaf_from_counts(const std::array<double, kClassCount>& c) {
  const BuildOutcome label = c[1] > c[0] ? BuildOutcome::Success : BuildOutcome::Failure;
  return SketchNode::make_leaf(label, c[0], c[1]);
}

inline std::unique_ptr<SketchNode> grow(const std::vector<LabeledRow>& rows,
                                        std::vector<std::size_t>& indices,
                                        const MetricSchema& schema,
                                        const BatchTreeParams& params) {
  std::array<double, kClassCount> counts{};
  for (std::size_t idx : indices) counts[rows[idx].cls] += 1.0;
  if (counts[0] == 0.0 || counts[1] == 0.0 || indices.size() < 2 * params.min_leaf) {
    return leaf_from_counts(counts);
  }
  const BestSplit split = best_split(rows, indices, schema.size(), params);
  if (split.attribute < 0) return leaf_from_counts(counts);

  std::vector<std::size_t> left_idx;
  std::vector<std::size_t> right_idx;
  for (std::size_t idx : indices) {
    if (rows[idx].metrics->values[split.attribute] <= split.threshold) {
      left_idx.push_back(idx);
    } else {
      right_idx.push_back(idx);
    }
  }
  auto left = grow(rows, left_idx, schema, params);
  auto right = grow(rows, right_idx, schema, params);
  return SketchNode::make_split(schema.name(split.attribute), split.attribute, split.threshold,
                                std::move(left), std::move(right));
}

inline void collect_counts(const SketchNode& node, std::array<double, kClassCount>& counts) {
  if (node.leaf) {
    counts[0] += node.failed_votes;
    counts[1] += node.successful_votes;
    return;
  }
  collect_counts(*node.left, counts);
  collect_counts(*node.right, counts);
}

// Bottom-up pessimistic pruning; returns the subtree's estimated error count.
inline double prune_node(std::unique_ptr<SketchNode>& node, double cf) {
  const double n = node->failed_votes + node->successful_votes;
  if (node->leaf) {
    const double e = n - std::max(node->failed_votes, node->successful_votes);
    return e + added_errors(n, e, cf);
  }
  const double subtree_errors = prune_node(node->left, cf) + prune_node(node->right, cf);
  std::array<double, kClassCount> counts{};
  collect_counts(*node, counts);
  const double total = counts[0] + counts[1];
  const double leaf_e = total - std::max(counts[0], counts[1]);
  const double leaf_errors = leaf_e + added_errors(total, leaf_e, cf);
  if (leaf_errors <= subtree_errors + 0.1) {
    node = leaf_from_counts(counts);
    return leaf_errors;
  }
  node->failed_votes = counts[0];
  node->successful_votes = counts[1];
  return subtree_errors;
}

}  // namespace detail

inline BatchTreeModel fit_batch_tree(const BuildDataset& dataset, const MetricSchema& schema,
                                     BatchTreeParams params = {}) {
  params.validate();
  if (dataset.instances.empty()) raise(ErrorKind::EmptyDataset, "cannot fit on an empty dataset");
  std::vector<detail::LabeledRow> rows;
  rows.reserve(dataset.size());
  for (const BuildInstance& instance : dataset.instances) {
    instance.metrics.validate(schema);
    rows.push_back({&instance.metrics, static_cast<int>(class_index(instance.outcome))});
  }
  std::vector<std::size_t> indices(rows.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  auto root = detail::grow(rows, indices, schema, params);
  if (params.prune && !root->leaf) detail::prune_node(root, params.confidence);
  return BatchTreeModel(std::move(root), dataset.size());
}

struct CrossValidationResult {
  double accuracy = 0.0;
  std::optional<double> tp_success;
  std::optional<double> fp_success;
  std::optional<double> tp_failure;
  std::optional<double> fp_failure;
  std::vector<double> fold_accuracy;
  std::vector<std::size_t> fold_of;  // fold index per dataset position
};

inline CrossValidationResult cross_validate(const BuildDataset& dataset,
                                            const MetricSchema& schema, std::size_t folds = 10,
                                            std::uint64_t seed = 1,
                                            BatchTreeParams params = {}) {
  params.validate();
  if (folds < 2) raise(ErrorKind::ConfigError, "cross-validation needs at least 2 folds");
  if (dataset.size() < folds) {
    raise(ErrorKind::TooFewInstances, std::to_string(dataset.size()) + " instances cannot fill " +
                                          std::to_string(folds) + " folds");
  }

  std::array<std::vector<std::size_t>, kClassCount> by_class;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[class_index(dataset.instances[i].outcome)].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    raise(ErrorKind::SingleClass, "stratified folds need both outcomes present");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_of(dataset.size(), 0);
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i = 0; i < members.size(); ++i) fold_of[members[i]] = i % folds;
  }

  std::size_t correct = 0;
  std::array<std::array<std::size_t, kClassCount>, kClassCount> confusion{};  // [actual][predicted]
  CrossValidationResult result;
  result.fold_of = fold_of;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    BuildDataset train;
    std::vector<std::size_t> held_out;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (fold_of[i] == fold) {
        held_out.push_back(i);
      } else {
        train.instances.push_back(dataset.instances[i]);
      }
    }
    const BatchTreeModel model = fit_batch_tree(train, schema, params);
    std::size_t fold_correct = 0;
    for (std::size_t i : held_out) {
      const BuildInstance& instance = dataset.instances[i];
      const BuildOutcome predicted = predict_batch(model, instance.metrics);
      ++confusion[class_index(instance.outcome)][class_index(predicted)];
      if (predicted == instance.outcome) {
        ++correct;
        ++fold_correct;
      }
    }
    result.fold_accuracy.push_back(held_out.empty()
                                       ? 0.0
                                       : static_cast<double>(fold_correct) / held_out.size());
  }

  result.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
  const double actual_failed = static_cast<double>(confusion[0][0] + confusion[0][1]);
  const double actual_success = static_cast<double>(confusion[1][0] + confusion[1][1]);
  if (actual_success > 0.0) {
    result.tp_success = confusion[1][1] / actual_success;
    result.fp_failure = confusion[1][0] / actual_success;
  }
  if (actual_failed > 0.0) {
    result.tp_failure = confusion[0][0] / actual_failed;
    result.fp_success = confusion[0][1] / actual_failed;
  }
  return result;
}

}  // namespace bsm
