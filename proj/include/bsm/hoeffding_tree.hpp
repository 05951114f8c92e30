#pragma once

// Incremental decision-tree learner gated by the Hoeffding bound. Numeric
// attributes are summarized per leaf with class-conditional Gaussian
// estimators; candidate thresholds are equally spaced over the observed range.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"
#include "bsm/tree.hpp"

namespace bsm {

// epsilon = sqrt(R^2 ln(1/delta) / (2n)): with confidence 1 - delta the
// population mean lies within epsilon of the sample mean of n observations.
inline double hoeffding_bound(double value_range, double delta, double n) {
  if (value_range <= 0.0) raise(ErrorKind::DomainError, "value range must be positive");
  if (!(delta > 0.0) || delta > 1.0) raise(ErrorKind::DomainError, "delta must be in (0, 1]");
  if (n < 1.0) raise(ErrorKind::DomainError, "observation count must be at least 1");
  return std::sqrt(value_range * value_range * std::log(1.0 / delta) / (2.0 * n));
}

struct TreeParams {
  double delta = 1e-7;
  double value_range = 1.0;  // information gain on two classes spans [0, 1]
  std::uint64_t grace_period = 25;
  double tie_threshold = 0.05;

  void validate() const {
    if (!(delta > 0.0) || delta >= 1.0) raise(ErrorKind::ConfigError, "delta must be in (0, 1)");
    if (value_range <= 0.0) raise(ErrorKind::ConfigError, "value_range must be positive");
    if (grace_period < 1) raise(ErrorKind::ConfigError, "grace_period must be at least 1");
    if (tie_threshold < 0.0 || tie_threshold >= 1.0) {
      raise(ErrorKind::ConfigError, "tie_threshold must be in [0, 1)");
    }
  }
};

class GaussianEstimator {
 public:
  void add(double value) {
    weight_ += 1.0;
    const double delta = value - mean_;
    mean_ += delta / weight_;
    m2_ += delta * (value - mean_);
  }

  double weight() const { return weight_; }
  double mean() const { return mean_; }
  double variance() const { return weight_ > 1.0 ? m2_ / (weight_ - 1.0) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }

  // Mass at or below x; degenerate estimators step at the mean.
  double cdf(double x) const {
    const double sd = stddev();
    if (sd <= 0.0) return x >= mean_ ? 1.0 : 0.0;
    return 0.5 * std::erfc((mean_ - x) / (sd * std::numbers::sqrt2));
  }

 private:
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Per-leaf, per-attribute summary: one Gaussian per class plus the observed
// value range that candidate thresholds are drawn from.
struct AttributeObserver {
  std::array<GaussianEstimator, kClassCount> per_class;
  double min_seen = std::numeric_limits<double>::infinity();
  double max_seen = -std::numeric_limits<double>::infinity();

  void observe(double value, int class_idx) {
    per_class[class_idx].add(value);
    min_seen = std::min(min_seen, value);
    max_seen = std::max(max_seen, value);
  }

  bool has_spread() const { return max_seen > min_seen; }
};

inline double entropy2(double a, double b) {
  const double total = a + b;
  if (total <= 0.0 || a <= 0.0 || b <= 0.0) return 0.0;
  const double pa = a / total;
  const double pb = b / total;
  return -(pa * std::log2(pa) + pb * std::log2(pb));
}

struct SplitCandidate {
  int attribute = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Splits require positive gain and either a Hoeffding-significant margin over
// the runner-up or an epsilon already below the tie threshold.
inline bool split_gate(double best_gain, double second_gain, double epsilon, double tau) {
  return best_gain > 0.0 && (best_gain - second_gain > epsilon || epsilon < tau);
}

constexpr int kCandidateThresholds = 10;

class HoeffdingTree {
 public:
  HoeffdingTree(MetricSchema schema, TreeParams params)
      : schema_(std::move(schema)), params_(params), root_(make_leaf()) {
    params_.validate();
  }

  HoeffdingTree(const HoeffdingTree& other)
      : schema_(other.schema_),
        params_(other.params_),
        root_(clone(*other.root_)),
        instances_seen_(other.instances_seen_) {}

  HoeffdingTree& operator=(const HoeffdingTree& other) {
    if (this != &other) {
      schema_ = other.schema_;
      params_ = other.params_;
      root_ = clone(*other.root_);
      instances_seen_ = other.instances_seen_;
    }
    return *this;
  }

  HoeffdingTree(HoeffdingTree&&) = default;
  HoeffdingTree& operator=(HoeffdingTree&&) = default;

  const MetricSchema& schema() const { return schema_; }
  const TreeParams& params() const { return params_; }
  std::uint64_t instances_seen() const { return instances_seen_; }

  void learn_one(const BuildInstance& instance) {
    instance.metrics.validate(schema_);
    Node& leaf = descend(instance.metrics);
    const int cls = class_index(instance.outcome);
    leaf.votes[cls] += 1.0;
    leaf.observed[cls] += 1.0;
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      leaf.observers[a].observe(instance.metrics.values[a], cls);
    }
    ++instances_seen_;
    if (++leaf.seen_since_attempt >= params_.grace_period) {
      leaf.seen_since_attempt = 0;
      attempt_split(leaf);
    }
  }

  std::pair<BuildOutcome, std::array<double, kClassCount>> predict(
      const MetricVector& metrics) const {
    metrics.validate(schema_);
    if (instances_seen_ == 0) raise(ErrorKind::EmptyModel, "model has not been trained");
    const Node* node = root_.get();
    while (!node->is_leaf()) {
      node = metrics.values[node->attribute] <= node->threshold ? node->left.get()
                                                                : node->right.get();
    }
    const BuildOutcome label =
        node->votes[1] > node->votes[0] ? BuildOutcome::Success : BuildOutcome::Failure;
    return {label, node->votes};
  }

  NodePath path_to_leaf(const MetricVector& metrics) const {
    metrics.validate(schema_);
    NodePath path;
    const Node* node = root_.get();
    while (!node->is_leaf()) {
      const bool goes_left = metrics.values[node->attribute] <= node->threshold;
      path.push_back(goes_left ? 0 : 1);
      node = goes_left ? node->left.get() : node->right.get();
    }
    return path;
  }

  // Replaces the addressed subtree with a fresh leaf; a leaf target keeps its
  // place but loses votes and observers. instances_seen is untouched.
  void prune_subtree(const NodePath& path) {
    Node* node = root_.get();
    for (int step : path) {
      if (node->is_leaf()) raise(ErrorKind::InvalidPath, "path descends past a leaf");
      if (step == 0) {
        node = node->left.get();
      } else if (step == 1) {
        node = node->right.get();
      } else {
        raise(ErrorKind::InvalidPath, "path steps must be 0 or 1");
      }
    }
    *node = Node();
    node->observers.resize(schema_.size());
  }

  TreeShape shape() const { return sketch_shape(*sketch()); }

  std::unique_ptr<SketchNode> sketch() const { return sketch_of(*root_); }

  std::string dump() const { return sketch_dump(*sketch()); }

 private:
  struct Node {
    int attribute = -1;  // schema index; negative marks a leaf
    double threshold = 0.0;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
    std::array<double, kClassCount> votes{};     // failed, successful
    std::array<double, kClassCount> observed{};  // arrivals since creation
    std::vector<AttributeObserver> observers;
    std::uint64_t seen_since_attempt = 0;

    bool is_leaf() const { return attribute < 0; }
  };

  std::unique_ptr<Node> make_leaf() const {
    auto node = std::make_unique<Node>();
    node->observers.resize(schema_.size());
    return node;
  }

  static std::unique_ptr<Node> clone(const Node& node) {
    auto copy = std::make_unique<Node>();
    copy->attribute = node.attribute;
    copy->threshold = node.threshold;
    copy->votes = node.votes;
    copy->observed = node.observed;
    copy->observers = node.observers;
    copy->seen_since_attempt = node.seen_since_attempt;
    if (!node.is_leaf()) {
      copy->left = clone(*node.left);
      copy->right = clone(*node.right);
    }
    return copy;
  }

  Node& descend(const MetricVector& metrics) {
    Node* node = root_.get();
    while (!node->is_leaf()) {
      node = metrics.values[node->attribute] <= node->threshold ? node->left.get()
                                                                : node->right.get();
    }
    return *node;
  }

  // Best threshold for one attribute across the equally spaced candidates,
  // scored by information gain estimated from the class-conditional Gaussians.
  SplitCandidate best_for_attribute(const Node& leaf, int attribute) const {
    const AttributeObserver& obs = leaf.observers[attribute];
    const double base = entropy2(leaf.observed[0], leaf.observed[1]);
    const double total = leaf.observed[0] + leaf.observed[1];
    SplitCandidate best;
    best.attribute = attribute;
    best.gain = -1.0;
    const double span = obs.max_seen - obs.min_seen;
    for (int i = 1; i <= kCandidateThresholds; ++i) {
      const double t = obs.min_seen + span * i / (kCandidateThresholds + 1);
      double left[kClassCount];
      double right[kClassCount];
      for (std::size_t c = 0; c < kClassCount; ++c) {
        const GaussianEstimator& est = obs.per_class[c];
        const double mass = est.weight() > 0.0 ? est.weight() * est.cdf(t) : 0.0;
        left[c] = mass;
        right[c] = est.weight() - mass;
      }
      const double wl = left[0] + left[1];
      const double wr = right[0] + right[1];
      const double gain = base - (wl / total) * entropy2(left[0], left[1]) -
                          (wr / total) * entropy2(right[0], right[1]);
      if (gain > best.gain) {
        best.gain = gain;
        best.threshold = t;
      }
    }
    return best;
  }

  void attempt_split(Node& leaf) {
    const double n = leaf.observed[0] + leaf.observed[1];
    if (n < 1.0 || leaf.observed[0] <= 0.0 || leaf.observed[1] <= 0.0) return;

    SplitCandidate best;
    SplitCandidate second;
    for (std::size_t a = 0; a < schema_.size(); ++a) {
      if (!leaf.observers[a].has_spread()) continue;
      SplitCandidate candidate = best_for_attribute(leaf, static_cast<int>(a));
      if (candidate.gain > best.gain) {
        second = best;
        best = candidate;
      } else if (candidate.gain > second.gain) {
        second = candidate;
      }
    }
    if (best.attribute < 0) return;

    const double epsilon = hoeffding_bound(params_.value_range, params_.delta, n);
    const double runner_up = std::max(second.gain, 0.0);  // lone candidate races the null split
    if (!split_gate(best.gain, runner_up, epsilon, params_.tie_threshold)) return;

    split_leaf(leaf, best);
  }

  void split_leaf(Node& leaf, const SplitCandidate& chosen) {
    auto left = make_leaf();
    auto right = make_leaf();
    const AttributeObserver& obs = leaf.observers[chosen.attribute];
    for (std::size_t c = 0; c < kClassCount; ++c) {
      const GaussianEstimator& est = obs.per_class[c];
      const double p_left = est.weight() > 0.0 ? est.cdf(chosen.threshold) : 0.5;
      left->votes[c] = leaf.votes[c] * p_left;
      right->votes[c] = leaf.votes[c] - left->votes[c];
    }
    leaf.attribute = chosen.attribute;
    leaf.threshold = chosen.threshold;
    leaf.left = std::move(left);
    leaf.right = std::move(right);
    leaf.votes = {};
    leaf.observed = {};
    leaf.observers.clear();
    leaf.seen_since_attempt = 0;
  }

  std::unique_ptr<SketchNode> sketch_of(const Node& node) const {
    if (node.is_leaf()) {
      const BuildOutcome label =
          node.votes[1] > node.votes[0] ? BuildOutcome::Success : BuildOutcome::Failure;
      return SketchNode::make_leaf(label, node.votes[0], node.votes[1]);
    }
    return SketchNode::make_split(schema_.name(node.attribute), node.attribute,
                                  node.threshold, sketch_of(*node.left),
                                  sketch_of(*node.right));
  }

  MetricSchema schema_;
  TreeParams params_;
  std::unique_ptr<Node> root_;
  std::uint64_t instances_seen_ = 0;
};

}  // namespace bsm
