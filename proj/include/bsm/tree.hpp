#pragma once

// Shared decision-tree surface: both learners render their models into the
// same sketch structure, which feeds shape measurement, the textual dump,
// and churn comparisons.

#include <algorithm>
#include <cstdio>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"

namespace bsm {

// Binary test nodes: left holds values <= threshold, right holds the rest.
struct SketchNode {
  bool leaf = true;
  std::string attribute;    // split nodes only
  int attribute_index = -1; // schema position of the split attribute
  double threshold = 0.0;
  std::unique_ptr<SketchNode> left;
  std::unique_ptr<SketchNode> right;
  BuildOutcome label = BuildOutcome::Failure;  // leaves only
  double failed_votes = 0.0;
  double successful_votes = 0.0;

  static std::unique_ptr<SketchNode> make_leaf(BuildOutcome label, double failed,
                                               double successful) {
    auto node = std::make_unique<SketchNode>();
    node->leaf = true;
    node->label = label;
    node->failed_votes = failed;
    node->successful_votes = successful;
    return node;
  }

  static std::unique_ptr<SketchNode> make_split(std::string attribute, int attribute_index,
                                                double threshold,
                                                std::unique_ptr<SketchNode> left,
                                                std::unique_ptr<SketchNode> right) {
    auto node = std::make_unique<SketchNode>();
    node->leaf = false;
    node->attribute = std::move(attribute);
    node->attribute_index = attribute_index;
    node->threshold = threshold;
    node->left = std::move(left);
    node->right = std::move(right);
    return node;
  }

  std::unique_ptr<SketchNode> clone() const {
    auto node = std::make_unique<SketchNode>();
    node->leaf = leaf;
    node->attribute = attribute;
    node->attribute_index = attribute_index;
    node->threshold = threshold;
    node->label = label;
    node->failed_votes = failed_votes;
    node->successful_votes = successful_votes;
    if (left) node->left = left->clone();
    if (right) node->right = right->clone();
    return node;
  }
};

struct TreeShape {
  std::size_t depth = 0;       // longest root-to-leaf split count
  std::size_t test_count = 0;  // split nodes
  std::size_t leaf_count = 0;
  std::set<std::string> attribute_set;

  std::size_t attribute_count() const { return attribute_set.size(); }
};

inline void accumulate_shape(const SketchNode& node, std::size_t depth, TreeShape& shape) {
  if (node.leaf) {
    ++shape.leaf_count;
    shape.depth = std::max(shape.depth, depth);
    return;
  }
  ++shape.test_count;
  shape.attribute_set.insert(node.attribute);
  accumulate_shape(*node.left, depth + 1, shape);
  accumulate_shape(*node.right, depth + 1, shape);
}

inline TreeShape sketch_shape(const SketchNode& root) {
  TreeShape shape;
  accumulate_shape(root, 0, shape);
  return shape;
}

inline std::string format_threshold(double threshold) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", threshold);
  return buffer;
}

inline std::string format_votes(double failed, double successful) {
  char buffer[96];
  std::snprintf(buffer, sizeof(buffer), "(%.2f | %.2f)", failed, successful);
  return buffer;
}

// One node per line, "|   " per depth level, left branch (<=) before right.
// Leaves carry their label and the failed | successful vote pair.
inline void dump_node(const SketchNode& node, std::size_t depth, std::string& out) {
  for (std::size_t i = 0; i < depth; ++i) out += "|   ";
  if (node.leaf) {
    out += to_string(node.label);
    out += ' ';
    out += format_votes(node.failed_votes, node.successful_votes);
    out += '\n';
    return;
  }
  out += node.attribute;
  out += " <= ";
  out += format_threshold(node.threshold);
  out += '\n';
  dump_node(*node.left, depth + 1, out);
  dump_node(*node.right, depth + 1, out);
}

inline std::string sketch_dump(const SketchNode& root) {
  std::string out;
  dump_node(root, 0, out);
  return out;
}

// Path from the root: 0 descends left, 1 descends right.
using NodePath = std::vector<int>;

}  // namespace bsm
