#pragma once

// Ordered build streams: chronological replay, the k rotated sequence
// orderings, and the classic window models (fixed sliding, jumping, landmark).

#include <algorithm>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bsm/errors.hpp"
#include "bsm/metrics.hpp"

namespace bsm {

struct BuildDataset {
  std::vector<BuildInstance> instances;  // ascending ordinal, ordinals unique

  std::size_t size() const { return instances.size(); }

  static BuildDataset from_instances(std::vector<BuildInstance> instances) {
    std::stable_sort(instances.begin(), instances.end(),
                     [](const BuildInstance& a, const BuildInstance& b) {
                       return a.ordinal < b.ordinal;
                     });
    for (std::size_t i = 1; i < instances.size(); ++i) {
      if (instances[i].ordinal == instances[i - 1].ordinal) {
        raise(ErrorKind::ParseError,
              "duplicate ordinal " + std::to_string(instances[i].ordinal) + " (builds " +
                  instances[i - 1].build_id + ", " + instances[i].build_id + ")");
      }
    }
    return BuildDataset{std::move(instances)};
  }
};

// Warmup prefix plus the remaining instances in ascending ordinal order.
struct ReplaySplit {
  std::vector<BuildInstance> warmup;
  std::vector<BuildInstance> pool;
};

inline ReplaySplit replay_chronological(const BuildDataset& dataset, std::size_t warmup) {
  if (dataset.size() <= warmup) {
    raise(ErrorKind::InsufficientData,
          "dataset has " + std::to_string(dataset.size()) + " instances, warmup needs more than " +
              std::to_string(warmup));
  }
  ReplaySplit split;
  split.warmup.assign(dataset.instances.begin(), dataset.instances.begin() + warmup);
  split.pool.assign(dataset.instances.begin() + warmup, dataset.instances.end());
  return split;
}

// One ordering of the post-warmup pool; order holds indices into the pool.
struct StreamSequence {
  int sequence_id = 0;
  std::vector<std::size_t> order;
};

struct SequencePlan {
  std::vector<BuildInstance> warmup;  // shared chronological prefix
  std::vector<BuildInstance> pool;    // chronological post-warmup instances
  std::vector<StreamSequence> sequences;

  std::vector<BuildInstance> materialize(const StreamSequence& sequence) const {
    std::vector<BuildInstance> stream;
    stream.reserve(sequence.order.size());
    for (std::size_t idx : sequence.order) stream.push_back(pool.at(idx));
    return stream;
  }
};

// Chronological split of n instances into k groups; the first n mod k groups
// take one extra instance.
inline std::vector<std::size_t> sequence_group_sizes(std::size_t pool_size, std::size_t k) {
  std::vector<std::size_t> sizes(k, pool_size / k);
  for (std::size_t i = 0; i < pool_size % k; ++i) ++sizes[i];
  return sizes;
}

// Sequence j (1-based) puts group G_{k+1-j} first and the remaining groups
// after it in chronological order, so sequence k is the chronological pool.
inline SequencePlan make_sequences(const BuildDataset& dataset, std::size_t k,
                                   std::size_t warmup) {
  if (k == 0) raise(ErrorKind::PoolTooSmall, "sequence count must be positive");
  ReplaySplit split = replay_chronological(dataset, warmup);
  if (split.pool.size() < k) {
    raise(ErrorKind::PoolTooSmall, "pool of " + std::to_string(split.pool.size()) +
                                       " cannot form " + std::to_string(k) + " groups");
  }

  const std::vector<std::size_t> sizes = sequence_group_sizes(split.pool.size(), k);
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin, end) into pool
  groups.reserve(k);
  std::size_t offset = 0;
  for (std::size_t size : sizes) {
    groups.emplace_back(offset, offset + size);
    offset += size;
  }

  SequencePlan plan;
  plan.warmup = std::move(split.warmup);
  plan.pool = std::move(split.pool);
  plan.sequences.reserve(k);
  for (std::size_t j = 1; j <= k; ++j) {
    StreamSequence seq;
    seq.sequence_id = static_cast<int>(j);
    seq.order.reserve(plan.pool.size());
    const std::size_t lead = k - j;  // 0-based index of group G_{k+1-j}
    for (std::size_t i = groups[lead].first; i < groups[lead].second; ++i) seq.order.push_back(i);
    for (std::size_t g = 0; g < k; ++g) {
      if (g == lead) continue;
      for (std::size_t i = groups[g].first; i < groups[g].second; ++i) seq.order.push_back(i);
    }
    plan.sequences.push_back(std::move(seq));
  }
  return plan;
}

enum class WindowKind { FixedSliding, Jumping, Landmark };

// update_interval 1 is eager updating; larger intervals buffer arrivals and
// apply them in batches (lazy). Jumping windows replace their contents
// wholesale each interval, so the interval must exceed the window size.
struct WindowModel {
  WindowKind kind = WindowKind::FixedSliding;
  std::size_t size = 0;
  std::size_t update_interval = 1;

  void validate() const {
    if (update_interval == 0) raise(ErrorKind::ConfigError, "update_interval must be positive");
    if (kind != WindowKind::Landmark && size == 0) {
      raise(ErrorKind::ConfigError, "window size must be positive");
    }
    if (kind == WindowKind::Jumping && update_interval <= size) {
      raise(ErrorKind::ConfigError, "jumping window requires update_interval > size");
    }
  }
};

template <typename T>
class Window {
 public:
  explicit Window(WindowModel model) : model_(model) { model_.validate(); }

  void add(const T& element) {
    ++total_seen_;
    if (model_.kind == WindowKind::Landmark) {
      elements_.push_back(element);
      return;
    }
    pending_.push_back(element);
    if (pending_.size() < model_.update_interval) return;
    if (model_.kind == WindowKind::FixedSliding) {
      for (auto& p : pending_) elements_.push_back(std::move(p));
      while (elements_.size() > model_.size) elements_.pop_front();
    } else {  // Jumping: contents replaced wholesale
      elements_.clear();
      const std::size_t keep = std::min(model_.size, pending_.size());
      for (std::size_t i = pending_.size() - keep; i < pending_.size(); ++i) {
        elements_.push_back(std::move(pending_[i]));
      }
    }
    pending_.clear();
  }

  void add(std::span<const T> arrivals) {
    for (const T& element : arrivals) add(element);
  }

  const std::deque<T>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t total_seen() const { return total_seen_; }
  std::size_t landmark_start() const { return total_seen_ - elements_.size(); }
  const WindowModel& model() const { return model_; }

 private:
  WindowModel model_;
  std::deque<T> elements_;
  std::vector<T> pending_;
  std::size_t total_seen_ = 0;
};

template <typename T>
Window<T> window_update(Window<T> window, std::span<const T> arrivals) {
  window.add(arrivals);
  return window;
}

}  // namespace bsm
