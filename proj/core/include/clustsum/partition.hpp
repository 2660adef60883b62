#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "clustsum/error.hpp"

namespace clustsum {

using Label = int;

// A set partition of N items stored as a canonical label sequence: the first
// item carries label 0 and every new label is one greater than the largest
// label seen so far. Two partitions compare equal iff they group the same
// items together.
class Partition {
 public:
  // Canonicalizes `raw`. Throws Error("empty partition") when raw is empty.
  static Partition from_labels(std::span<const Label> raw);

  // The partition with every item in one cluster (the top element).
  static Partition one(std::size_t n);
  // The partition with every item in its own cluster (the bottom element).
  static Partition zero(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  int num_clusters() const { return static_cast<int>(sizes_.size()); }
  std::span<const Label> labels() const { return labels_; }
  const std::vector<int>& sizes() const { return sizes_; }
  Label operator[](std::size_t i) const { return labels_[i]; }

  // Item indices of every cluster, in label order.
  std::vector<std::vector<std::size_t>> clusters() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a,
                                          const Partition& b) {
    return a.labels_ <=> b.labels_;
  }

 private:
  // Takes labels already in canonical form.
  explicit Partition(std::vector<Label> canonical);

  std::vector<Label> labels_;
  std::vector<int> sizes_;

  template <typename T>
  friend Partition canonicalize(std::span<const T> raw);
  friend class PartitionEnumerator;
};

// Relabels `raw` by first occurrence. Works for any hashable label domain.
template <typename T>
Partition canonicalize(std::span<const T> raw) {
  if (raw.empty()) throw Error("empty partition");
  std::unordered_map<T, Label> seen;
  std::vector<Label> labels;
  labels.reserve(raw.size());
  for (const T& value : raw) {
    auto [it, inserted] = seen.try_emplace(value, static_cast<Label>(seen.size()));
    labels.push_back(it->second);
  }
  return Partition(std::move(labels));
}

template <typename T>
Partition canonicalize(const std::vector<T>& raw) {
  return canonicalize(std::span<const T>(raw));
}

template <typename T>
Partition canonicalize(std::initializer_list<T> raw) {
  return canonicalize(std::span<const T>(raw.begin(), raw.size()));
}

struct PartitionHash {
  std::size_t operator()(const Partition& p) const noexcept;
};

// Counts n_ij of items in cluster i of the first partition and cluster j of
// the second. Stored dense, row-major.
struct ContingencyTable {
  int rows = 0;
  int cols = 0;
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t total = 0;

  std::int64_t at(int i, int j) const {
    return counts[static_cast<std::size_t>(i) * cols + j];
  }
};

ContingencyTable contingency(const Partition& c, const Partition& d);

// Greatest lower bound: items together iff together in both.
Partition meet(const Partition& c, const Partition& d);
// Least upper bound: connected components of the union of co-clustering.
Partition join(const Partition& c, const Partition& d);
// True iff every cluster of c lies inside a cluster of d.
bool leq(const Partition& c, const Partition& d);
// True iff d is obtained from c by merging exactly two clusters.
bool covers(const Partition& d, const Partition& c);

// Throws Error when the two partitions do not cover the same item count.
void require_same_size(const Partition& c, const Partition& d);

inline constexpr std::size_t kDefaultEnumerationCap = 12;

// Streams every partition of n items as restricted-growth strings in
// lexicographic order, starting from the top element.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t n,
                               std::size_t cap = kDefaultEnumerationCap);
  std::optional<Partition> next();

 private:
  std::vector<Label> current_;
  std::vector<Label> prefix_max_;
  bool done_ = false;
  bool started_ = false;
};

std::vector<Partition> enumerate_partitions(
    std::size_t n, std::size_t cap = kDefaultEnumerationCap);

}  // namespace clustsum
