#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clustsum/partition.hpp"

namespace clustsum {

// All information quantities are in bits. Binder's loss is the N-invariant
// form (2/N^2) * B, so both metrics only depend on the proportions n_ij / N.
enum class MetricKind { vi, binder };

std::string_view to_string(MetricKind metric);
// Accepts "vi" and "binder". Throws Error otherwise.
MetricKind parse_metric(std::string_view name);

double entropy(const Partition& c);
double mutual_information(const Partition& c, const Partition& d);
double vi(const Partition& c, const Partition& d);
double binder(const Partition& c, const Partition& d);
// Requires N >= 2.
double rand_index(const Partition& c, const Partition& d);

double distance(MetricKind metric, const Partition& c, const Partition& d);

// Largest possible distance between two partitions of n items, attained
// between the top and bottom elements.
double max_distance(MetricKind metric, std::size_t n);

// Pair categories when comparing an estimate with a reference partition.
enum PairClass : int {
  pair_neither = 0,         // apart in both
  pair_reference_only = 1,  // together only in the reference
  pair_both = 2,            // together in both
  pair_estimate_only = 3,   // together only in the estimate
};

// N x N row-major matrix of PairClass codes; the diagonal is pair_both.
std::vector<int> pair_classes(const Partition& estimate, const Partition& reference);

// Distance between a partition and the partition that merges two of its
// clusters of sizes (a, b). `n` is the total item count.
double merge_delta(std::int64_t a, std::int64_t b, std::int64_t n,
                   MetricKind metric);
// Distance between a partition and the partition that splits one of its
// clusters into parts of sizes (a, b).
double split_delta(std::int64_t a, std::int64_t b, std::int64_t n,
                   MetricKind metric);

// x * log2(x) with 0 log 0 = 0.
double xlog2x(double x);

enum class Direction { merge_up, split_down };

// A partition adjacent to a source partition in the Hasse diagram, together
// with the move that produces it.
struct NeighborCandidate {
  Partition partition;
  Direction direction;
  double delta;
  // merge_up: the two merged cluster labels of the source (first < second).
  Label first = -1;
  Label second = -1;
  // split_down: the source cluster `first` loses these items to a new cluster.
  std::vector<std::size_t> moved;
};

struct NeighborOptions {
  // Random subsets drawn for every split profile (m, n - m) with m >= 2.
  // Profiles with at most this many distinct subsets are enumerated fully.
  int random_splits = 5;
};

inline constexpr std::size_t kUnlimitedBudget = static_cast<std::size_t>(-1);

// Returns up to `budget` merge candidates (partitions covering c) followed by
// up to `budget` split candidates (partitions covered by c), each list sorted
// by (delta, label sequence). Split generation includes every single-item
// peel-off; coarser splits are sampled with a generator seeded by `seed`.
std::vector<NeighborCandidate> closest_neighbors(const Partition& c,
                                                 MetricKind metric,
                                                 std::size_t budget,
                                                 std::uint64_t seed,
                                                 NeighborOptions options = {});

}  // namespace clustsum
