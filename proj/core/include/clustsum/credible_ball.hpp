#pragma once

#include <cstddef>
#include <vector>

#include "clustsum/metrics.hpp"
#include "clustsum/posterior.hpp"

namespace clustsum {

// Smallest metric ball around `center` holding at least 1 - alpha of the
// empirical posterior mass. The radius is taken from the observed distances.
struct CredibleBall {
  Partition center;
  MetricKind metric;
  double alpha;
  double epsilon_star;
  // Row indices of draws with distance <= epsilon_star.
  std::vector<std::size_t> member_indices;
  double coverage;
  // Distance from the center to every draw, in row order.
  std::vector<double> distances;
};

// Throws Error unless 0 < alpha < 1 and the center matches the draws.
CredibleBall credible_ball(const Partition& center, const DrawMatrix& draws,
                           double alpha, MetricKind metric);

struct BoundPartition {
  Partition partition;
  double distance;
  // Number of draws equal to this partition.
  std::size_t frequency;
};

// Members of the ball that bound it in the lattice.
//  upper_vertical: fewest clusters, then farthest from the center.
//  lower_vertical: most clusters, then farthest from the center.
//  horizontal:     farthest from the center.
// Ties are all reported, ordered by frequency (descending) then labels.
struct BallBounds {
  std::vector<BoundPartition> upper_vertical;
  std::vector<BoundPartition> lower_vertical;
  std::vector<BoundPartition> horizontal;
};

BallBounds ball_bounds(const CredibleBall& ball, const DrawMatrix& draws);

}  // namespace clustsum
