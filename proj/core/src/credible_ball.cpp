#include "clustsum/credible_ball.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace clustsum {
namespace {

// Distances that differ by less than this are treated as the same stratum.
constexpr double kDistanceTolerance = 1e-12;

}  // namespace

CredibleBall credible_ball(const Partition& center, const DrawMatrix& draws,
                           double alpha, MetricKind metric) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  if (center.size() != draws.num_items()) {
    throw Error("dimension mismatch: center has " + std::to_string(center.size()) +
                " items, draws have " + std::to_string(draws.num_items()));
  }
  const std::size_t m = draws.num_draws();

  // Distances are computed once per distinct draw.
  std::vector<double> distances(m);
  std::unordered_map<Partition, double, PartitionHash> seen;
  for (std::size_t i = 0; i < m; ++i) {
    auto it = seen.find(draws[i]);
    if (it == seen.end()) {
      it = seen.emplace(draws[i], distance(metric, center, draws[i])).first;
    }
    distances[i] = it->second;
  }

  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());
  const double target = (1.0 - alpha) * static_cast<double>(m);
  // Smallest observed distance whose cumulative count reaches the target.
  std::size_t idx = 0;
  while (idx + 1 < m && static_cast<double>(idx + 1) < target - 1e-9) ++idx;
  const double eps = sorted[idx];

  CredibleBall ball{center, metric, alpha, eps, {}, 0.0, std::move(distances)};
  for (std::size_t i = 0; i < m; ++i) {
    if (ball.distances[i] <= eps + kDistanceTolerance) ball.member_indices.push_back(i);
  }
  ball.coverage = static_cast<double>(ball.member_indices.size()) / static_cast<double>(m);
  return ball;
}

BallBounds ball_bounds(const CredibleBall& ball, const DrawMatrix& draws) {
  if (ball.distances.size() != draws.num_draws()) {
    throw Error("ball_bounds: ball was computed from different draws");
  }
  // Distinct member partitions with their multiplicity.
  std::vector<BoundPartition> members;
  std::unordered_map<Partition, std::size_t, PartitionHash> index;
  for (auto i : ball.member_indices) {
    auto [it, inserted] = index.try_emplace(draws[i], members.size());
    if (inserted) {
      members.push_back({draws[i], ball.distances[i], 1});
    } else {
      ++members[it->second].frequency;
    }
  }

  auto farthest = [](std::vector<BoundPartition> pool) {
    double far = 0.0;
    for (const auto& b : pool) far = std::max(far, b.distance);
    std::erase_if(pool, [&](const BoundPartition& b) {
      return b.distance < far - kDistanceTolerance;
    });
    std::sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) {
      if (x.frequency != y.frequency) return x.frequency > y.frequency;
      return x.partition < y.partition;
    });
    return pool;
  };
  auto with_clusters = [&](int k) {
    std::vector<BoundPartition> pool;
    for (const auto& b : members) {
      if (b.partition.num_clusters() == k) pool.push_back(b);
    }
    return pool;
  };

  int k_min = members.front().partition.num_clusters();
  int k_max = k_min;
  for (const auto& b : members) {
    k_min = std::min(k_min, b.partition.num_clusters());
    k_max = std::max(k_max, b.partition.num_clusters());
  }
  return {farthest(with_clusters(k_min)), farthest(with_clusters(k_max)),
          farthest(members)};
}

}  // namespace clustsum
