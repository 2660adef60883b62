#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clustsum/metrics.hpp"
#include "clustsum/posterior.hpp"

namespace clustsum {

enum class InitMode { best_sampled, last_draw, explicit_partition };

std::string_view to_string(InitMode mode);

struct SearchConfig {
  MetricKind metric = MetricKind::vi;
  Estimator estimator = Estimator::exact;
  // Candidates per direction (l). Unset means default_budget(k) of the
  // current partition at every step.
  std::optional<std::size_t> budget;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 0;
  InitMode init = InitMode::best_sampled;
  // Required when init == explicit_partition.
  std::optional<Partition> initial;
  NeighborOptions neighbors;
};

// 2 k^2 capped at 200.
std::size_t default_budget(int num_clusters);

struct TrajectoryStep {
  Partition partition;
  double loss;
};

struct SearchResult {
  Partition optimum;
  double expected_loss;
  std::size_t iterations_used;
  // Starts at the initialization; losses strictly decrease.
  std::vector<TrajectoryStep> trajectory;
};

struct CandidateChoice {
  Partition partition;
  double loss;
};

// Minimum-loss candidate; losses within 1e-12 of the minimum are broken by
// the lexicographically smallest label sequence. Throws on an empty list.
CandidateChoice evaluate_candidates(const Partition& current,
                                    std::span<const NeighborCandidate> candidates,
                                    const PosteriorLoss& loss);
CandidateChoice evaluate_candidates(const Partition& current,
                                    std::span<const NeighborCandidate> candidates,
                                    const DrawMatrix& draws,
                                    const SearchConfig& config);

SearchResult greedy_search(const DrawMatrix& draws, const SearchConfig& config);

// Exact posterior expected VI around a current partition. Keeps the
// contingency table of every distinct draw against the current partition so
// that a merge or split candidate is scored from the changed cells only.
// Not thread-safe: scoring reuses internal scratch buffers.
class ExactViTracker {
 public:
  explicit ExactViTracker(const DrawMatrix& draws);

  void reset(const Partition& current);
  const Partition& current() const { return *current_; }
  double current_loss() const;
  // Expected VI of move.partition, computed from the move description.
  double loss_after(const NeighborCandidate& move) const;

 private:
  struct Cell {
    Label row;
    std::int32_t count;
  };

  double loss_with(double own, double joint_total) const;
  std::int32_t lookup(std::size_t u, Label column, Label row) const;

  const DrawMatrix* draws_;
  std::vector<DrawMatrix::UniqueRow> unique_;
  std::vector<double> xlogx_;
  double mean_draw_term_ = 0.0;
  std::optional<Partition> current_;
  double own_ = 0.0;
  double joint_total_ = 0.0;
  std::size_t columns_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Cell> cells_;
  mutable std::vector<std::int32_t> scratch_;
  mutable std::vector<Label> touched_;
};

}  // namespace clustsum
