#include "clustsum/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace clustsum {

std::string_view to_string(InitMode mode) {
  switch (mode) {
    case InitMode::best_sampled:
      return "best";
    case InitMode::last_draw:
      return "last";
    case InitMode::explicit_partition:
      return "explicit";
  }
  return "best";
}

std::size_t default_budget(int num_clusters) {
  const auto k = static_cast<std::size_t>(std::max(num_clusters, 1));
  return std::min<std::size_t>(2 * k * k, 200);
}

namespace {

constexpr double kImprovementTolerance = 1e-12;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename Score>
CandidateChoice choose(std::span<const NeighborCandidate> candidates, Score&& score) {
  if (candidates.empty()) throw Error("evaluate_candidates: no candidates");
  std::vector<double> losses;
  losses.reserve(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    losses.push_back(score(c));
    best = std::min(best, losses.back());
  }
  std::size_t pick = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (losses[i] > best + kImprovementTolerance) continue;
    if (pick == candidates.size() || candidates[i].partition < candidates[pick].partition) {
      pick = i;
    }
  }
  return {candidates[pick].partition, losses[pick]};
}

// Memoized from-scratch scoring through a PosteriorLoss.
class CachedScorer {
 public:
  explicit CachedScorer(const PosteriorLoss& loss) : loss_(loss) {}

  double operator()(const Partition& p) {
    auto it = cache_.find(p);
    if (it != cache_.end()) return it->second;
    const double v = loss_(p);
    cache_.emplace(p, v);
    return v;
  }

 private:
  const PosteriorLoss& loss_;
  std::unordered_map<Partition, double, PartitionHash> cache_;
};

}  // namespace

CandidateChoice evaluate_candidates(const Partition& current,
                                    std::span<const NeighborCandidate> candidates,
                                    const PosteriorLoss& loss) {
  for (const auto& c : candidates) require_same_size(current, c.partition);
  return choose(candidates, [&](const NeighborCandidate& c) { return loss(c.partition); });
}

CandidateChoice evaluate_candidates(const Partition& current,
                                    std::span<const NeighborCandidate> candidates,
                                    const DrawMatrix& draws,
                                    const SearchConfig& config) {
  const PosteriorLoss loss(draws, config.metric, config.estimator);
  return evaluate_candidates(current, candidates, loss);
}

SearchResult greedy_search(const DrawMatrix& draws, const SearchConfig& config) {
  if (config.max_iters < 1) throw Error("max_iters must be at least 1");
  if (config.budget && *config.budget < 1) throw Error("budget l must be at least 1");
  const PosteriorLoss loss(draws, config.metric, config.estimator);

  std::optional<Partition> start;
  switch (config.init) {
    case InitMode::best_sampled:
      start = best_sampled(loss).partition;
      break;
    case InitMode::last_draw:
      start = draws.rows().back();
      break;
    case InitMode::explicit_partition:
      if (!config.initial) throw Error("explicit initialization needs a partition");
      if (config.initial->size() != draws.num_items()) {
        throw Error("dimension mismatch: initial partition has " +
                    std::to_string(config.initial->size()) + " items, draws have " +
                    std::to_string(draws.num_items()));
      }
      start = *config.initial;
      break;
  }

  const bool tracked =
      config.metric == MetricKind::vi && config.estimator == Estimator::exact;
  std::optional<ExactViTracker> tracker;
  CachedScorer cached(loss);
  if (tracked) tracker.emplace(draws);

  Partition current = *start;
  double current_loss;
  if (tracked) {
    tracker->reset(current);
    current_loss = tracker->current_loss();
  } else {
    current_loss = cached(current);
  }

  SearchResult result{current, current_loss, 0, {{current, current_loss}}};
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    result.iterations_used = it + 1;
    const std::size_t l = config.budget.value_or(default_budget(current.num_clusters()));
    const auto candidates = closest_neighbors(
        current, config.metric, l, splitmix64(config.seed ^ splitmix64(it)),
        config.neighbors);
    if (candidates.empty()) break;
    const auto best =
        tracked ? choose(candidates,
                         [&](const NeighborCandidate& c) { return tracker->loss_after(c); })
                : choose(candidates,
                         [&](const NeighborCandidate& c) { return cached(c.partition); });
    if (!(best.loss < current_loss - kImprovementTolerance)) break;
    current = best.partition;
    if (tracked) {
      tracker->reset(current);
      current_loss = tracker->current_loss();
    } else {
      current_loss = best.loss;
    }
    result.trajectory.push_back({current, current_loss});
  }
  result.optimum = current;
  result.expected_loss = current_loss;
  return result;
}

ExactViTracker::ExactViTracker(const DrawMatrix& draws)
    : draws_(&draws), unique_(draws.unique_rows()), xlogx_(draws.num_items() + 1, 0.0) {
  for (std::size_t x = 2; x < xlogx_.size(); ++x) {
    xlogx_[x] = static_cast<double>(x) * std::log2(static_cast<double>(x));
  }
  double total = 0.0;
  int max_k = 0;
  for (const auto& u : unique_) {
    const auto& row = draws[u.first_index];
    double s = 0.0;
    for (int size : row.sizes()) s += xlogx_[size];
    total += static_cast<double>(u.count) * s;
    max_k = std::max(max_k, row.num_clusters());
  }
  mean_draw_term_ = total / static_cast<double>(draws.num_draws());
  scratch_.assign(static_cast<std::size_t>(max_k), 0);
}

void ExactViTracker::reset(const Partition& current) {
  require_same_size(current, (*draws_)[0]);
  current_ = current;
  columns_ = static_cast<std::size_t>(current.num_clusters());
  own_ = 0.0;
  for (int size : current.sizes()) own_ += xlogx_[size];

  offsets_.assign(unique_.size() * (columns_ + 1), 0);
  cells_.clear();
  joint_total_ = 0.0;
  std::vector<std::int32_t> dense;
  std::vector<std::size_t> nonzero;
  const auto labels = current.labels();
  for (std::size_t u = 0; u < unique_.size(); ++u) {
    const auto& row = (*draws_)[unique_[u].first_index];
    const auto rows = static_cast<std::size_t>(row.num_clusters());
    // Column-major dense table so that walking it emits cells grouped by
    // current cluster.
    dense.assign(rows * columns_, 0);
    for (std::size_t n = 0; n < labels.size(); ++n) {
      ++dense[static_cast<std::size_t>(labels[n]) * rows + row[n]];
    }
    double joint = 0.0;
    std::size_t* off = &offsets_[u * (columns_ + 1)];
    for (std::size_t j = 0; j < columns_; ++j) {
      off[j] = cells_.size();
      for (std::size_t i = 0; i < rows; ++i) {
        const auto c = dense[j * rows + i];
        if (c == 0) continue;
        cells_.push_back({static_cast<Label>(i), c});
        joint += xlogx_[c];
      }
    }
    off[columns_] = cells_.size();
    joint_total_ += static_cast<double>(unique_[u].count) * joint;
  }
}

double ExactViTracker::loss_with(double own, double joint_total) const {
  const double m = static_cast<double>(draws_->num_draws());
  const double n = static_cast<double>(draws_->num_items());
  return std::max((mean_draw_term_ + own - 2.0 * joint_total / m) / n, 0.0);
}

double ExactViTracker::current_loss() const {
  if (!current_) throw Error("ExactViTracker: reset() has not been called");
  return loss_with(own_, joint_total_);
}

std::int32_t ExactViTracker::lookup(std::size_t u, Label column, Label row) const {
  const std::size_t* off = &offsets_[u * (columns_ + 1)];
  for (std::size_t c = off[column]; c < off[column + 1]; ++c) {
    if (cells_[c].row == row) return cells_[c].count;
  }
  return 0;
}

double ExactViTracker::loss_after(const NeighborCandidate& move) const {
  if (!current_) throw Error("ExactViTracker: reset() has not been called");
  const auto& sizes = current_->sizes();
  const auto& f = xlogx_;
  double delta_joint = 0.0;
  double own = own_;

  if (move.direction == Direction::merge_up) {
    const Label a = move.first;
    const Label b = move.second;
    own += f[sizes[a] + sizes[b]] - f[sizes[a]] - f[sizes[b]];
    for (std::size_t u = 0; u < unique_.size(); ++u) {
      const std::size_t* off = &offsets_[u * (columns_ + 1)];
      for (std::size_t c = off[b]; c < off[b + 1]; ++c) {
        scratch_[cells_[c].row] = cells_[c].count;
      }
      double d = 0.0;
      for (std::size_t c = off[a]; c < off[a + 1]; ++c) {
        const auto tb = scratch_[cells_[c].row];
        if (tb == 0) continue;
        const auto ta = cells_[c].count;
        d += f[ta + tb] - f[ta] - f[tb];
      }
      for (std::size_t c = off[b]; c < off[b + 1]; ++c) scratch_[cells_[c].row] = 0;
      delta_joint += static_cast<double>(unique_[u].count) * d;
    }
  } else {
    const Label a = move.first;
    const auto moved = static_cast<std::int32_t>(move.moved.size());
    own += f[moved] + f[sizes[a] - moved] - f[sizes[a]];
    for (std::size_t u = 0; u < unique_.size(); ++u) {
      const auto& row = (*draws_)[unique_[u].first_index];
      touched_.clear();
      for (auto item : move.moved) {
        const Label i = row[item];
        if (scratch_[i]++ == 0) touched_.push_back(i);
      }
      double d = 0.0;
      for (Label i : touched_) {
        const auto s = scratch_[i];
        const auto t = lookup(u, a, i);
        d += f[s] + f[t - s] - f[t];
        scratch_[i] = 0;
      }
      delta_joint += static_cast<double>(unique_[u].count) * d;
    }
  }
  return loss_with(own, joint_total_ + delta_joint);
}

}  // namespace clustsum
