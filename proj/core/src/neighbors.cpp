#include <algorithm>
#include <random>
#include <set>

#include "clustsum/metrics.hpp"

namespace clustsum {
namespace {

Partition apply_merge(const Partition& c, Label a, Label b) {
  std::vector<Label> labels(c.labels().begin(), c.labels().end());
  for (auto& l : labels) {
    if (l == b) l = a;
  }
  return canonicalize(labels);
}

Partition apply_split(const Partition& c, const std::vector<std::size_t>& moved) {
  std::vector<Label> labels(c.labels().begin(), c.labels().end());
  const Label fresh = c.num_clusters();
  for (auto i : moved) labels[i] = fresh;
  return canonicalize(labels);
}

// C(n, m), saturating at `cap` + 1.
std::uint64_t choose_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= m; ++i) {
    r = r * (n - m + i) / i;
    if (r > cap) return cap + 1;
  }
  return r;
}

void all_subsets(std::size_t n, std::size_t m,
                 std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = m;
    while (i-- > 0) {
      if (idx[i] != i + n - m) break;
      if (i == 0) return;
    }
    if (idx[i] == i + n - m) return;
    ++idx[i];
    for (std::size_t j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void random_subsets(std::size_t n, std::size_t m, int count,
                    std::mt19937_64& rng,
                    std::vector<std::vector<std::size_t>>& out) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> pool(n);
  const int max_attempts = 20 * count;
  for (int attempt = 0;
       attempt < max_attempts && static_cast<int>(seen.size()) < count;
       ++attempt) {
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<std::size_t> subset(pool.begin(), pool.begin() + m);
    std::sort(subset.begin(), subset.end());
    if (seen.insert(subset).second) out.push_back(std::move(subset));
  }
}

bool candidate_less(const NeighborCandidate& x, const NeighborCandidate& y) {
  if (x.delta != y.delta) return x.delta < y.delta;
  return x.partition < y.partition;
}

void rank_and_truncate(std::vector<NeighborCandidate>& list, std::size_t budget) {
  std::sort(list.begin(), list.end(), candidate_less);
  list.erase(std::unique(list.begin(), list.end(),
                         [](const auto& x, const auto& y) {
                           return x.partition == y.partition;
                         }),
             list.end());
  if (list.size() > budget) list.erase(list.begin() + static_cast<std::ptrdiff_t>(budget), list.end());
}

}  // namespace

std::vector<NeighborCandidate> closest_neighbors(const Partition& c,
                                                 MetricKind metric,
                                                 std::size_t budget,
                                                 std::uint64_t seed,
                                                 NeighborOptions options) {
  if (budget == 0) throw Error("candidate budget must be at least 1");
  const auto n = static_cast<std::int64_t>(c.size());
  const auto& sizes = c.sizes();
  const int k = c.num_clusters();

  std::vector<NeighborCandidate> merges;
  merges.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (Label a = 0; a < k; ++a) {
    for (Label b = a + 1; b < k; ++b) {
      merges.push_back({apply_merge(c, a, b), Direction::merge_up,
                        merge_delta(sizes[a], sizes[b], n, metric), a, b, {}});
    }
  }
  rank_and_truncate(merges, budget);

  std::mt19937_64 rng(seed);
  std::vector<NeighborCandidate> splits;
  const auto clusters = c.clusters();
  const auto cap = static_cast<std::uint64_t>(std::max(options.random_splits, 0));
  for (Label a = 0; a < k; ++a) {
    const auto& items = clusters[a];
    const std::size_t size = items.size();
    if (size < 2) continue;
    const double peel = split_delta(1, static_cast<std::int64_t>(size) - 1, n, metric);
    for (auto item : items) {
      splits.push_back({apply_split(c, {item}), Direction::split_down, peel, a, -1,
                        {item}});
    }
    for (std::size_t m = 2; m <= size / 2; ++m) {
      std::vector<std::vector<std::size_t>> subsets;
      if (choose_capped(size, m, cap) <= cap) {
        all_subsets(size, m, subsets);
      } else {
        random_subsets(size, m, options.random_splits, rng, subsets);
      }
      const double delta = split_delta(static_cast<std::int64_t>(m),
                                       static_cast<std::int64_t>(size - m), n,
                                       metric);
      for (const auto& subset : subsets) {
        std::vector<std::size_t> moved;
        moved.reserve(m);
        for (auto idx : subset) moved.push_back(items[idx]);
        auto p = apply_split(c, moved);
        splits.push_back({std::move(p), Direction::split_down, delta, a, -1,
                          std::move(moved)});
      }
    }
  }
  rank_and_truncate(splits, budget);

  std::vector<NeighborCandidate> out;
  out.reserve(merges.size() + splits.size());
  std::move(merges.begin(), merges.end(), std::back_inserter(out));
  std::move(splits.begin(), splits.end(), std::back_inserter(out));
  return out;
}

}  // namespace clustsum
