#pragma once

// Internal helpers shared by the expected-VI evaluators.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "clustsum/partition.hpp"

namespace clustsum::detail {

// Lookup table of f(x) = x log2 x for integer x in [0, n].
class XlogxTable {
 public:
  explicit XlogxTable(std::size_t n) : values_(n + 1, 0.0) {
    for (std::size_t x = 2; x <= n; ++x) {
      values_[x] = static_cast<double>(x) * std::log2(static_cast<double>(x));
    }
  }
  double operator()(std::int64_t x) const { return values_[x]; }

 private:
  std::vector<double> values_;
};

inline double sum_xlogx_sizes(const Partition& p, const XlogxTable& f) {
  double s = 0.0;
  for (int size : p.sizes()) s += f(size);
  return s;
}

// Sum over the nonzero contingency cells of f(n_ij), reusing scratch buffers.
class JointKernel {
 public:
  double operator()(const Partition& a, const Partition& b, const XlogxTable& f) {
    const auto cols = static_cast<std::size_t>(b.num_clusters());
    const std::size_t cells = static_cast<std::size_t>(a.num_clusters()) * cols;
    if (counts_.size() < cells) counts_.resize(cells, 0);
    touched_.clear();
    const auto la = a.labels();
    const auto lb = b.labels();
    for (std::size_t n = 0; n < la.size(); ++n) {
      const std::size_t cell = static_cast<std::size_t>(la[n]) * cols + lb[n];
      if (counts_[cell]++ == 0) touched_.push_back(cell);
    }
    double s = 0.0;
    for (auto cell : touched_) {
      s += f(counts_[cell]);
      counts_[cell] = 0;
    }
    return s;
  }

 private:
  std::vector<std::int32_t> counts_;
  std::vector<std::size_t> touched_;
};

}  // namespace clustsum::detail
