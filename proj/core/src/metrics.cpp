#include "clustsum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clustsum {

std::string_view to_string(MetricKind metric) {
  return metric == MetricKind::vi ? "vi" : "binder";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "vi") return MetricKind::vi;
  if (name == "binder") return MetricKind::binder;
  throw Error("unknown metric '" + std::string(name) + "'");
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

namespace {

double sum_xlog2x(const std::vector<std::int64_t>& counts) {
  double s = 0.0;
  for (auto v : counts) s += xlog2x(static_cast<double>(v));
  return s;
}

std::int64_t sum_squares(const std::vector<std::int64_t>& counts) {
  std::int64_t s = 0;
  for (auto v : counts) s += v * v;
  return s;
}

// Number of item pairs on which c and d disagree (Binder's B with unit costs).
std::int64_t disagreeing_pairs(const ContingencyTable& t) {
  // B = (sum n_i+^2 + sum n_+j^2 - 2 sum n_ij^2) / 2
  return (sum_squares(t.row_sums) + sum_squares(t.col_sums) -
          2 * sum_squares(t.counts)) / 2;
}

}  // namespace

double entropy(const Partition& c) {
  const double n = static_cast<double>(c.size());
  double h = 0.0;
  for (int s : c.sizes()) {
    const double p = s / n;
    h -= p * std::log2(p);
  }
  return h;
}

double mutual_information(const Partition& c, const Partition& d) {
  const auto t = contingency(c, d);
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j) {
      const auto nij = t.at(i, j);
      if (nij == 0) continue;
      mi += (nij / n) *
            std::log2(nij * n / (static_cast<double>(t.row_sums[i]) *
                                 static_cast<double>(t.col_sums[j])));
    }
  }
  return std::max(mi, 0.0);
}

double vi(const Partition& c, const Partition& d) {
  // N * VI = sum f(n_i+) + sum f(n_+j) - 2 sum f(n_ij), f(x) = x log2 x.
  // Equal to H(c) + H(d) - 2 I(c, d) and exactly zero for identical tables.
  const auto t = contingency(c, d);
  const double v = sum_xlog2x(t.row_sums) + sum_xlog2x(t.col_sums) -
                   2.0 * sum_xlog2x(t.counts);
  return std::max(v / static_cast<double>(t.total), 0.0);
}

double binder(const Partition& c, const Partition& d) {
  const auto t = contingency(c, d);
  const double n = static_cast<double>(t.total);
  return 2.0 * static_cast<double>(disagreeing_pairs(t)) / (n * n);
}

double rand_index(const Partition& c, const Partition& d) {
  require_same_size(c, d);
  if (c.size() < 2) throw Error("rand index needs at least two items");
  const auto t = contingency(c, d);
  const auto n = t.total;
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  return 1.0 - static_cast<double>(disagreeing_pairs(t)) / pairs;
}

double distance(MetricKind metric, const Partition& c, const Partition& d) {
  return metric == MetricKind::vi ? vi(c, d) : binder(c, d);
}

double max_distance(MetricKind metric, std::size_t n) {
  const double nd = static_cast<double>(n);
  return metric == MetricKind::vi ? std::log2(nd) : 1.0 - 1.0 / nd;
}

std::vector<int> pair_classes(const Partition& estimate, const Partition& reference) {
  require_same_size(estimate, reference);
  const std::size_t n = estimate.size();
  std::vector<int> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool e = estimate[i] == estimate[j];
      const bool r = reference[i] == reference[j];
      out[i * n + j] = e ? (r ? pair_both : pair_estimate_only)
                         : (r ? pair_reference_only : pair_neither);
    }
  }
  return out;
}

double merge_delta(std::int64_t a, std::int64_t b, std::int64_t n,
                   MetricKind metric) {
  const double nd = static_cast<double>(n);
  if (metric == MetricKind::binder) {
    return 2.0 * static_cast<double>(a * b) / (nd * nd);
  }
  return (xlog2x(static_cast<double>(a + b)) - xlog2x(static_cast<double>(a)) -
          xlog2x(static_cast<double>(b))) / nd;
}

double split_delta(std::int64_t a, std::int64_t b, std::int64_t n,
                   MetricKind metric) {
  // A split is the inverse move of a merge and the metrics are symmetric.
  return merge_delta(a, b, n, metric);
}

}  // namespace clustsum
