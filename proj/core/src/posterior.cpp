#include "clustsum/posterior.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "clustsum/io.hpp"
#include "vi_kernel.hpp"

namespace clustsum {

DrawMatrix::DrawMatrix(std::vector<Partition> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw Error("draw matrix needs at least one draw");
  const std::size_t n = rows_.front().size();
  for (std::size_t m = 1; m < rows_.size(); ++m) {
    if (rows_[m].size() != n) {
      throw Error("ragged row " + std::to_string(m + 1) + ": expected " +
                  std::to_string(n) + " labels, got " +
                  std::to_string(rows_[m].size()));
    }
  }
}

std::vector<DrawMatrix::UniqueRow> DrawMatrix::unique_rows() const {
  std::unordered_map<Partition, std::size_t, PartitionHash> index;
  std::vector<UniqueRow> out;
  for (std::size_t m = 0; m < rows_.size(); ++m) {
    auto [it, inserted] = index.try_emplace(rows_[m], out.size());
    if (inserted) {
      out.push_back({m, 1});
    } else {
      ++out[it->second].count;
    }
  }
  return out;
}

DrawMatrix load_draws(std::istream& in) {
  std::vector<Partition> rows;
  std::string line;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (is_skippable_line(line)) continue;
    const std::size_t row = rows.size() + 1;
    std::vector<Label> labels;
    try {
      labels = parse_label_line(line);
    } catch (const Error& e) {
      throw Error("row " + std::to_string(row) + ": " + e.what());
    }
    if (rows.empty()) {
      expected = labels.size();
    } else if (labels.size() != expected) {
      throw Error("ragged row " + std::to_string(row) + ": expected " +
                  std::to_string(expected) + " labels, got " +
                  std::to_string(labels.size()));
    }
    rows.push_back(canonicalize(labels));
  }
  if (rows.empty()) throw Error("empty draw file");
  return DrawMatrix(std::move(rows));
}

DrawMatrix load_draws(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open draw file " + path.string());
  return load_draws(in);
}

void write_draws(std::ostream& out, const DrawMatrix& draws) {
  for (const auto& row : draws) out << format_partition(row) << '\n';
}

SimilarityMatrix::SimilarityMatrix(std::size_t n, std::vector<double> values)
    : n_(n), p_(std::move(values)) {
  if (p_.size() != n_ * n_) throw Error("similarity matrix must be N x N");
}

SimilarityMatrix similarity_matrix(const DrawMatrix& draws) {
  const std::size_t n = draws.num_items();
  std::vector<std::uint64_t> together(n * n, 0);
  for (const auto& u : draws.unique_rows()) {
    for (const auto& cluster : draws[u.first_index].clusters()) {
      for (std::size_t a = 0; a < cluster.size(); ++a) {
        for (std::size_t b = a + 1; b < cluster.size(); ++b) {
          together[cluster[a] * n + cluster[b]] += u.count;
        }
      }
    }
  }
  const double m = static_cast<double>(draws.num_draws());
  std::vector<double> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    p[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = static_cast<double>(together[i * n + j]) / m;
      p[i * n + j] = v;
      p[j * n + i] = v;
    }
  }
  return SimilarityMatrix(n, std::move(p));
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& psm) {
  for (std::size_t i = 0; i < psm.size(); ++i) {
    for (std::size_t j = 0; j < psm.size(); ++j) {
      if (j) out << ',';
      out << format_double(psm(i, j));
    }
    out << '\n';
  }
}

std::string_view to_string(Estimator estimator) {
  return estimator == Estimator::exact ? "exact" : "lb";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "exact") return Estimator::exact;
  if (name == "lb" || name == "lower-bound") return Estimator::lower_bound;
  throw Error("unknown estimator '" + std::string(name) + "'");
}

namespace {

void require_matching(const Partition& candidate, std::size_t n) {
  if (candidate.size() != n) {
    throw Error("dimension mismatch: candidate has " +
                std::to_string(candidate.size()) + " items, posterior has " +
                std::to_string(n));
  }
}

}  // namespace

double expected_binder(const Partition& candidate, const SimilarityMatrix& psm) {
  const std::size_t n = psm.size();
  require_matching(candidate, n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = psm.row(i);
    const Label li = candidate[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      s += candidate[j] == li ? 1.0 - row[j] : row[j];
    }
  }
  const double nd = static_cast<double>(n);
  return 2.0 * s / (nd * nd);
}

double expected_vi(const Partition& candidate, const DrawMatrix& draws) {
  const std::size_t n = draws.num_items();
  require_matching(candidate, n);
  const detail::XlogxTable f(n);
  detail::JointKernel joint;
  const double own = detail::sum_xlogx_sizes(candidate, f);
  double total = 0.0;
  for (const auto& u : draws.unique_rows()) {
    const auto& row = draws[u.first_index];
    const double v = detail::sum_xlogx_sizes(row, f) + own -
                     2.0 * joint(row, candidate, f);
    total += static_cast<double>(u.count) * std::max(v, 0.0);
  }
  return total / (static_cast<double>(n) * static_cast<double>(draws.num_draws()));
}

double expected_vi_lower(const Partition& candidate, const SimilarityMatrix& psm) {
  const std::size_t n = psm.size();
  require_matching(candidate, n);
  double first = 0.0;
  double second = 0.0;
  for (const auto& cluster : candidate.clusters()) {
    const double size_term = std::log2(static_cast<double>(cluster.size()));
    for (auto i : cluster) {
      const auto row = psm.row(i);
      double mass = 0.0;
      for (auto j : cluster) mass += row[j];
      first += size_term;
      second += std::log2(mass);
    }
  }
  return (first - 2.0 * second) / static_cast<double>(n);
}

PosteriorLoss::PosteriorLoss(const DrawMatrix& draws, MetricKind metric,
                             Estimator estimator)
    : draws_(&draws), metric_(metric), estimator_(estimator) {
  if (metric == MetricKind::binder && estimator == Estimator::lower_bound) {
    throw Error("the lower-bound estimator is only defined for the vi metric");
  }
  if (metric == MetricKind::binder || estimator == Estimator::lower_bound) {
    psm_.emplace(similarity_matrix(draws));
  }
}

double PosteriorLoss::operator()(const Partition& candidate) const {
  if (metric_ == MetricKind::binder) return expected_binder(candidate, *psm_);
  if (estimator_ == Estimator::lower_bound) {
    return expected_vi_lower(candidate, *psm_);
  }
  return expected_vi(candidate, *draws_);
}

namespace {

// Expected VI of every distinct draw against the whole posterior, sharing
// each pairwise contingency computation between the two rows involved.
std::vector<double> sampled_expected_vi(const DrawMatrix& draws,
                                        const std::vector<DrawMatrix::UniqueRow>& uniq) {
  const std::size_t n = draws.num_items();
  const detail::XlogxTable f(n);
  detail::JointKernel joint;
  std::vector<double> own(uniq.size());
  for (std::size_t u = 0; u < uniq.size(); ++u) {
    own[u] = detail::sum_xlogx_sizes(draws[uniq[u].first_index], f);
  }
  std::vector<double> acc(uniq.size(), 0.0);
  for (std::size_t u = 0; u < uniq.size(); ++u) {
    const auto& pu = draws[uniq[u].first_index];
    for (std::size_t v = u + 1; v < uniq.size(); ++v) {
      const auto& pv = draws[uniq[v].first_index];
      const double d = std::max(own[u] + own[v] - 2.0 * joint(pu, pv, f), 0.0);
      acc[u] += static_cast<double>(uniq[v].count) * d;
      acc[v] += static_cast<double>(uniq[u].count) * d;
    }
  }
  const double scale = static_cast<double>(n) * static_cast<double>(draws.num_draws());
  for (auto& a : acc) a /= scale;
  return acc;
}

}  // namespace

SampledOptimum best_sampled(const PosteriorLoss& loss) {
  const auto& draws = loss.draws();
  const auto uniq = draws.unique_rows();
  std::vector<double> values;
  if (loss.metric() == MetricKind::vi && loss.estimator() == Estimator::exact) {
    values = sampled_expected_vi(draws, uniq);
  } else {
    values.reserve(uniq.size());
    for (const auto& u : uniq) values.push_back(loss(draws[u.first_index]));
  }
  double best = std::numeric_limits<double>::infinity();
  for (double v : values) best = std::min(best, v);
  // unique_rows() is ordered by first appearance, so the first hit is the
  // earliest row.
  for (std::size_t u = 0; u < uniq.size(); ++u) {
    if (values[u] <= best + 1e-12) {
      const auto& p = draws[uniq[u].first_index];
      return {p, loss(p), uniq[u].first_index};
    }
  }
  throw Error("best_sampled: no finite loss");
}

SampledOptimum best_sampled(const DrawMatrix& draws, MetricKind metric,
                            Estimator estimator) {
  return best_sampled(PosteriorLoss(draws, metric, estimator));
}

}  // namespace clustsum
