#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "clustsum/metrics.hpp"
#include "clustsum/partition.hpp"

namespace clustsum {

// M posterior draws over the same N items, one canonical partition per row.
class DrawMatrix {
 public:
  explicit DrawMatrix(std::vector<Partition> rows);

  std::size_t num_draws() const { return rows_.size(); }
  std::size_t num_items() const { return rows_.front().size(); }
  const Partition& operator[](std::size_t m) const { return rows_[m]; }
  const std::vector<Partition>& rows() const { return rows_; }
  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }

  struct UniqueRow {
    std::size_t first_index;
    std::size_t count;
  };
  // Distinct partitions in order of first appearance, with multiplicities.
  std::vector<UniqueRow> unique_rows() const;

 private:
  std::vector<Partition> rows_;
};

// Draw file: one draw per line, comma-separated integer labels; blank lines
// and lines starting with '#' are skipped.
DrawMatrix load_draws(std::istream& in);
DrawMatrix load_draws(const std::filesystem::path& path);
void write_draws(std::ostream& out, const DrawMatrix& draws);

// Posterior co-clustering probabilities p_nn' estimated from the draws.
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::size_t n, std::vector<double> values);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {p_.data() + i * n_, n_};
  }

 private:
  std::size_t n_;
  std::vector<double> p_;
};

SimilarityMatrix similarity_matrix(const DrawMatrix& draws);
// N rows of N comma-separated values printed with 17 significant digits.
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& psm);

enum class Estimator { exact, lower_bound };

std::string_view to_string(Estimator estimator);
// Accepts "exact" and "lb" (or "lower-bound").
Estimator parse_estimator(std::string_view name);

// E[B~(c, candidate) | D], exact given the similarity matrix.
double expected_binder(const Partition& candidate, const SimilarityMatrix& psm);
// Empirical mean of vi(c^m, candidate) over all draws.
double expected_vi(const Partition& candidate, const DrawMatrix& draws);
// Jensen lower bound on expected_vi that depends on the posterior only
// through the similarity matrix.
double expected_vi_lower(const Partition& candidate, const SimilarityMatrix& psm);

// Posterior expected loss of candidate partitions under one metric and
// estimator. Builds the similarity matrix once when the estimator needs it.
class PosteriorLoss {
 public:
  // Throws Error for lower_bound with the Binder metric.
  PosteriorLoss(const DrawMatrix& draws, MetricKind metric, Estimator estimator);

  double operator()(const Partition& candidate) const;

  MetricKind metric() const { return metric_; }
  Estimator estimator() const { return estimator_; }
  const DrawMatrix& draws() const { return *draws_; }
  // Present for Binder and for the lower-bound estimator.
  const SimilarityMatrix* similarity() const {
    return psm_ ? &*psm_ : nullptr;
  }

 private:
  const DrawMatrix* draws_;
  MetricKind metric_;
  Estimator estimator_;
  std::optional<SimilarityMatrix> psm_;
};

struct SampledOptimum {
  Partition partition;
  double loss;
  std::size_t row;
};

// The draw minimizing the posterior expected loss; ties (within 1e-12) go to
// the earliest row.
SampledOptimum best_sampled(const DrawMatrix& draws, MetricKind metric,
                            Estimator estimator);
SampledOptimum best_sampled(const PosteriorLoss& loss);

}  // namespace clustsum
