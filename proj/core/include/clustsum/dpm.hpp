#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "clustsum/partition.hpp"
#include "clustsum/posterior.hpp"

namespace clustsum {

// N >= 2 finite observations of dimension D, row-major.
class Dataset {
 public:
  Dataset(std::size_t dim, std::vector<double> values);

  std::size_t size() const { return values_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t dim_;
  std::vector<double> values_;
};

// Numeric CSV, one observation per line. A non-numeric first line is taken
// as a header; '#' lines are skipped.
Dataset load_dataset_csv(std::istream& in);
Dataset load_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);

// Dirichlet-process mixture of diagonal normals. Each dimension has a
// conjugate normal / inverse-gamma base measure:
//   sigma^2 ~ IG(a, b),  mu | sigma^2 ~ N(mu0, sigma^2 / c).
// The DP mass parameter has a Gamma(shape, rate) hyperprior unless fixed.
struct SamplerConfig {
  std::vector<double> mu0;
  double c = 0.5;
  double a = 2.0;
  std::vector<double> b;
  double alpha_shape = 1.0;
  double alpha_rate = 1.0;
  // When set, the mass parameter stays at this value.
  std::optional<double> fixed_alpha;
  double initial_alpha = 1.0;
  // Total sweeps including burn-in; one draw is recorded per sweep after it.
  std::size_t iterations = 11000;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  bool random_scan = false;

  // Throws Error on invalid values or a dimension mismatch.
  void validate(std::size_t dim) const;
};

// mu0 = sample mean, b = sample variance (per dimension), c = 1/2, a = 2.
SamplerConfig empirical_config(const Dataset& data);
// mu0 = 0, b = 1 in every dimension, c = 1/2, a = 2.
SamplerConfig standard_config(std::size_t dim);

// Per-dimension constants of the normal / inverse-gamma base measure.
struct NigPrior {
  std::vector<double> mu0;
  std::vector<double> b;
  double c;
  double a;
  double lgamma_a;
  std::vector<double> a_log_b;

  explicit NigPrior(const SamplerConfig& config);
};

// Sufficient statistics of one cluster, kept relative to mu0.
class ClusterStats {
 public:
  explicit ClusterStats(std::shared_ptr<const NigPrior> prior);

  void add(std::span<const double> y);
  void remove(std::span<const double> y);
  std::size_t count() const { return count_; }

  // log m(cluster), the marginal likelihood with means and variances
  // integrated out. Zero for an empty cluster.
  double log_marginal() const { return log_marginal_; }
  // log m(cluster + y) - log m(cluster): the posterior predictive density.
  double log_predictive(std::span<const double> y) const;
  // log m(cluster) recomputed from the raw sums.
  double recompute_log_marginal() const;

 private:
  double evaluate(std::size_t n, std::span<const double> sum,
                  std::span<const double> sumsq) const;

  std::shared_ptr<const NigPrior> prior_;
  std::size_t count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sumsq_;
  double log_marginal_ = 0.0;
  mutable std::vector<double> tmp_sum_;
  mutable std::vector<double> tmp_sumsq_;
};

// Throws Error for an empty row set.
double log_marginal(const Dataset& data, std::span<const std::size_t> rows,
                    const SamplerConfig& config);

// log of the CRP prior probability of a partition with mass alpha.
double log_crp_prior(const Partition& p, double alpha);

// Collapsed single-site Gibbs sampler with auxiliary-variable updates of the
// mass parameter. The chain is sequential; run independent chains with
// distinct seeds for parallelism.
class GibbsSampler {
 public:
  GibbsSampler(const Dataset& data, const SamplerConfig& config);

  // One full sweep over all items, then a mass-parameter update.
  void sweep();
  Partition state() const;
  double alpha() const { return alpha_; }
  int num_clusters() const { return static_cast<int>(clusters_.size()); }

 private:
  void reassign(std::size_t item);
  void update_alpha();

  const Dataset* data_;
  SamplerConfig config_;
  std::shared_ptr<const NigPrior> prior_;
  std::mt19937_64 rng_;
  double alpha_;
  std::vector<int> assignment_;
  std::vector<ClusterStats> clusters_;
  std::vector<double> log_weights_;
  std::vector<double> log_singleton_;
  std::vector<std::size_t> order_;
};

struct SweepTrace {
  std::size_t sweep;
  int num_clusters;
  double alpha;
};

// Runs config.iterations sweeps and keeps the post-burn-in states. When
// `trace` is given it receives one entry per sweep, burn-in included.
DrawMatrix gibbs_run(const Dataset& data, const SamplerConfig& config,
                     std::vector<SweepTrace>* trace = nullptr);

enum class SimulatedExample { example1, example2 };

struct SimulatedData {
  Dataset data;
  Partition truth;
};

// n >= 4 draws from an equal-weight mixture of four bivariate normals centred at (+-2, +-2).
// example1: unit standard deviations. example2: 1 in the first and third
// quadrants, 0.5 in the second, 1.5 in the fourth.
SimulatedData simulate_example(SimulatedExample which, std::size_t n,
                               std::uint64_t seed);

// Velocities (km/s) of 82 galaxies in the Corona Borealis region.
Dataset galaxy_velocities();

}  // namespace clustsum
