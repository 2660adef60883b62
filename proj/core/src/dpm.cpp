#include "clustsum/dpm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "clustsum/error.hpp"
#include "clustsum/io.hpp"

namespace clustsum {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Comma or whitespace separated doubles; nullopt if any field is not numeric.
std::optional<std::vector<double>> parse_numeric_row(std::string_view line) {
  std::vector<double> out;
  std::string field;
  std::string text(line);
  for (char& ch : text) {
    if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
  }
  std::istringstream ss(text);
  while (ss >> field) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || !std::isfinite(v)) return std::nullopt;
    out.push_back(v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

Dataset::Dataset(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  if (dim_ == 0) throw Error("dataset dimension must be positive");
  if (values_.empty()) throw Error("empty dataset");
  if (values_.size() % dim_ != 0) throw Error("dataset values do not fill whole rows");
  if (values_.size() / dim_ < 2) throw Error("dataset needs at least two observations");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("dataset values must be finite");
  }
}

Dataset load_dataset_csv(std::istream& in) {
  std::string line;
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t row = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (is_skippable_line(line)) continue;
    auto parsed = parse_numeric_row(trim(line));
    if (!parsed) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error("data row " + std::to_string(row + 1) + ": non-numeric value");
    }
    first = false;
    ++row;
    if (dim == 0) dim = parsed->size();
    if (parsed->size() != dim) {
      throw Error("ragged data row " + std::to_string(row) + ": expected " +
                  std::to_string(dim) + " values, got " + std::to_string(parsed->size()));
    }
    values.insert(values.end(), parsed->begin(), parsed->end());
  }
  if (values.empty()) throw Error("empty data file");
  return Dataset(dim, std::move(values));
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    for (std::size_t d = 0; d < r.size(); ++d) {
      if (d) out << ',';
      out << format_double(r[d]);
    }
    out << '\n';
  }
}

void SamplerConfig::validate(std::size_t dim) const {
  if (mu0.size() != dim || b.size() != dim) {
    throw Error("prior dimension mismatch: data has " + std::to_string(dim) +
                " dimensions, mu0 has " + std::to_string(mu0.size()) + ", b has " +
                std::to_string(b.size()));
  }
  if (!(c > 0.0) || !(a > 0.0)) throw Error("prior c and a must be positive");
  for (double v : b) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("prior b must be positive");
  }
  for (double v : mu0) {
    if (!std::isfinite(v)) throw Error("prior mu0 must be finite");
  }
  if (fixed_alpha) {
    if (!(*fixed_alpha > 0.0)) throw Error("alpha must be positive");
  } else {
    if (!(alpha_shape > 0.0) || !(alpha_rate > 0.0)) {
      throw Error("alpha hyperprior shape and rate must be positive");
    }
    if (!(initial_alpha > 0.0)) throw Error("initial alpha must be positive");
  }
  if (iterations <= burn_in) throw Error("iterations must exceed burn-in");
}

SamplerConfig empirical_config(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();
  SamplerConfig config;
  config.mu0.assign(dim, 0.0);
  config.b.assign(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) config.mu0[d] += data.row(i)[d];
  }
  for (double& m : config.mu0) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double z = data.row(i)[d] - config.mu0[d];
      config.b[d] += z * z;
    }
  }
  for (double& v : config.b) {
    v /= static_cast<double>(n - 1);
    if (!(v > 0.0)) throw Error("empirical prior: a dimension has zero variance");
  }
  return config;
}

SamplerConfig standard_config(std::size_t dim) {
  SamplerConfig config;
  config.mu0.assign(dim, 0.0);
  config.b.assign(dim, 1.0);
  return config;
}

NigPrior::NigPrior(const SamplerConfig& config)
    : mu0(config.mu0), b(config.b), c(config.c), a(config.a), lgamma_a(std::lgamma(config.a)) {
  a_log_b.reserve(b.size());
  for (double v : b) a_log_b.push_back(a * std::log(v));
}

ClusterStats::ClusterStats(std::shared_ptr<const NigPrior> prior)
    : prior_(std::move(prior)),
      sum_(prior_->mu0.size(), 0.0),
      sumsq_(prior_->mu0.size(), 0.0),
      tmp_sum_(prior_->mu0.size()),
      tmp_sumsq_(prior_->mu0.size()) {}

double ClusterStats::evaluate(std::size_t n, std::span<const double> sum,
                              std::span<const double> sumsq) const {
  if (n == 0) return 0.0;
  const auto& p = *prior_;
  const double nn = static_cast<double>(n);
  const double cn = p.c + nn;
  const double an = p.a + 0.5 * nn;
  double out = 0.0;
  for (std::size_t d = 0; d < sum.size(); ++d) {
    const double scatter = std::max(sumsq[d] - sum[d] * sum[d] / cn, 0.0);
    const double bn = p.b[d] + 0.5 * scatter;
    out += 0.5 * std::log(p.c / cn) + p.a_log_b[d] - an * std::log(bn);
  }
  const double dims = static_cast<double>(sum.size());
  out += dims * (std::lgamma(an) - p.lgamma_a - 0.5 * nn * kLog2Pi);
  return out;
}

void ClusterStats::add(std::span<const double> y) {
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double z = y[d] - prior_->mu0[d];
    sum_[d] += z;
    sumsq_[d] += z * z;
  }
  ++count_;
  log_marginal_ = evaluate(count_, sum_, sumsq_);
}

void ClusterStats::remove(std::span<const double> y) {
  if (count_ == 0) throw Error("ClusterStats::remove on an empty cluster");
  --count_;
  if (count_ == 0) {
    std::fill(sum_.begin(), sum_.end(), 0.0);
    std::fill(sumsq_.begin(), sumsq_.end(), 0.0);
    log_marginal_ = 0.0;
    return;
  }
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double z = y[d] - prior_->mu0[d];
    sum_[d] -= z;
    sumsq_[d] -= z * z;
  }
  log_marginal_ = evaluate(count_, sum_, sumsq_);
}

double ClusterStats::log_predictive(std::span<const double> y) const {
  for (std::size_t d = 0; d < y.size(); ++d) {
    const double z = y[d] - prior_->mu0[d];
    tmp_sum_[d] = sum_[d] + z;
    tmp_sumsq_[d] = sumsq_[d] + z * z;
  }
  return evaluate(count_ + 1, tmp_sum_, tmp_sumsq_) - log_marginal_;
}

double ClusterStats::recompute_log_marginal() const {
  return evaluate(count_, sum_, sumsq_);
}

double log_marginal(const Dataset& data, std::span<const std::size_t> rows,
                    const SamplerConfig& config) {
  if (rows.empty()) throw Error("log_marginal: empty cluster");
  config.validate(data.dim());
  ClusterStats stats(std::make_shared<NigPrior>(config));
  for (auto r : rows) {
    if (r >= data.size()) throw Error("log_marginal: row index out of range");
    stats.add(data.row(r));
  }
  return stats.log_marginal();
}

double log_crp_prior(const Partition& p, double alpha) {
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  const double n = static_cast<double>(p.size());
  double out = static_cast<double>(p.num_clusters()) * std::log(alpha) +
               std::lgamma(alpha) - std::lgamma(alpha + n);
  for (int size : p.sizes()) out += std::lgamma(static_cast<double>(size));
  return out;
}

GibbsSampler::GibbsSampler(const Dataset& data, const SamplerConfig& config)
    : data_(&data), config_(config), rng_(config.seed) {
  config_.validate(data.dim());
  prior_ = std::make_shared<NigPrior>(config_);
  alpha_ = config_.fixed_alpha.value_or(config_.initial_alpha);
  const std::size_t n = data.size();
  assignment_.assign(n, 0);
  clusters_.emplace_back(prior_);
  for (std::size_t i = 0; i < n; ++i) clusters_[0].add(data.row(i));
  ClusterStats empty(prior_);
  log_singleton_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) log_singleton_.push_back(empty.log_predictive(data.row(i)));
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void GibbsSampler::reassign(std::size_t item) {
  const auto y = data_->row(item);
  const int old = assignment_[item];
  clusters_[old].remove(y);
  if (clusters_[old].count() == 0) {
    // Fill the hole with the last cluster.
    const int last = static_cast<int>(clusters_.size()) - 1;
    if (old != last) {
      std::swap(clusters_[old], clusters_[last]);
      for (auto& z : assignment_) {
        if (z == last) z = old;
      }
    }
    clusters_.pop_back();
  }

  const std::size_t k = clusters_.size();
  log_weights_.resize(k + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    log_weights_[j] = std::log(static_cast<double>(clusters_[j].count())) +
                      clusters_[j].log_predictive(y);
    top = std::max(top, log_weights_[j]);
  }
  log_weights_[k] = std::log(alpha_) + log_singleton_[item];
  top = std::max(top, log_weights_[k]);

  double total = 0.0;
  for (auto& w : log_weights_) {
    w = std::exp(w - top);
    total += w;
  }
  std::uniform_real_distribution<double> unif(0.0, total);
  double u = unif(rng_);
  std::size_t pick = 0;
  for (; pick < k; ++pick) {
    u -= log_weights_[pick];
    if (u < 0.0) break;
  }
  if (pick == k) clusters_.emplace_back(prior_);
  clusters_[pick].add(y);
  assignment_[item] = static_cast<int>(pick);
}

void GibbsSampler::update_alpha() {
  if (config_.fixed_alpha) return;
  const double n = static_cast<double>(data_->size());
  const double k = static_cast<double>(clusters_.size());
  const double shape = config_.alpha_shape;
  const double rate = config_.alpha_rate;
  // eta ~ Beta(alpha + 1, n) from two gamma variates.
  std::gamma_distribution<double> g1(alpha_ + 1.0, 1.0);
  std::gamma_distribution<double> g2(n, 1.0);
  const double x1 = g1(rng_);
  const double x2 = g2(rng_);
  const double eta = std::clamp(x1 / (x1 + x2), std::numeric_limits<double>::min(), 1.0);
  const double post_rate = rate - std::log(eta);
  const double odds = (shape + k - 1.0) / (n * post_rate);
  const double weight = odds / (1.0 + odds);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double post_shape = unif(rng_) < weight ? shape + k : shape + k - 1.0;
  std::gamma_distribution<double> g(post_shape, 1.0 / post_rate);
  alpha_ = std::max(g(rng_), std::numeric_limits<double>::min());
}

void GibbsSampler::sweep() {
  if (config_.random_scan) std::shuffle(order_.begin(), order_.end(), rng_);
  for (auto item : order_) reassign(item);
  update_alpha();
}

Partition GibbsSampler::state() const { return Partition::from_labels(assignment_); }

DrawMatrix gibbs_run(const Dataset& data, const SamplerConfig& config,
                     std::vector<SweepTrace>* trace) {
  GibbsSampler sampler(data, config);
  std::vector<Partition> draws;
  draws.reserve(config.iterations - config.burn_in);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    sampler.sweep();
    if (trace) trace->push_back({it + 1, sampler.num_clusters(), sampler.alpha()});
    if (it >= config.burn_in) draws.push_back(sampler.state());
  }
  return DrawMatrix(std::move(draws));
}

SimulatedData simulate_example(SimulatedExample which, std::size_t n, std::uint64_t seed) {
  if (n < 4) throw Error("simulate: n must be at least 4");
  // Component j in 1..4 sits at ((-1)^floor((j-1)/2) * 2, (-1)^(j-1) * 2).
  constexpr double kCenters[4][2] = {{2, 2}, {2, -2}, {-2, 2}, {-2, -2}};
  constexpr double kSigmaEqual[4] = {1.0, 1.0, 1.0, 1.0};
  constexpr double kSigmaMixed[4] = {1.0, 1.5, 0.5, 1.0};
  const double* sigma = which == SimulatedExample::example1 ? kSigmaEqual : kSigmaMixed;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> component(0, 3);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> values;
  values.reserve(2 * n);
  std::vector<int> truth;
  truth.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int j = component(rng);
    values.push_back(kCenters[j][0] + sigma[j] * noise(rng));
    values.push_back(kCenters[j][1] + sigma[j] * noise(rng));
    truth.push_back(j);
  }
  return {Dataset(2, std::move(values)), Partition::from_labels(truth)};
}

}  // namespace clustsum
