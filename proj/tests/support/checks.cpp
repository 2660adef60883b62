#include "support/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "clustsum/dpm.hpp"
#include "clustsum/greedy.hpp"
#include "clustsum/io.hpp"
#include "clustsum/posterior.hpp"
#include "support/generators.hpp"

namespace checks {

using namespace clustsum;

namespace {

constexpr double kTol = 1e-12;

std::string describe(const Partition& a, const Partition& b, double got, double want) {
  std::ostringstream s;
  s.precision(17);
  s << format_partition(a) << " vs " << format_partition(b) << ": got " << got
    << ", expected " << want;
  return s.str();
}

Partition merged(const Partition& c, Label x, Label y) {
  std::vector<Label> labels(c.labels().begin(), c.labels().end());
  for (auto& l : labels) {
    if (l == y) l = x;
  }
  return Partition::from_labels(labels);
}

Partition peeled(const Partition& c, std::size_t item) {
  std::vector<Label> labels(c.labels().begin(), c.labels().end());
  labels[item] = c.num_clusters();
  return Partition::from_labels(labels);
}

// The nearest partitions to c predicted by cluster-size structure alone.
std::set<Partition> predicted_closest(const Partition& c) {
  const auto& sizes = c.sizes();
  std::vector<Label> singletons, pairs;
  for (Label l = 0; l < c.num_clusters(); ++l) {
    if (sizes[l] == 1) singletons.push_back(l);
    if (sizes[l] == 2) pairs.push_back(l);
  }
  std::set<Partition> out;
  if (singletons.size() >= 2) {
    for (std::size_t i = 0; i < singletons.size(); ++i) {
      for (std::size_t j = i + 1; j < singletons.size(); ++j) {
        out.insert(merged(c, singletons[i], singletons[j]));
      }
    }
    for (Label l : pairs) {
      for (std::size_t item = 0; item < c.size(); ++item) {
        if (c[item] == l) out.insert(peeled(c, item));
      }
    }
    return out;
  }
  int smallest = 0;
  for (int s : sizes) {
    if (s > 1 && (smallest == 0 || s < smallest)) smallest = s;
  }
  for (std::size_t item = 0; item < c.size(); ++item) {
    if (sizes[c[item]] == smallest) out.insert(peeled(c, item));
  }
  return out;
}

}  // namespace

Verdict reference_pair() {
  Verdict v;
  const auto c = canonicalize({0, 0, 1, 1});
  const auto d = canonicalize({0, 1, 2, 1});
  if (std::abs(vi(c, d) - 1.5) >= kTol) v.fail(describe(c, d, vi(c, d), 1.5));
  if (std::abs(binder(c, d) - 0.375) >= kTol) v.fail(describe(c, d, binder(c, d), 0.375));
  if (v.ok) v.detail = "vi = 1.5, binder = 0.375";
  return v;
}

Verdict extremes(std::size_t lo, std::size_t hi) {
  Verdict v;
  for (std::size_t n = lo; n <= hi; ++n) {
    const auto one = Partition::one(n);
    const auto zero = Partition::zero(n);
    const double nd = static_cast<double>(n);
    if (std::abs(vi(one, zero) - std::log2(nd)) >= kTol) {
      v.fail(describe(one, zero, vi(one, zero), std::log2(nd)));
    }
    if (std::abs(binder(one, zero) - (1.0 - 1.0 / nd)) >= kTol) {
      v.fail(describe(one, zero, binder(one, zero), 1.0 - 1.0 / nd));
    }
    if (max_distance(MetricKind::vi, n) != std::log2(nd)) v.fail("max_distance vi");
  }
  if (v.ok) v.detail = "N = " + std::to_string(lo) + ".." + std::to_string(hi);
  return v;
}

Verdict lattice_metric_properties(std::size_t n, MetricKind metric, bool triples) {
  Verdict v;
  const auto all = enumerate_partitions(n);
  const std::size_t count = all.size();
  std::vector<double> d(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) d[i * count + j] = distance(metric, all[i], all[j]);
  }
  std::unordered_map<Partition, std::size_t, PartitionHash> index;
  for (std::size_t i = 0; i < count; ++i) index[all[i]] = i;
  const double top = max_distance(metric, n);
  std::size_t pairs = 0, chains = 0, triangle = 0;

  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      ++pairs;
      const double dij = d[i * count + j];
      if (dij < 0.0) v.fail("negative distance: " + describe(all[i], all[j], dij, 0));
      if ((dij == 0.0) != (i == j)) v.fail("identity: " + describe(all[i], all[j], dij, 0));
      if (dij != d[j * count + i]) v.fail("symmetry: " + describe(all[i], all[j], dij, 0));
      if (dij > top + kTol) v.fail("bound: " + describe(all[i], all[j], dij, top));
      const std::size_t m = index.at(meet(all[i], all[j]));
      const double horizontal = d[i * count + m] + d[j * count + m];
      if (std::abs(dij - horizontal) >= kTol) {
        v.fail("horizontal alignment: " + describe(all[i], all[j], dij, horizontal));
      }
    }
  }
  if (triples) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        const bool ij = leq(all[j], all[i]);
        for (std::size_t k = 0; k < count; ++k) {
          ++triangle;
          const double direct = d[i * count + k];
          const double via = d[i * count + j] + d[j * count + k];
          if (direct > via + kTol) v.fail("triangle: " + describe(all[i], all[k], direct, via));
          if (ij && leq(all[k], all[j])) {
            ++chains;
            if (std::abs(direct - via) >= kTol) {
              v.fail("vertical alignment: " + describe(all[i], all[k], direct, via));
            }
          }
        }
      }
    }
  }
  if (v.ok) {
    v.detail = std::string(to_string(metric)) + " N=" + std::to_string(n) + ": " +
               std::to_string(count) + " partitions, " + std::to_string(pairs) + " pairs";
    if (triples) {
      v.detail += ", " + std::to_string(triangle) + " triples, " + std::to_string(chains) +
                  " chains";
    }
  }
  return v;
}

Verdict closest_partitions(std::size_t n, MetricKind metric) {
  Verdict v;
  const auto all = enumerate_partitions(n);
  for (const auto& c : all) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : all) {
      if (!(d == c)) best = std::min(best, distance(metric, c, d));
    }
    std::set<Partition> nearest;
    for (const auto& d : all) {
      if (!(d == c) && distance(metric, c, d) <= best + kTol) nearest.insert(d);
    }
    if (nearest != predicted_closest(c)) {
      v.fail(std::string(to_string(metric)) + " nearest set differs at " + format_partition(c));
    }
  }
  if (v.ok) {
    v.detail = std::string(to_string(metric)) + " N=" + std::to_string(n) + ": " +
               std::to_string(all.size()) + " partitions";
  }
  return v;
}

Verdict extreme_asymmetry() {
  Verdict v;
  const std::size_t n = 16;
  const auto one = Partition::one(n);
  const auto zero = Partition::zero(n);
  for (int k : {2, 4, 8}) {
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(static_cast<int>(i) / (16 / k));
    const auto ck = Partition::from_labels(labels);
    // Exact rational values: binder is dyadic here.
    const double b_one = binder(one, ck), b_zero = binder(zero, ck);
    if (b_one != 1.0 - 1.0 / k) v.fail("binder(1, c_k) at k=" + std::to_string(k));
    if (b_zero != 1.0 / k - 1.0 / 16.0) v.fail("binder(0, c_k) at k=" + std::to_string(k));
    if (!(b_one > b_zero)) v.fail("binder ordering at k=" + std::to_string(k));
    const double v_one = vi(one, ck), v_zero = vi(zero, ck);
    if (std::abs(v_one - std::log2(k)) >= kTol) v.fail("vi(1, c_k)");
    if (std::abs(v_zero - (4.0 - std::log2(k))) >= kTol) v.fail("vi(0, c_k)");
    if (k == 4 && std::abs(v_one - v_zero) >= kTol) v.fail("vi equality at k=4");
    if (k == 2 && !(v_one < v_zero - kTol)) v.fail("vi strict at k=2");
    if (k == 8 && !(v_one > v_zero + kTol)) v.fail("vi strict at k=8");
  }
  if (v.ok) v.detail = "k = 2, 4, 8 at N=16";
  return v;
}

Verdict equidistance() {
  Verdict v;
  int seen = 0;
  for (const auto& c : enumerate_partitions(4)) {
    if (c.num_clusters() != 2) continue;
    auto sizes = c.sizes();
    std::sort(sizes.begin(), sizes.end());
    if (sizes != std::vector<int>{1, 3}) continue;
    ++seen;
    if (binder(Partition::one(4), c) != 0.375) v.fail("binder(1, c) at " + format_partition(c));
    if (binder(Partition::zero(4), c) != 0.375) v.fail("binder(0, c) at " + format_partition(c));
  }
  if (seen != 4) v.fail("expected four (1,3) partitions, saw " + std::to_string(seen));
  if (v.ok) v.detail = "4 partitions at distance 0.375 from both extremes";
  return v;
}

Verdict jensen_ordering(int posteriors, std::uint64_t seed) {
  Verdict v;
  std::mt19937_64 rng(seed);
  std::size_t evaluations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < posteriors; ++r) {
    const std::size_t n = 2 + rng() % 7;  // 2..8
    const std::size_t m = 1 + rng() % 50;
    std::vector<Partition> rows;
    for (std::size_t i = 0; i < m; ++i) {
      rows.push_back(gen::random_partition(rng, n, static_cast<int>(n)));
    }
    const DrawMatrix draws(rows);
    const auto psm = similarity_matrix(draws);
    std::vector<Partition> candidates = rows;
    for (int i = 0; i < 20; ++i) {
      candidates.push_back(gen::random_partition(rng, n, static_cast<int>(n)));
    }
    candidates.push_back(Partition::one(n));
    candidates.push_back(Partition::zero(n));
    for (const auto& c : candidates) {
      ++evaluations;
      const double gap = expected_vi_lower(c, psm) - expected_vi(c, draws);
      worst = std::max(worst, gap);
      if (gap > 1e-9) v.fail("lower bound exceeds exact at " + format_partition(c));
    }
  }
  if (v.ok) {
    std::ostringstream s;
    s << evaluations << " candidates over " << posteriors
      << " posteriors, max(lower - exact) = " << worst;
    v.detail = s.str();
  }
  return v;
}

GreedyOracleStats greedy_vs_oracle(int posteriors, std::size_t n, MetricKind metric,
                                   bool lower_bound, std::uint64_t seed) {
  GreedyOracleStats stats;
  std::mt19937_64 rng(seed);
  const auto all = enumerate_partitions(n);
  for (int r = 0; r < posteriors; ++r) {
    const std::size_t support = 1 + rng() % 10;
    const auto draws = gen::random_draws(rng, n, support, 10);
    SearchConfig config;
    config.metric = metric;
    config.estimator = lower_bound ? Estimator::lower_bound : Estimator::exact;
    config.budget = kUnlimitedBudget;
    config.seed = static_cast<std::uint64_t>(r);
    const auto result = greedy_search(draws, config);
    const PosteriorLoss loss(draws, config.metric, config.estimator);
    double best = std::numeric_limits<double>::infinity();
    Partition argmin = all.front();
    for (const auto& p : all) {
      const double l = loss(p);
      if (l < best) {
        best = l;
        argmin = p;
      }
    }
    ++stats.runs;
    if (result.expected_loss <= best + kTol) {
      ++stats.matches;
    } else {
      std::ostringstream s;
      s.precision(10);
      s << "run " << r << ": greedy " << format_partition(result.optimum) << " ("
        << result.expected_loss << ") vs argmin " << format_partition(argmin) << " (" << best
        << "), path:";
      for (const auto& step : result.trajectory) s << ' ' << format_partition(step.partition);
      stats.failures.push_back(s.str());
    }
  }
  return stats;
}

double nig_log_marginal_1d(const std::vector<double>& y, double mu0, double c, double a,
                           double b) {
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  const double cn = c + n;
  const double an = a + n / 2.0;
  const double bn = b + 0.5 * ss + 0.5 * c * n * (mean - mu0) * (mean - mu0) / cn;
  return std::lgamma(an) - std::lgamma(a) + a * std::log(b) - an * std::log(bn) +
         0.5 * std::log(c / cn) - 0.5 * n * std::log(2.0 * M_PI);
}

GibbsCheck gibbs_cluster_count(std::size_t sweeps, std::uint64_t seed, bool learn_alpha) {
  const std::vector<double> y = {-1.3, -0.9, 0.2, 1.6, 2.1};
  const std::size_t n = y.size();
  const Dataset data(1, y);
  SamplerConfig config = standard_config(1);
  if (!learn_alpha) config.fixed_alpha = 1.0;
  config.burn_in = 1000;
  config.iterations = sweeps + config.burn_in;
  config.seed = seed;

  GibbsCheck out;
  out.exact.assign(n, 0.0);
  out.empirical.assign(n, 0.0);

  // Exact posterior. The CRP prior is alpha^k prod (n_j - 1)! / rising(alpha, N);
  // with a Gamma(shape, rate) hyperprior the alpha-dependent factor is
  // integrated numerically for each k.
  std::vector<double> log_mass(n + 1, 0.0);
  if (learn_alpha) {
    const double upper = 80.0;
    const int steps = 400000;
    const double h = upper / steps;
    for (std::size_t k = 1; k <= n; ++k) {
      long double total = 0.0L;
      for (int i = 1; i <= steps; ++i) {
        const double alpha = i * h;
        double log_f = (config.alpha_shape - 1.0) * std::log(alpha) -
                       config.alpha_rate * alpha + static_cast<double>(k - 1) * std::log(alpha);
        for (std::size_t j = 1; j < n; ++j) log_f -= std::log(alpha + static_cast<double>(j));
        total += (i == steps ? 0.5L : 1.0L) * std::exp(static_cast<long double>(log_f));
      }
      // The integrand at alpha = 0 vanishes for k > 1 and is 1 / (N-1)! for k = 1.
      if (k == 1) {
        double at_zero = 0.0;
        for (std::size_t j = 1; j < n; ++j) at_zero -= std::log(static_cast<double>(j));
        total += 0.5L * std::exp(static_cast<long double>(at_zero));
      }
      log_mass[k] = std::log(static_cast<double>(total * h));
    }
  }
  std::vector<double> logw;
  std::vector<int> ks;
  for (const auto& p : enumerate_partitions(n)) {
    double lw = 0.0;
    for (const auto& cluster : p.clusters()) {
      std::vector<double> pts;
      for (auto i : cluster) pts.push_back(y[i]);
      lw += std::lgamma(static_cast<double>(cluster.size()));
      lw += nig_log_marginal_1d(pts, config.mu0[0], config.c, config.a, config.b[0]);
    }
    logw.push_back(lw + log_mass[p.num_clusters()]);
    ks.push_back(p.num_clusters());
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(logw[i] - top);
    out.exact[ks[i] - 1] += w;
    z += w;
  }
  for (auto& p : out.exact) p /= z;

  const auto draws = gibbs_run(data, config);
  for (const auto& d : draws) out.empirical[d.num_clusters() - 1] += 1.0;
  for (auto& p : out.empirical) p /= static_cast<double>(draws.num_draws());

  for (std::size_t k = 0; k < n; ++k) {
    out.total_variation += 0.5 * std::abs(out.exact[k] - out.empirical[k]);
  }
  return out;
}

}  // namespace checks
