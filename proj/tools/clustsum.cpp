// clustsum: summarize posterior draws over clusterings from the command line.
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clustsum/credible_ball.hpp"
#include "clustsum/dpm.hpp"
#include "clustsum/error.hpp"
#include "clustsum/greedy.hpp"
#include "clustsum/io.hpp"
#include "clustsum/metrics.hpp"
#include "clustsum/posterior.hpp"
#include "clustsum/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace clustsum;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Provenance of one invocation, written next to every output file.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json inputs = json::array();
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;

  void write() const {
    for (const auto& out : outputs) {
      json j;
      j["command"] = command;
      j["argv"] = argv;
      j["inputs"] = inputs;
      j["config"] = config;
      j["seed"] = seed ? json(*seed) : json(nullptr);
      j["outputs"] = outputs;
      j["version"] = kVersion;
      std::ofstream f(out + ".manifest.json");
      if (!f) throw Error("cannot write " + out + ".manifest.json");
      f << j.dump(2) << '\n';
    }
  }
};

// Writes to `path`, or to stdout when it is empty. Records file outputs.
void emit(const std::string& path, Manifest& manifest,
          const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  body(f);
  if (!f) throw Error("write failed: " + path);
  manifest.outputs.push_back(path);
}

// An argument naming an existing file is read from disk; anything else is
// parsed as an inline label sequence.
Partition partition_arg(const std::string& arg, Manifest& manifest) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) {
    manifest.inputs.push_back(arg);
    return read_partition_file(arg);
  }
  return parse_partition(arg);
}

DrawMatrix draws_arg(const std::string& path, Manifest& manifest) {
  manifest.inputs.push_back(path);
  return load_draws(fs::path(path));
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto t = trim(field);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
      throw CLI::ValidationError("expected comma-separated numbers, got '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

json partition_json(const Partition& p) {
  return {{"labels", format_partition(p)},
          {"num_clusters", p.num_clusters()},
          {"cluster_sizes", p.sizes()}};
}

void write_trajectory(std::ostream& out, const SearchResult& result) {
  out << "iteration,loss,k,labels\n";
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const auto& step = result.trajectory[i];
    out << i << ',' << format_double(step.loss) << ',' << step.partition.num_clusters()
        << ",\"" << format_partition(step.partition) << "\"\n";
  }
}

json bounds_json(const std::vector<BoundPartition>& bounds, bool detailed) {
  json arr = json::array();
  for (const auto& b : bounds) {
    if (detailed) {
      arr.push_back({{"labels", format_partition(b.partition)},
                     {"num_clusters", b.partition.num_clusters()},
                     {"distance", b.distance},
                     {"frequency", b.frequency}});
    } else {
      arr.push_back(format_partition(b.partition));
    }
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior summaries for Bayesian clustering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Manifest manifest;
  for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

  std::string metric_name = "vi";
  std::string estimator_name = "exact";
  std::uint64_t seed = 0;
  std::string output;

  auto add_metric = [&](CLI::App* cmd) {
    cmd->add_option("--metric", metric_name, "vi or binder")
        ->check(CLI::IsMember({"vi", "binder"}));
  };

  // dist
  auto* dist = app.add_subcommand("dist", "Distance between two partitions");
  std::string dist_a, dist_b;
  dist->add_option("a", dist_a, "Partition file or inline labels, e.g. 0,0,1")->required();
  dist->add_option("b", dist_b, "Partition file or inline labels")->required();
  add_metric(dist);

  // psm
  auto* psm = app.add_subcommand("psm", "Posterior similarity matrix as CSV");
  std::string psm_draws;
  psm->add_option("draws", psm_draws, "Draw file")->required();
  psm->add_option("-o,--output", output, "Output CSV (default stdout)");

  // estimate
  auto* est = app.add_subcommand("estimate", "Greedy search for the optimal partition");
  std::string est_draws, est_init = "best", est_truth, est_trajectory;
  std::optional<std::size_t> est_l;
  std::size_t est_max_iters = 1000;
  std::size_t est_restarts = 1;
  est->add_option("draws", est_draws, "Draw file")->required();
  add_metric(est);
  est->add_option("--estimator", estimator_name, "exact or lb (VI lower bound)")
      ->check(CLI::IsMember({"exact", "lb"}));
  est->add_option("--l", est_l, "Candidates per direction (default 2k^2, max 200)")
      ->check(CLI::PositiveNumber);
  est->add_option("--max-iters", est_max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  est->add_option("--seed", seed, "Seed for random split candidates");
  est->add_option("--init", est_init, "best, last, or a partition file");
  est->add_option("--restarts", est_restarts,
                  "Independent descents with seeds seed, seed+1, ...; the best is kept")
      ->check(CLI::PositiveNumber);
  est->add_option("--truth", est_truth, "Reference partition to report distances to");
  est->add_option("-o,--output", output, "Result JSON (default stdout)");
  est->add_option("--trajectory", est_trajectory, "Trajectory CSV");

  // ball
  auto* ball = app.add_subcommand("ball", "Credible ball around a center partition");
  std::string ball_draws, ball_center;
  double ball_alpha = 0.05;
  ball->add_option("draws", ball_draws, "Draw file")->required();
  ball->add_option("center", ball_center, "Center partition file or inline labels")
      ->required();
  ball->add_option("--alpha", ball_alpha, "Ball holds at least 1 - alpha of the draws")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            const bool ok = !s.empty() && end == s.c_str() + s.size() && v > 0.0 && v < 1.0;
            return ok ? "" : "alpha must lie in (0, 1)";
          },
          "(0,1)"));
  add_metric(ball);
  ball->add_option("-o,--output", output, "Result JSON (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "Dirichlet-process mixture Gibbs sampler");
  std::string sample_data, sample_prior = "empirical", sample_mu0, sample_b, sample_trace;
  bool sample_galaxy = false, sample_random_scan = false;
  std::optional<double> sample_c, sample_a, sample_fixed_alpha;
  std::size_t sample_iterations = 11000, sample_burn_in = 1000;
  auto* data_opt = sample->add_option("data", sample_data, "CSV data file");
  auto* galaxy_opt =
      sample->add_flag("--galaxy", sample_galaxy, "Use the bundled galaxy velocities");
  data_opt->excludes(galaxy_opt);
  sample->add_option("--prior", sample_prior,
                     "empirical (mu0 = mean, b = variance) or standard (mu0 = 0, b = 1)")
      ->check(CLI::IsMember({"empirical", "standard"}));
  sample->add_option("--mu0", sample_mu0, "Prior mean, comma-separated per dimension");
  sample->add_option("--b", sample_b, "Prior scale b, comma-separated per dimension");
  sample->add_option("--c", sample_c, "Prior precision multiplier (default 0.5)");
  sample->add_option("--a", sample_a, "Prior shape (default 2)");
  sample->add_option("--fixed-alpha", sample_fixed_alpha,
                     "Keep the mass parameter fixed instead of Gamma(1,1)");
  sample->add_option("--iterations", sample_iterations, "Total sweeps including burn-in");
  sample->add_option("--burn-in", sample_burn_in, "Sweeps discarded before recording");
  sample->add_flag("--random-scan", sample_random_scan, "Visit items in random order");
  sample->add_option("--seed", seed, "Sampler seed");
  sample->add_option("-o,--output", output, "Draw file (default stdout)");
  sample->add_option("--trace", sample_trace, "Per-sweep trace CSV (sweep, k, alpha)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a simulated four-component dataset");
  int sim_example = 1;
  std::size_t sim_n = 200;
  std::string sim_truth;
  sim->add_option("--example", sim_example, "1 (equal variances) or 2 (unequal)")
      ->check(CLI::IsMember({1, 2}));
  sim->add_option("--n", sim_n, "Sample size")->check(CLI::Range(4, 100000000));
  sim->add_option("--seed", seed, "Simulation seed");
  sim->add_option("-o,--output", output, "Data CSV (default stdout)");
  sim->add_option("--truth", sim_truth, "Write the true partition here");

  // pairclass
  auto* pair = app.add_subcommand(
      "pairclass", "Pairwise co-clustering comparison: 2 both, 0 neither, "
                   "1 truth only, 3 estimate only");
  std::string pair_est, pair_truth;
  pair->add_option("estimate", pair_est, "Estimate partition file or inline labels")
      ->required();
  pair->add_option("truth", pair_truth, "Reference partition file or inline labels")
      ->required();
  pair->add_option("-o,--output", output, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const MetricKind metric = parse_metric(metric_name);
    const Estimator estimator = parse_estimator(estimator_name);
    if (dist->parsed()) {
      manifest.command = "dist";
      const auto a = partition_arg(dist_a, manifest);
      const auto b = partition_arg(dist_b, manifest);
      std::cout << format_double(distance(metric, a, b)) << '\n';
    } else if (psm->parsed()) {
      manifest.command = "psm";
      const auto draws = draws_arg(psm_draws, manifest);
      const auto matrix = similarity_matrix(draws);
      emit(output, manifest, [&](std::ostream& out) { write_similarity_csv(out, matrix); });
    } else if (est->parsed()) {
      manifest.command = "estimate";
      if (metric == MetricKind::binder && estimator == Estimator::lower_bound) {
        throw CLI::ValidationError("--estimator lb applies to --metric vi only");
      }
      const auto draws = draws_arg(est_draws, manifest);
      SearchConfig config;
      config.metric = metric;
      config.estimator = estimator;
      config.budget = est_l;
      config.max_iters = est_max_iters;
      if (est_init == "best") {
        config.init = InitMode::best_sampled;
      } else if (est_init == "last") {
        config.init = InitMode::last_draw;
      } else {
        config.init = InitMode::explicit_partition;
        manifest.inputs.push_back(est_init);
        config.initial = read_partition_file(est_init);
      }
      std::optional<SearchResult> best;
      for (std::size_t r = 0; r < est_restarts; ++r) {
        config.seed = seed + r;
        auto result = greedy_search(draws, config);
        if (!best || result.expected_loss < best->expected_loss - 1e-12) {
          best = std::move(result);
        }
      }
      const auto& result = *best;
      const auto matrix = similarity_matrix(draws);

      json j;
      j["metric"] = std::string(to_string(metric));
      j["estimator"] = std::string(to_string(estimator));
      j["partition"] = format_partition(result.optimum);
      j["num_clusters"] = result.optimum.num_clusters();
      j["cluster_sizes"] = result.optimum.sizes();
      j["expected_loss"] = result.expected_loss;
      j["expected_losses"] = {{"binder", expected_binder(result.optimum, matrix)},
                              {"vi", expected_vi(result.optimum, draws)},
                              {"vi_lower", expected_vi_lower(result.optimum, matrix)}};
      j["init"] = {{"mode", std::string(to_string(config.init))},
                   {"partition", partition_json(result.trajectory.front().partition)},
                   {"loss", result.trajectory.front().loss}};
      j["iterations"] = result.iterations_used;
      j["moves"] = result.trajectory.size() - 1;
      j["num_draws"] = draws.num_draws();
      j["num_items"] = draws.num_items();
      if (!est_truth.empty()) {
        manifest.inputs.push_back(est_truth);
        const auto truth = read_partition_file(est_truth);
        j["truth_distance"] = {{"binder", binder(truth, result.optimum)},
                               {"vi", vi(truth, result.optimum)}};
      }
      manifest.config = {{"metric", j["metric"]},
                         {"estimator", j["estimator"]},
                         {"l", est_l ? json(*est_l) : json("default")},
                         {"max_iters", est_max_iters},
                         {"init", est_init},
                         {"restarts", est_restarts}};
      manifest.seed = seed;
      emit(output, manifest, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
      if (!est_trajectory.empty()) {
        emit(est_trajectory, manifest,
             [&](std::ostream& out) { write_trajectory(out, result); });
      }
    } else if (ball->parsed()) {
      manifest.command = "ball";
      const auto draws = draws_arg(ball_draws, manifest);
      const auto center = partition_arg(ball_center, manifest);
      const auto b = credible_ball(center, draws, ball_alpha, metric);
      const auto bounds = ball_bounds(b, draws);
      json j;
      j["alpha"] = ball_alpha;
      j["metric"] = std::string(to_string(metric));
      j["epsilon_star"] = b.epsilon_star;
      j["coverage"] = b.coverage;
      j["bounds"] = {{"upper", bounds_json(bounds.upper_vertical, false)},
                     {"lower", bounds_json(bounds.lower_vertical, false)},
                     {"horizontal", bounds_json(bounds.horizontal, false)}};
      j["center"] = partition_json(center);
      j["num_members"] = b.member_indices.size();
      j["bound_details"] = {{"upper", bounds_json(bounds.upper_vertical, true)},
                            {"lower", bounds_json(bounds.lower_vertical, true)},
                            {"horizontal", bounds_json(bounds.horizontal, true)}};
      manifest.config = {{"alpha", ball_alpha}, {"metric", j["metric"]}};
      emit(output, manifest, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
    } else if (sample->parsed()) {
      manifest.command = "sample";
      if (sample_data.empty() && !sample_galaxy) {
        throw CLI::ValidationError("sample needs a data file or --galaxy");
      }
      std::optional<Dataset> data;
      if (sample_galaxy) {
        data = galaxy_velocities();
        manifest.inputs.push_back("builtin:galaxy");
      } else {
        manifest.inputs.push_back(sample_data);
        data = load_dataset_csv(fs::path(sample_data));
      }
      SamplerConfig config = sample_prior == "standard" ? standard_config(data->dim())
                                                        : empirical_config(*data);
      if (!sample_mu0.empty()) config.mu0 = parse_vector(sample_mu0);
      if (!sample_b.empty()) config.b = parse_vector(sample_b);
      if (sample_c) config.c = *sample_c;
      if (sample_a) config.a = *sample_a;
      config.fixed_alpha = sample_fixed_alpha;
      config.iterations = sample_iterations;
      config.burn_in = sample_burn_in;
      config.seed = seed;
      config.random_scan = sample_random_scan;
      config.validate(data->dim());

      std::vector<SweepTrace> trace;
      const auto draws = gibbs_run(*data, config, sample_trace.empty() ? nullptr : &trace);
      manifest.config = {{"mu0", config.mu0},
                         {"c", config.c},
                         {"a", config.a},
                         {"b", config.b},
                         {"alpha_prior", {{"shape", config.alpha_shape},
                                          {"rate", config.alpha_rate}}},
                         {"fixed_alpha", config.fixed_alpha ? json(*config.fixed_alpha)
                                                            : json(nullptr)},
                         {"iterations", config.iterations},
                         {"burn_in", config.burn_in},
                         {"random_scan", config.random_scan}};
      manifest.seed = seed;
      emit(output, manifest, [&](std::ostream& out) { write_draws(out, draws); });
      if (!sample_trace.empty()) {
        emit(sample_trace, manifest, [&](std::ostream& out) {
          out << "sweep,k,alpha\n";
          for (const auto& t : trace) {
            out << t.sweep << ',' << t.num_clusters << ',' << format_double(t.alpha) << '\n';
          }
        });
      }
    } else if (sim->parsed()) {
      manifest.command = "simulate";
      const auto which =
          sim_example == 1 ? SimulatedExample::example1 : SimulatedExample::example2;
      const auto result = simulate_example(which, sim_n, seed);
      manifest.config = {{"example", sim_example}, {"n", sim_n}};
      manifest.seed = seed;
      emit(output, manifest, [&](std::ostream& out) {
        out << "x1,x2\n";
        write_dataset_csv(out, result.data);
      });
      if (!sim_truth.empty()) {
        emit(sim_truth, manifest,
             [&](std::ostream& out) { out << format_partition(result.truth) << '\n'; });
      }
    } else if (pair->parsed()) {
      manifest.command = "pairclass";
      const auto estimate = partition_arg(pair_est, manifest);
      const auto truth = partition_arg(pair_truth, manifest);
      const auto codes = pair_classes(estimate, truth);
      const std::size_t n = estimate.size();
      emit(output, manifest, [&](std::ostream& out) {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t k = 0; k < n; ++k) {
            if (k) out << ',';
            out << codes[i * n + k];
          }
          out << '\n';
        }
      });
    }
    manifest.write();
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
