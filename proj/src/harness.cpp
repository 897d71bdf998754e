#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace chanest {

namespace {

// Stream-purpose tags mixed into seed derivation.
constexpr std::uint64_t kDataTag = 0xD0;
constexpr std::uint64_t kTrajectoryTag = 0x7A;

std::uint64_t method_tag(Method m) {
  return static_cast<std::uint64_t>(m) + 1;
}

int effective_threads(int requested, int jobs) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return std::max(1, std::min(n, jobs));
}

/// Runs fn(0..jobs-1) on up to `threads` workers. Results must be written
/// into pre-sized slots so the outcome is identical for any worker count.
template <typename Fn>
void parallel_for(int jobs, int threads, Fn&& fn) {
  const int workers = effective_threads(threads, jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= jobs) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  pool.clear();  // join
  if (first_error) std::rethrow_exception(first_error);
}

bool uses_optimizer(Method m) {
  return m == Method::Pso || m == Method::Hybrid;
}

/// %.17g so every double round-trips exactly through the CSV.
std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_optional_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string{};
}

std::string format_optional_bool(const std::optional<bool>& v) {
  return v ? std::string(*v ? "1" : "0") : std::string{};
}

std::ofstream open_csv(const std::filesystem::path& out_dir,
                       const char* filename) {
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot open " + path.string() + " for writing");
  }
  return out;
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double median_of_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MethodSummary summarize_cell(double snr_db, Method method,
                             const RunReport* begin, const RunReport* end) {
  MethodSummary s;
  s.snr_db = snr_db;
  s.method = method;
  s.runs = static_cast<int>(end - begin);
  std::vector<double> nmse_values;
  std::vector<double> iteration_values;
  nmse_values.reserve(static_cast<std::size_t>(s.runs));
  for (const RunReport* r = begin; r != end; ++r) {
    nmse_values.push_back(r->nmse);
    if (r->iterations) iteration_values.push_back(*r->iterations);
  }
  double mean = 0.0;
  for (double v : nmse_values) mean += v;
  mean /= static_cast<double>(nmse_values.size());
  s.nmse_mean = mean;
  s.nmse_std = sample_std(nmse_values, mean);
  if (!iteration_values.empty()) {
    const auto [lo, hi] =
        std::minmax_element(iteration_values.begin(), iteration_values.end());
    s.iter_min = static_cast<int>(*lo);
    s.iter_max = static_cast<int>(*hi);
    s.iter_median = median_of_sorted(iteration_values);
  }
  return s;
}

SweepResult run_grid(const ExperimentConfig& cfg,
                     const std::vector<Method>& methods) {
  validate_config(cfg);
  const int snr_count = static_cast<int>(cfg.snr_grid_db.size());
  const int method_count = static_cast<int>(methods.size());
  const int jobs = snr_count * method_count * cfg.runs;

  SweepResult result;
  result.reports.resize(static_cast<std::size_t>(jobs));
  parallel_for(jobs, cfg.threads, [&](int i) {
    const int run = i % cfg.runs;
    const int mi = (i / cfg.runs) % method_count;
    const int si = i / (cfg.runs * method_count);
    result.reports[static_cast<std::size_t>(i)] =
        run_single(cfg, cfg.snr_grid_db[static_cast<std::size_t>(si)], si,
                   methods[static_cast<std::size_t>(mi)], run);
  });

  for (int si = 0; si < snr_count; ++si) {
    for (int mi = 0; mi < method_count; ++mi) {
      const auto offset =
          static_cast<std::size_t>((si * method_count + mi) * cfg.runs);
      result.summary.push_back(summarize_cell(
          cfg.snr_grid_db[static_cast<std::size_t>(si)],
          methods[static_cast<std::size_t>(mi)],
          result.reports.data() + offset,
          result.reports.data() + offset + cfg.runs));
    }
  }
  return result;
}

}  // namespace

std::uint64_t data_stream_seed(std::uint64_t master_seed, int snr_index,
                               int run_index) {
  return mix_seed({master_seed, kDataTag, static_cast<std::uint64_t>(snr_index),
                   static_cast<std::uint64_t>(run_index)});
}

std::uint64_t optimizer_stream_seed(std::uint64_t master_seed, int snr_index,
                                    Method method, int run_index) {
  return mix_seed({master_seed, method_tag(method),
                   static_cast<std::uint64_t>(snr_index),
                   static_cast<std::uint64_t>(run_index)});
}

RunReport run_single(const ExperimentConfig& cfg, double snr_db, int snr_index,
                     Method method, int run_index) {
  const ScenarioConfig& sc = cfg.scenario;
  const PilotMatrix pilots = make_pilots(sc.num_tx_users, sc.pilot_len);

  RandomStream data_rng(data_stream_seed(cfg.master_seed, snr_index, run_index));
  const ChannelRealization channel = draw_channel(sc, data_rng);
  const ReceivedSignal received = transmit(channel, pilots, snr_db, data_rng);

  RunReport report;
  report.snr_db = snr_db;
  report.method = method;
  report.run_index = run_index;

  switch (method) {
    case Method::Ls: {
      report.nmse = nmse(channel.h, estimate_ls(received.y, pilots.s).h_hat);
      break;
    }
    case Method::Mmse: {
      report.nmse = nmse(
          channel.h,
          estimate_mmse(received.y, pilots.s, received.noise_var).h_hat);
      break;
    }
    case Method::Pso:
    case Method::Hybrid: {
      const Estimate ls = estimate_ls(received.y, pilots.s);
      const std::vector<double> seed_solution = encode(ls.h_hat);
      const Objective objective = [&](std::span<const double> v) {
        return fitness(channel.h, decode(v, sc.num_rx, sc.num_tx_users),
                       cfg.fitness_floor);
      };
      RunOptions options;
      options.spread =
          cfg.swarm_spread > 0.0
              ? cfg.swarm_spread
              : std::sqrt(received.noise_var / static_cast<double>(sc.pilot_len));
      options.stop_rule = cfg.stop_rule;
      options.velocity_clamp = cfg.velocity_clamp;
      RandomStream opt_rng(
          optimizer_stream_seed(cfg.master_seed, snr_index, method, run_index));
      const OptRun opt = run_optimizer(
          objective, seed_solution, cfg.optimizer,
          method == Method::Pso ? OptimizerKind::Pso : OptimizerKind::Hybrid,
          opt_rng, options);
      report.nmse = nmse(
          channel.h,
          decode(opt.best_position, sc.num_rx, sc.num_tx_users));
      report.iterations = opt.iterations_used;
      report.converged = opt.converged;
      break;
    }
  }
  return report;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  return run_grid(cfg, cfg.methods);
}

SweepResult convergence_study(const ExperimentConfig& cfg) {
  return run_grid(cfg, {Method::Pso, Method::Hybrid});
}

TrajectoryResult trajectory_study(const ExperimentConfig& cfg, double snr_db,
                                  int dim_a, int dim_b) {
  validate_config(cfg);
  const ScenarioConfig& sc = cfg.scenario;
  const int dims = 2 * sc.num_rx * sc.num_tx_users;
  if (dim_a < 0 || dim_a >= dims || dim_b < 0 || dim_b >= dims) {
    throw ConfigError("dims: indices must be in [0, " + std::to_string(dims) +
                      ")");
  }

  const PilotMatrix pilots = make_pilots(sc.num_tx_users, sc.pilot_len);
  const std::uint64_t snr_bits = std::bit_cast<std::uint64_t>(snr_db);
  RandomStream data_rng(mix_seed({cfg.master_seed, kDataTag, kTrajectoryTag,
                                  snr_bits}));
  const ChannelRealization channel = draw_channel(sc, data_rng);
  const ReceivedSignal received = transmit(channel, pilots, snr_db, data_rng);
  const Estimate ls = estimate_ls(received.y, pilots.s);
  const std::vector<double> seed_solution = encode(ls.h_hat);

  const Objective objective = [&](std::span<const double> v) {
    return fitness(channel.h, decode(v, sc.num_rx, sc.num_tx_users),
                   cfg.fitness_floor);
  };
  RunOptions options;
  options.spread =
      cfg.swarm_spread > 0.0
          ? cfg.swarm_spread
          : std::sqrt(received.noise_var / static_cast<double>(sc.pilot_len));
  options.stop_rule = cfg.stop_rule;
  options.velocity_clamp = cfg.velocity_clamp;
  options.log_trajectory = true;

  // Both optimizers consume the same stream seed so their initial swarms are
  // identical.
  const std::uint64_t opt_seed =
      mix_seed({cfg.master_seed, kTrajectoryTag, snr_bits});

  TrajectoryResult result;
  result.dim_a = dim_a;
  result.dim_b = dim_b;
  for (const Method method : {Method::Pso, Method::Hybrid}) {
    RandomStream opt_rng(opt_seed);
    const OptRun opt = run_optimizer(
        objective, seed_solution, cfg.optimizer,
        method == Method::Pso ? OptimizerKind::Pso : OptimizerKind::Hybrid,
        opt_rng, options);
    for (std::size_t t = 0; t < opt.trajectory.size(); ++t) {
      const SwarmSnapshot& snap = opt.trajectory[t];
      for (std::size_t p = 0; p < snap.positions.size(); ++p) {
        result.points.push_back(TrajectoryPoint{
            method, static_cast<int>(t), static_cast<int>(p),
            snap.positions[p][static_cast<std::size_t>(dim_a)],
            snap.positions[p][static_cast<std::size_t>(dim_b)],
            snap.fitness[p]});
      }
      double mean = 0.0;
      for (double f : snap.fitness) mean += f;
      mean /= static_cast<double>(snap.fitness.size());
      result.dispersion.push_back(DispersionPoint{
          method, static_cast<int>(t), sample_std(snap.fitness, mean)});
    }
  }
  return result;
}

void validate_config(const ExperimentConfig& cfg) {
  const ScenarioConfig& sc = cfg.scenario;
  if (sc.num_rx < 1) throw ConfigError("num_rx: must be >= 1");
  if (sc.num_tx_users < 1) throw ConfigError("num_tx: must be >= 1");
  if (sc.pilot_len < sc.num_tx_users) {
    throw ConfigError("pilot_len: must be >= num_tx (pilot orthogonality)");
  }
  if (sc.pilot_len < 1 || (sc.pilot_len & (sc.pilot_len - 1)) != 0) {
    throw ConfigError("pilot_len: must be a power of two");
  }
  if (cfg.snr_grid_db.empty()) throw ConfigError("snr_grid: must be non-empty");
  if (cfg.methods.empty()) throw ConfigError("methods: must be non-empty");
  if (cfg.runs < 1) throw ConfigError("runs: must be >= 1");
  if (cfg.threads < 0) throw ConfigError("threads: must be >= 0");

  const PsoConfig& pso = cfg.optimizer.base;
  if (pso.population < 1) throw ConfigError("population: must be >= 1");
  if (pso.max_iter < 1) throw ConfigError("max_iter: must be >= 1");
  if (!(pso.tolerance > 0.0)) throw ConfigError("tolerance: must be positive");
  if (cfg.optimizer.mutate_frac < 0.0 || cfg.optimizer.mutate_frac > 1.0) {
    throw ConfigError("mutate_frac: must be in [0, 1]");
  }
  if (cfg.optimizer.reproduce_frac < 0.0 || cfg.optimizer.reproduce_frac > 1.0) {
    throw ConfigError("reproduce_frac: must be in [0, 1]");
  }
  if (cfg.optimizer.mutate_frac + cfg.optimizer.reproduce_frac >= 1.0) {
    throw ConfigError("mutate_frac/reproduce_frac: must sum below 1");
  }
  if (!(cfg.optimizer.mutation_sigma_sq > 0.0)) {
    throw ConfigError("mutation_var: must be positive");
  }
  if (!(cfg.fitness_floor > 0.0)) {
    throw ConfigError("fitness_floor: must be positive");
  }
  if (cfg.swarm_spread < 0.0) {
    throw ConfigError("swarm_spread: must be >= 0 (0 selects the LS error scale)");
  }
  if (cfg.velocity_clamp < 0.0) {
    throw ConfigError("velocity_clamp: must be >= 0 (0 disables)");
  }
}

void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& out_dir) {
  {
    std::ofstream out = open_csv(out_dir, "sweep_raw.csv");
    out << "snr_db,method,run,nmse,iterations,converged\n";
    for (const RunReport& r : result.reports) {
      out << format_double(r.snr_db) << ',' << method_name(r.method) << ','
          << r.run_index << ',' << format_double(r.nmse) << ','
          << format_optional_int(r.iterations) << ','
          << format_optional_bool(r.converged) << '\n';
    }
  }
  std::ofstream out = open_csv(out_dir, "sweep_summary.csv");
  out << "snr_db,method,nmse_mean,nmse_std,iter_min,iter_median,iter_max,runs\n";
  for (const MethodSummary& s : result.summary) {
    out << format_double(s.snr_db) << ',' << method_name(s.method) << ','
        << format_double(s.nmse_mean) << ',' << format_double(s.nmse_std) << ','
        << format_optional_int(s.iter_min) << ','
        << (s.iter_median ? format_double(*s.iter_median) : std::string{}) << ','
        << format_optional_int(s.iter_max) << ',' << s.runs << '\n';
  }
}

void write_convergence_csv(const SweepResult& result,
                           const std::filesystem::path& out_dir) {
  {
    std::ofstream out = open_csv(out_dir, "convergence.csv");
    out << "snr_db,method,run,iterations,converged\n";
    for (const RunReport& r : result.reports) {
      out << format_double(r.snr_db) << ',' << method_name(r.method) << ','
          << r.run_index << ',' << format_optional_int(r.iterations) << ','
          << format_optional_bool(r.converged) << '\n';
    }
  }
  std::ofstream out = open_csv(out_dir, "convergence_summary.csv");
  out << "snr_db,method,iter_min,iter_median,iter_max,runs\n";
  for (const MethodSummary& s : result.summary) {
    out << format_double(s.snr_db) << ',' << method_name(s.method) << ','
        << format_optional_int(s.iter_min) << ','
        << (s.iter_median ? format_double(*s.iter_median) : std::string{}) << ','
        << format_optional_int(s.iter_max) << ',' << s.runs << '\n';
  }
}

void write_trajectory_csv(const TrajectoryResult& result,
                          const std::filesystem::path& out_dir) {
  {
    std::ofstream out = open_csv(out_dir, "trajectory.csv");
    out << "method,iteration,particle,dim_a,dim_b,fitness\n";
    for (const TrajectoryPoint& p : result.points) {
      out << method_name(p.method) << ',' << p.iteration << ',' << p.particle
          << ',' << format_double(p.dim_a) << ',' << format_double(p.dim_b)
          << ',' << format_double(p.fitness) << '\n';
    }
  }
  std::ofstream out = open_csv(out_dir, "dispersion.csv");
  out << "method,iteration,fitness_std\n";
  for (const DispersionPoint& p : result.dispersion) {
    out << method_name(p.method) << ',' << p.iteration << ','
        << format_double(p.fitness_std) << '\n';
  }
}

}  // namespace chanest
