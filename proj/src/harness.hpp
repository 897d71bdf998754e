#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "estimators.hpp"
#include "sim_model.hpp"
#include "swarm.hpp"

namespace chanest {

/// Full description of one Monte Carlo experiment.
struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<double> snr_grid_db{5.0, 10.0, 15.0, 20.0, 25.0};
  std::vector<Method> methods{Method::Ls, Method::Mmse, Method::Pso,
                              Method::Hybrid};
  int runs = 12;
  std::uint64_t master_seed = 1;
  HybridConfig optimizer;
  StopRule stop_rule = StopRule::ImprovementStall;
  double fitness_floor = 1e-6;
  double swarm_spread = 0.0;    // 0 = sqrt(noise_var / pilot_len)
  double velocity_clamp = 0.0;  // 0 = off
  int threads = 0;              // worker cap; 0 = hardware concurrency
};

/// Outcome of one (SNR, method, run) cell. iterations/converged are only
/// present for the optimizer-backed methods.
struct RunReport {
  double snr_db = 0.0;
  Method method = Method::Ls;
  int run_index = 0;
  double nmse = 0.0;
  std::optional<int> iterations;
  std::optional<bool> converged;
};

/// Per-(SNR, method) aggregate over all runs.
struct MethodSummary {
  double snr_db = 0.0;
  Method method = Method::Ls;
  int runs = 0;
  double nmse_mean = 0.0;
  double nmse_std = 0.0;  // sample standard deviation; 0 for a single run
  std::optional<int> iter_min;
  std::optional<double> iter_median;
  std::optional<int> iter_max;
};

struct SweepResult {
  std::vector<RunReport> reports;
  std::vector<MethodSummary> summary;
};

/// Seed of the data stream (channel + noise) of one run. Deliberately
/// method-free so every method of a run index sees the same realization;
/// comparative studies are paired by construction.
std::uint64_t data_stream_seed(std::uint64_t master_seed, int snr_index,
                               int run_index);

/// Seed of the optimizer stream of one run; method-specific.
std::uint64_t optimizer_stream_seed(std::uint64_t master_seed, int snr_index,
                                    Method method, int run_index);

/// One Monte Carlo draw evaluated end to end: channel, noise, estimate of
/// the requested method (optimizers start from the LS estimate), NMSE
/// against the true channel.
RunReport run_single(const ExperimentConfig& cfg, double snr_db, int snr_index,
                     Method method, int run_index);

/// Full factorial over snr_grid x methods x runs with pre-derived seeds.
/// Reports are ordered (snr, method, run) regardless of thread count.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Paired iterations-to-convergence study: the sweep restricted to the PSO
/// and hybrid methods, which share channel and noise per run index.
SweepResult convergence_study(const ExperimentConfig& cfg);

struct TrajectoryPoint {
  Method method = Method::Pso;
  int iteration = 0;
  int particle = 0;
  double dim_a = 0.0;
  double dim_b = 0.0;
  double fitness = 0.0;
};

struct DispersionPoint {
  Method method = Method::Pso;
  int iteration = 0;
  double fitness_std = 0.0;
};

struct TrajectoryResult {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<TrajectoryPoint> points;
  std::vector<DispersionPoint> dispersion;
};

/// Runs PSO and hybrid with trajectory logging on one shared problem
/// instance (same channel, noise, LS seed, and optimizer stream seed) and
/// projects every particle onto the two chosen dimensions. Also reports the
/// per-iteration spread (sample std) of particle fitness as a scalar
/// exploration measure.
TrajectoryResult trajectory_study(const ExperimentConfig& cfg, double snr_db,
                                  int dim_a, int dim_b);

/// Cross-field validation of a full experiment configuration; throws
/// ConfigError naming the offending field.
void validate_config(const ExperimentConfig& cfg);

/// Writes sweep_raw.csv and sweep_summary.csv into out_dir (created if
/// missing). All floating-point fields use 17 significant digits.
void write_sweep_csv(const SweepResult& result,
                     const std::filesystem::path& out_dir);

/// Writes convergence.csv and convergence_summary.csv.
void write_convergence_csv(const SweepResult& result,
                           const std::filesystem::path& out_dir);

/// Writes trajectory.csv and dispersion.csv.
void write_trajectory_csv(const TrajectoryResult& result,
                          const std::filesystem::path& out_dir);

}  // namespace chanest
