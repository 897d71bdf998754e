#include "chanest.h"

#include <cstdint>
#include <limits>
#include <new>
#include <string>

#include "config.hpp"
#include "harness.hpp"

struct chanest_experiment {
  chanest::ExperimentConfig cfg;
  std::string last_error;
};

namespace {

template <typename Fn>
chanest_status guarded(chanest_experiment* exp, Fn&& fn) {
  if (exp == nullptr) return CHANEST_ERR_ARGUMENT;
  try {
    fn();
    exp->last_error.clear();
    return CHANEST_OK;
  } catch (const chanest::ConfigError& e) {
    exp->last_error = e.what();
    return CHANEST_ERR_CONFIG;
  } catch (const std::exception& e) {
    exp->last_error = e.what();
    return CHANEST_ERR_RUNTIME;
  }
}

int snr_grid_index(const chanest::ExperimentConfig& cfg, double snr_db) {
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
    if (cfg.snr_grid_db[i] == snr_db) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace

extern "C" {

const char* chanest_version(void) { return "0.1.0"; }

chanest_experiment* chanest_experiment_new(void) {
  return new (std::nothrow) chanest_experiment{};
}

void chanest_experiment_free(chanest_experiment* exp) { delete exp; }

chanest_status chanest_experiment_set(chanest_experiment* exp, const char* key,
                                      const char* value) {
  if (exp == nullptr) return CHANEST_ERR_ARGUMENT;
  if (key == nullptr || value == nullptr) {
    exp->last_error = "key and value must be non-null";
    return CHANEST_ERR_ARGUMENT;
  }
  return guarded(exp, [&] { chanest::apply_config_entry(exp->cfg, key, value); });
}

const char* chanest_last_error(const chanest_experiment* exp) {
  if (exp == nullptr) return "null experiment handle";
  return exp->last_error.c_str();
}

chanest_status chanest_run_sweep(chanest_experiment* exp, const char* out_dir) {
  if (exp != nullptr && out_dir == nullptr) {
    exp->last_error = "out_dir must be non-null";
    return CHANEST_ERR_ARGUMENT;
  }
  return guarded(exp, [&] {
    chanest::write_sweep_csv(chanest::run_sweep(exp->cfg), out_dir);
  });
}

chanest_status chanest_run_convergence(chanest_experiment* exp,
                                       const char* out_dir) {
  if (exp != nullptr && out_dir == nullptr) {
    exp->last_error = "out_dir must be non-null";
    return CHANEST_ERR_ARGUMENT;
  }
  return guarded(exp, [&] {
    chanest::write_convergence_csv(chanest::convergence_study(exp->cfg), out_dir);
  });
}

chanest_status chanest_run_trajectory(chanest_experiment* exp, double snr_db,
                                      int dim_a, int dim_b,
                                      const char* out_dir) {
  if (exp != nullptr && out_dir == nullptr) {
    exp->last_error = "out_dir must be non-null";
    return CHANEST_ERR_ARGUMENT;
  }
  return guarded(exp, [&] {
    chanest::write_trajectory_csv(
        chanest::trajectory_study(exp->cfg, snr_db, dim_a, dim_b), out_dir);
  });
}

chanest_status chanest_run_single(chanest_experiment* exp, double snr_db,
                                  const char* method, uint64_t run_index,
                                  double* nmse_out, int* iterations_out,
                                  int* converged_out) {
  if (exp != nullptr && method == nullptr) {
    exp->last_error = "method must be non-null";
    return CHANEST_ERR_ARGUMENT;
  }
  return guarded(exp, [&] {
    if (run_index > static_cast<uint64_t>(std::numeric_limits<int>::max())) {
      throw chanest::ConfigError("run_index: too large");
    }
    chanest::validate_config(exp->cfg);
    const chanest::Method m = chanest::parse_method(method);
    const chanest::RunReport report =
        chanest::run_single(exp->cfg, snr_db, snr_grid_index(exp->cfg, snr_db),
                            m, static_cast<int>(run_index));
    if (nmse_out != nullptr) *nmse_out = report.nmse;
    if (iterations_out != nullptr) {
      *iterations_out = report.iterations ? *report.iterations : -1;
    }
    if (converged_out != nullptr) {
      *converged_out = report.converged ? (*report.converged ? 1 : 0) : -1;
    }
  });
}

}  // extern "C"
