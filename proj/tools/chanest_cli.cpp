// Command-line front end of the chanest shared library. Only the C API is
// used here; everything numeric happens behind libchanest.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanest.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct ExperimentDeleter {
  void operator()(chanest_experiment* e) const { chanest_experiment_free(e); }
};
using ExperimentHandle = std::unique_ptr<chanest_experiment, ExperimentDeleter>;

int status_to_exit(chanest_status status) {
  return status == CHANEST_ERR_CONFIG ? kExitConfig : kExitRuntime;
}

int fail(const chanest_experiment* exp, chanest_status status) {
  std::cerr << "chanest: " << chanest_last_error(exp) << "\n";
  return status_to_exit(status);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

// Flat INI-style config: [scenario] / [experiment] / [optimizer] sections
// with key = value lines; '#' and ';' start comments. Keys are globally
// unique, so sections only organize the file.
int apply_config_file(chanest_experiment* exp, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "chanest: cannot open config file '" << path << "'\n";
    return kExitConfig;
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        std::cerr << "chanest: " << path << ":" << line_no
                  << ": malformed section header '" << text << "'\n";
        return kExitConfig;
      }
      const std::string section = trim(text.substr(1, text.size() - 2));
      if (section != "scenario" && section != "experiment" &&
          section != "optimizer") {
        std::cerr << "chanest: " << path << ":" << line_no
                  << ": unknown section '" << section << "'\n";
        return kExitConfig;
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      std::cerr << "chanest: " << path << ":" << line_no
                << ": expected 'key = value', got '" << text << "'\n";
      return kExitConfig;
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const chanest_status status =
        chanest_experiment_set(exp, key.c_str(), value.c_str());
    if (status != CHANEST_OK) {
      std::cerr << "chanest: " << path << ":" << line_no << ": "
                << chanest_last_error(exp) << "\n";
      return status_to_exit(status);
    }
  }
  return 0;
}

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> seed;
  std::optional<std::string> snr;
  std::optional<std::string> runs;
  std::optional<std::string> max_iter;
  std::optional<std::string> tolerance;
  std::optional<std::string> threads;
  std::string out_dir = ".";
  std::string format = "csv";
  bool verbose = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool with_snr_list) {
  cmd->add_option("--config", flags->config_path,
                  "Config file (INI-style key = value)");
  cmd->add_option("--seed", flags->seed, "Master seed (unsigned 64-bit)")
      ->default_str("1");
  if (with_snr_list) {
    cmd->add_option("--snr", flags->snr, "Comma list of SNR values in dB")
        ->default_str("5,10,15,20,25");
  }
  cmd->add_option("--runs", flags->runs, "Monte Carlo runs per grid cell")
      ->default_str("12");
  cmd->add_option("--max-iter", flags->max_iter,
                  "Maximum optimizer iterations")
      ->default_str("10");
  cmd->add_option("--tolerance", flags->tolerance,
                  "Convergence tolerance ('inf' disables)")
      ->default_str("0.01");
  cmd->add_option("--threads", flags->threads, "Worker thread cap (0 = auto)")
      ->default_str("0");
  cmd->add_option("--out", flags->out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--format", flags->format, "Output format")
      ->capture_default_str();
  cmd->add_flag("-v,--verbose", flags->verbose, "Progress output on stderr");
}

int apply_set(chanest_experiment* exp, const char* key,
              const std::string& value) {
  const chanest_status status = chanest_experiment_set(exp, key, value.c_str());
  if (status != CHANEST_OK) return fail(exp, status);
  return 0;
}

// Config file first, then flag overrides.
int apply_common(chanest_experiment* exp, const CommonFlags& flags,
                 const char* snr_key) {
  if (flags.format != "csv") {
    std::cerr << "chanest: format: unsupported format '" << flags.format
              << "' (only csv)\n";
    return kExitConfig;
  }
  if (flags.config_path) {
    if (const int rc = apply_config_file(exp, *flags.config_path)) return rc;
  }
  if (flags.seed) {
    if (const int rc = apply_set(exp, "seed", *flags.seed)) return rc;
  }
  if (flags.snr) {
    if (const int rc = apply_set(exp, snr_key, *flags.snr)) return rc;
  }
  if (flags.runs) {
    if (const int rc = apply_set(exp, "runs", *flags.runs)) return rc;
  }
  if (flags.max_iter) {
    if (const int rc = apply_set(exp, "max_iter", *flags.max_iter)) return rc;
  }
  if (flags.tolerance) {
    if (const int rc = apply_set(exp, "tolerance", *flags.tolerance)) return rc;
  }
  if (flags.threads) {
    if (const int rc = apply_set(exp, "threads", *flags.threads)) return rc;
  }
  return 0;
}

bool parse_dims(const std::string& text, int* dim_a, int* dim_b) {
  int a = 0;
  int b = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d,%d%c", &a, &b, &extra) != 2) return false;
  *dim_a = a;
  *dim_b = b;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chanest — MIMO channel-estimation simulator (LS, MMSE, PSO, "
               "hybrid GA-PSO)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(chanest_version()));

  CommonFlags sweep_flags;
  std::optional<std::string> methods;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "SNR-vs-NMSE sweep; writes sweep_raw.csv and sweep_summary.csv");
  add_common_flags(sweep, &sweep_flags, true);
  sweep->add_option("--methods", methods,
                    "Comma list from ls,mmse,pso,hybrid")
      ->default_str("ls,mmse,pso,hybrid");

  CommonFlags conv_flags;
  CLI::App* convergence = app.add_subcommand(
      "convergence", "Paired pso/hybrid iterations-to-convergence study; "
                     "writes convergence.csv and convergence_summary.csv");
  add_common_flags(convergence, &conv_flags, true);

  CommonFlags traj_flags;
  std::string traj_snr = "15";
  std::string dims = "0,1";
  CLI::App* trajectory = app.add_subcommand(
      "trajectory", "Per-iteration swarm log of pso and hybrid on one shared "
                    "instance; writes trajectory.csv and dispersion.csv");
  add_common_flags(trajectory, &traj_flags, false);
  trajectory->add_option("--snr", traj_snr, "SNR of the instance in dB")
      ->capture_default_str();
  trajectory->add_option("--dims", dims,
                         "Two projection dimensions, e.g. 0,1")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ExperimentHandle exp(chanest_experiment_new());
  if (!exp) {
    std::cerr << "chanest: out of memory\n";
    return kExitRuntime;
  }

  if (sweep->parsed()) {
    if (const int rc = apply_common(exp.get(), sweep_flags, "snr_grid")) {
      return rc;
    }
    if (methods) {
      if (const int rc = apply_set(exp.get(), "methods", *methods)) return rc;
    }
    if (sweep_flags.verbose) std::cerr << "chanest: running sweep...\n";
    const chanest_status status =
        chanest_run_sweep(exp.get(), sweep_flags.out_dir.c_str());
    if (status != CHANEST_OK) return fail(exp.get(), status);
    if (sweep_flags.verbose) {
      std::cerr << "chanest: wrote sweep_raw.csv and sweep_summary.csv to "
                << sweep_flags.out_dir << "\n";
    }
    return 0;
  }

  if (convergence->parsed()) {
    if (const int rc = apply_common(exp.get(), conv_flags, "snr_grid")) {
      return rc;
    }
    if (conv_flags.verbose) {
      std::cerr << "chanest: running convergence study...\n";
    }
    const chanest_status status =
        chanest_run_convergence(exp.get(), conv_flags.out_dir.c_str());
    if (status != CHANEST_OK) return fail(exp.get(), status);
    if (conv_flags.verbose) {
      std::cerr << "chanest: wrote convergence.csv and convergence_summary.csv"
                << " to " << conv_flags.out_dir << "\n";
    }
    return 0;
  }

  // trajectory
  if (const int rc = apply_common(exp.get(), traj_flags, "snr_grid")) return rc;
  char* end = nullptr;
  const double snr_db = std::strtod(traj_snr.c_str(), &end);
  if (end != traj_snr.c_str() + traj_snr.size() || traj_snr.empty()) {
    std::cerr << "chanest: snr: invalid value '" << traj_snr << "'\n";
    return kExitConfig;
  }
  int dim_a = 0;
  int dim_b = 0;
  if (!parse_dims(dims, &dim_a, &dim_b)) {
    std::cerr << "chanest: dims: expected two comma-separated indices, got '"
              << dims << "'\n";
    return kExitConfig;
  }
  if (traj_flags.verbose) std::cerr << "chanest: running trajectory study...\n";
  const chanest_status status = chanest_run_trajectory(
      exp.get(), snr_db, dim_a, dim_b, traj_flags.out_dir.c_str());
  if (status != CHANEST_OK) return fail(exp.get(), status);
  if (traj_flags.verbose) {
    std::cerr << "chanest: wrote trajectory.csv and dispersion.csv to "
              << traj_flags.out_dir << "\n";
  }
  return 0;
}
