#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace chanest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            const char* expected) {
  throw ConfigError(std::string(key) + ": invalid value '" +
                    std::string(value) + "' (" + expected + ")");
}

long long parse_int(std::string_view key, std::string_view value) {
  value = trim(value);
  long long out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "expected an integer");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  value = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "expected an unsigned 64-bit integer");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "inf" || value == "+inf" || value == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  const std::string text(value);
  char* end = nullptr;
  const double out = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty()) {
    bad_value(key, value, "expected a number");
  }
  return out;
}

int parse_positive_int(std::string_view key, std::string_view value) {
  const long long v = parse_int(key, value);
  if (v < 1 || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(key) + ": must be >= 1, got '" +
                      std::string(value) + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = value.find(',');
    parts.push_back(trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return parts;
}

std::vector<double> parse_snr_grid(std::string_view key, std::string_view value) {
  std::vector<double> grid;
  for (std::string_view part : split_list(value)) {
    if (part.empty()) bad_value(key, value, "empty list entry");
    grid.push_back(parse_double(key, part));
  }
  if (grid.empty()) bad_value(key, value, "expected a non-empty list");
  return grid;
}

std::vector<Method> parse_methods(std::string_view key, std::string_view value) {
  std::vector<Method> methods;
  for (std::string_view part : split_list(value)) {
    if (part.empty()) bad_value(key, value, "empty list entry");
    const Method m = parse_method(part);
    if (std::find(methods.begin(), methods.end(), m) != methods.end()) {
      throw ConfigError(std::string(key) + ": duplicate method '" +
                        std::string(part) + "'");
    }
    methods.push_back(m);
  }
  if (methods.empty()) bad_value(key, value, "expected a non-empty list");
  return methods;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, std::string_view key,
                        std::string_view value) {
  key = trim(key);
  value = trim(value);

  // Scenario.
  if (key == "num_rx") {
    cfg.scenario.num_rx = parse_positive_int(key, value);
  } else if (key == "num_tx") {
    cfg.scenario.num_tx_users = parse_positive_int(key, value);
  } else if (key == "pilot_len") {
    cfg.scenario.pilot_len = parse_positive_int(key, value);

  // Experiment.
  } else if (key == "snr_grid") {
    cfg.snr_grid_db = parse_snr_grid(key, value);
  } else if (key == "methods") {
    cfg.methods = parse_methods(key, value);
  } else if (key == "runs") {
    cfg.runs = parse_positive_int(key, value);
    cfg.optimizer.base.runs = cfg.runs;
  } else if (key == "seed") {
    cfg.master_seed = parse_u64(key, value);
  } else if (key == "threads") {
    const long long v = parse_int(key, value);
    if (v < 0) throw ConfigError("threads: must be >= 0");
    cfg.threads = static_cast<int>(v);

  // Optimizer.
  } else if (key == "population") {
    cfg.optimizer.base.population = parse_positive_int(key, value);
  } else if (key == "inertia_start") {
    cfg.optimizer.base.inertia_start = parse_double(key, value);
  } else if (key == "inertia_end") {
    cfg.optimizer.base.inertia_end = parse_double(key, value);
  } else if (key == "accel_personal") {
    cfg.optimizer.base.accel_personal = parse_double(key, value);
  } else if (key == "accel_social") {
    cfg.optimizer.base.accel_social = parse_double(key, value);
  } else if (key == "max_iter") {
    cfg.optimizer.base.max_iter = parse_positive_int(key, value);
  } else if (key == "tolerance") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw ConfigError("tolerance: must be positive");
    cfg.optimizer.base.tolerance = v;
  } else if (key == "mutate_frac") {
    const double v = parse_double(key, value);
    if (v < 0.0 || v > 1.0) throw ConfigError("mutate_frac: must be in [0, 1]");
    cfg.optimizer.mutate_frac = v;
  } else if (key == "reproduce_frac") {
    const double v = parse_double(key, value);
    if (v < 0.0 || v > 1.0) {
      throw ConfigError("reproduce_frac: must be in [0, 1]");
    }
    cfg.optimizer.reproduce_frac = v;
  } else if (key == "mutation_var") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw ConfigError("mutation_var: must be positive");
    cfg.optimizer.mutation_sigma_sq = v;
  } else if (key == "fitness_floor") {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) throw ConfigError("fitness_floor: must be positive");
    cfg.fitness_floor = v;
  } else if (key == "swarm_spread") {
    if (value == "auto") {
      cfg.swarm_spread = 0.0;
    } else {
      const double v = parse_double(key, value);
      if (v < 0.0) {
        throw ConfigError("swarm_spread: must be >= 0 or 'auto'");
      }
      cfg.swarm_spread = v;
    }
  } else if (key == "stop_rule") {
    if (value == "stall") {
      cfg.stop_rule = StopRule::ImprovementStall;
    } else if (value == "threshold") {
      cfg.stop_rule = StopRule::FitnessThreshold;
    } else {
      bad_value(key, value, "expected 'stall' or 'threshold'");
    }
  } else if (key == "velocity_clamp") {
    const double v = parse_double(key, value);
    if (v < 0.0) throw ConfigError("velocity_clamp: must be >= 0 (0 disables)");
    cfg.velocity_clamp = v;
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

}  // namespace chanest
