#include "swarm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chanest {

namespace {

double anneal_inertia(const PsoConfig& cfg, int iter_index) {
  if (cfg.max_iter <= 1) return cfg.inertia_start;
  const double frac =
      static_cast<double>(iter_index) / static_cast<double>(cfg.max_iter - 1);
  return cfg.inertia_start - (cfg.inertia_start - cfg.inertia_end) * frac;
}

/// Velocity/position update of one particle against a frozen social
/// attractor. Consumes two uniforms per dimension, r1 before r2.
void pso_move(Particle& p, std::span<const double> gbest, double inertia,
              const PsoConfig& cfg, RandomStream& rng, double velocity_clamp) {
  const std::size_t dims = p.position.size();
  for (std::size_t d = 0; d < dims; ++d) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    double v = inertia * p.velocity[d] +
               cfg.accel_personal * r1 * (p.best_position[d] - p.position[d]) +
               cfg.accel_social * r2 * (gbest[d] - p.position[d]);
    if (velocity_clamp > 0.0) {
      v = std::clamp(v, -velocity_clamp, velocity_clamp);
    }
    p.velocity[d] = v;
    p.position[d] += v;
  }
}

/// Re-evaluates every particle at its new position and applies the
/// strict-improvement personal-best rule, then recomputes the global best
/// (lowest index wins ties).
void evaluate_and_update_bests(Swarm& swarm, const Objective& objective) {
  for (Particle& p : swarm.particles) {
    p.fitness = objective(p.position);
    if (p.fitness < p.best_fitness) {
      p.best_fitness = p.fitness;
      p.best_position = p.position;
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < swarm.particles.size(); ++i) {
    if (swarm.particles[i].best_fitness < swarm.particles[best].best_fitness) {
      best = i;
    }
  }
  swarm.best_index = best;
}

/// Samples `count` indices uniformly without replacement from `pool`,
/// consuming one uniform per pick. Picked values are appended to `out` and
/// removed from `pool`.
void sample_without_replacement(std::vector<std::size_t>& pool,
                                std::size_t count, RandomStream& rng,
                                std::vector<std::size_t>& out) {
  for (std::size_t n = 0; n < count; ++n) {
    const std::uint32_t pick =
        rng.uniform_index(static_cast<std::uint32_t>(pool.size()));
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + pick);
  }
}

}  // namespace

std::vector<double> encode(const CMatrix& h) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(h.rows()) * h.cols() * 2);
  for (int i = 0; i < h.rows(); ++i) {
    for (int j = 0; j < h.cols(); ++j) {
      v.push_back(h(i, j).real());
      v.push_back(h(i, j).imag());
    }
  }
  return v;
}

CMatrix decode(std::span<const double> v, int rows, int cols) {
  const std::size_t expect =
      2 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (v.size() != expect) {
    throw ShapeError("decode: vector length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(expect));
  }
  CMatrix h(rows, cols);
  std::size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      h(i, j) = Complex{v[k], v[k + 1]};
      k += 2;
    }
  }
  return h;
}

Swarm init_swarm(std::span<const double> seed_solution, const PsoConfig& cfg,
                 double spread, RandomStream& rng, const Objective& objective) {
  if (cfg.population < 1) {
    throw ConfigError("population: must be >= 1");
  }
  Swarm swarm;
  swarm.particles.resize(static_cast<std::size_t>(cfg.population));
  swarm.roles.assign(swarm.particles.size(), ParticleRole::Better);
  const std::vector<double> seed(seed_solution.begin(), seed_solution.end());
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    Particle& p = swarm.particles[i];
    p.position = seed;
    if (i > 0 && spread > 0.0) {
      for (double& x : p.position) x += spread * rng.gaussian();
    }
    p.velocity.assign(seed.size(), 0.0);
    p.best_position = p.position;
    p.fitness = objective(p.position);
    p.best_fitness = p.fitness;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < swarm.particles.size(); ++i) {
    if (swarm.particles[i].best_fitness < swarm.particles[best].best_fitness) {
      best = i;
    }
  }
  swarm.best_index = best;
  return swarm;
}

void pso_step(Swarm& swarm, const Objective& objective, int iter_index,
              const PsoConfig& cfg, RandomStream& rng, double velocity_clamp) {
  const double inertia = anneal_inertia(cfg, iter_index);
  const std::vector<double> gbest = swarm.best().best_position;
  std::fill(swarm.roles.begin(), swarm.roles.end(), ParticleRole::Better);
  for (Particle& p : swarm.particles) {
    pso_move(p, gbest, inertia, cfg, rng, velocity_clamp);
  }
  evaluate_and_update_bests(swarm, objective);
}

void hybrid_step(Swarm& swarm, const Objective& objective, int iter_index,
                 const HybridConfig& cfg, RandomStream& rng,
                 double velocity_clamp) {
  const std::size_t q = swarm.particles.size();
  const auto n_best = static_cast<std::size_t>(
      std::floor(cfg.mutate_frac * static_cast<double>(q)));
  const auto n_worst = static_cast<std::size_t>(
      std::floor(cfg.reproduce_frac * static_cast<double>(q)));
  if (n_best + n_worst >= q) {
    throw ConfigError(
        "mutate_frac/reproduce_frac: best and worst groups cover the whole "
        "population (" +
        std::to_string(n_best) + " + " + std::to_string(n_worst) + " >= " +
        std::to_string(q) + ")");
  }

  std::fill(swarm.roles.begin(), swarm.roles.end(), ParticleRole::Better);

  // Group selection draws come first, then particles move in index order, so
  // the per-step randomness layout is fixed. Groups are anchored on the
  // currently fittest / worst particle and filled with uniform random picks
  // instead of a full sort.
  if (n_best > 0) {
    std::size_t fittest = 0;
    for (std::size_t i = 1; i < q; ++i) {
      if (swarm.particles[i].fitness < swarm.particles[fittest].fitness) {
        fittest = i;
      }
    }
    swarm.roles[fittest] = ParticleRole::Mutated;
    std::vector<std::size_t> pool;
    pool.reserve(q - 1);
    for (std::size_t i = 0; i < q; ++i) {
      if (i != fittest) pool.push_back(i);
    }
    std::vector<std::size_t> extra;
    sample_without_replacement(pool, n_best - 1, rng, extra);
    for (std::size_t i : extra) swarm.roles[i] = ParticleRole::Mutated;
  }
  if (n_worst > 0) {
    std::size_t worst = q;
    for (std::size_t i = 0; i < q; ++i) {
      if (swarm.roles[i] != ParticleRole::Better) continue;
      if (worst == q ||
          swarm.particles[i].fitness > swarm.particles[worst].fitness) {
        worst = i;
      }
    }
    swarm.roles[worst] = ParticleRole::Reproduced;
    std::vector<std::size_t> pool;
    pool.reserve(q - 1);
    for (std::size_t i = 0; i < q; ++i) {
      if (swarm.roles[i] == ParticleRole::Better) pool.push_back(i);
    }
    std::vector<std::size_t> extra;
    sample_without_replacement(pool, n_worst - 1, rng, extra);
    for (std::size_t i : extra) swarm.roles[i] = ParticleRole::Reproduced;
  }

  const double inertia = anneal_inertia(cfg.base, iter_index);
  const double mutation_sigma = std::sqrt(cfg.mutation_sigma_sq);
  const std::vector<double> gbest = swarm.best().best_position;
  for (std::size_t i = 0; i < q; ++i) {
    Particle& p = swarm.particles[i];
    switch (swarm.roles[i]) {
      case ParticleRole::Reproduced:
        p.position = p.best_position;
        std::fill(p.velocity.begin(), p.velocity.end(), 0.0);
        break;
      case ParticleRole::Mutated:
        for (double& x : p.position) x += mutation_sigma * rng.gaussian();
        break;
      case ParticleRole::Better:
        pso_move(p, gbest, inertia, cfg.base, rng, velocity_clamp);
        break;
    }
  }
  evaluate_and_update_bests(swarm, objective);
}

OptRun run_optimizer(const Objective& objective,
                     std::span<const double> seed_solution,
                     const HybridConfig& cfg, OptimizerKind kind,
                     RandomStream& rng, const RunOptions& options) {
  Swarm swarm =
      init_swarm(seed_solution, cfg.base, options.spread, rng, objective);

  OptRun run;
  auto record = [&] {
    if (!options.log_trajectory) return;
    SwarmSnapshot snap;
    snap.positions.reserve(swarm.particles.size());
    snap.fitness.reserve(swarm.particles.size());
    for (const Particle& p : swarm.particles) {
      snap.positions.push_back(p.position);
      snap.fitness.push_back(p.fitness);
    }
    snap.best_fitness = swarm.best().best_fitness;
    run.trajectory.push_back(std::move(snap));
  };
  record();

  const double tolerance = cfg.base.tolerance;
  const bool detect = !std::isinf(tolerance);
  double previous_best = swarm.best().best_fitness;

  run.iterations_used = 0;
  run.converged = detect && previous_best < tolerance;
  if (!run.converged) {
    run.iterations_used = cfg.base.max_iter;
    for (int t = 1; t <= cfg.base.max_iter; ++t) {
      if (kind == OptimizerKind::Pso) {
        pso_step(swarm, objective, t - 1, cfg.base, rng, options.velocity_clamp);
      } else {
        hybrid_step(swarm, objective, t - 1, cfg, rng, options.velocity_clamp);
      }
      record();
      const double current_best = swarm.best().best_fitness;
      if (detect) {
        const bool stop =
            options.stop_rule == StopRule::ImprovementStall
                ? (previous_best - current_best) < tolerance
                : current_best < tolerance;
        if (stop) {
          run.iterations_used = t;
          run.converged = true;
          break;
        }
      }
      previous_best = current_best;
    }
  }

  run.best_position = swarm.best().best_position;
  run.best_fitness = swarm.best().best_fitness;
  return run;
}

}  // namespace chanest
