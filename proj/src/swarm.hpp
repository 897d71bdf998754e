#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cmatrix.hpp"
#include "random.hpp"

namespace chanest {

/// Scalar objective over real vectors; lower is better. Must be pure: the
/// optimizer assumes repeated evaluation of the same point gives the same
/// value.
using Objective = std::function<double(std::span<const double>)>;

struct PsoConfig {
  int population = 64;          // Q
  double inertia_start = 0.9;   // w annealed linearly over iterations
  double inertia_end = 0.4;
  double accel_personal = 2.0;  // C1
  double accel_social = 2.0;    // C2
  int max_iter = 10;
  double tolerance = 1e-2;      // +infinity disables convergence detection
  int runs = 12;                // default Monte Carlo repetition count
};

struct HybridConfig {
  PsoConfig base;
  double mutate_frac = 0.05;       // elite fraction receiving Gaussian kicks
  double reproduce_frac = 0.05;    // worst fraction restarted from personal best
  double mutation_sigma_sq = 0.02; // variance of the per-dimension kick
};

enum class OptimizerKind { Pso, Hybrid };

/// Convergence detection rule. ImprovementStall: stop at the first iteration
/// whose global-best improvement falls below the tolerance. FitnessThreshold:
/// stop once the global best itself falls below the tolerance. Both report
/// zero iterations when the initial swarm's best is already below tolerance.
enum class StopRule { ImprovementStall, FitnessThreshold };

/// Role assigned to a particle by the most recent hybrid step.
enum class ParticleRole { Better, Mutated, Reproduced };

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double fitness = 0.0;       // objective at the current position
  double best_fitness = 0.0;  // objective at best_position
};

struct Swarm {
  std::vector<Particle> particles;
  std::vector<ParticleRole> roles;  // per-particle role of the last hybrid step
  std::size_t best_index = 0;       // lowest index wins exact fitness ties

  const Particle& best() const { return particles[best_index]; }
};

/// One logged generation: all positions, their fitness, and the global best.
struct SwarmSnapshot {
  std::vector<std::vector<double>> positions;
  std::vector<double> fitness;
  double best_fitness = 0.0;
};

struct OptRun {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  int iterations_used = 0;
  bool converged = false;
  std::vector<SwarmSnapshot> trajectory;  // iterations_used + 1 entries when logged
};

struct RunOptions {
  double spread = 0.0;         // std of the initial scatter around the seed
  StopRule stop_rule = StopRule::ImprovementStall;
  double velocity_clamp = 0.0; // per-dimension |v| cap; 0 disables
  bool log_trajectory = false;
};

/// Real vectorization of a complex matrix: row-major entries with real and
/// imaginary parts interleaved. decode(encode(h)) == h exactly.
std::vector<double> encode(const CMatrix& h);
CMatrix decode(std::span<const double> v, int rows, int cols);

/// Builds the initial swarm: particle 0 sits exactly on the seed solution,
/// the rest scatter around it with i.i.d. Gaussian(0, spread^2) offsets per
/// dimension. All velocities start at zero; personal bests are the starting
/// positions. Randomness is consumed in particle-index order, dimension by
/// dimension.
Swarm init_swarm(std::span<const double> seed_solution, const PsoConfig& cfg,
                 double spread, RandomStream& rng, const Objective& objective);

/// Standard synchronous PSO generation. Inertia anneals linearly from
/// inertia_start at iter_index 0 to inertia_end at max_iter - 1. Each
/// particle consumes 2 uniforms per dimension (r1, r2 interleaved) in
/// particle-index order; the social attractor is the global best frozen at
/// step entry. Personal and global bests update on strict improvement only.
void pso_step(Swarm& swarm, const Objective& objective, int iter_index,
              const PsoConfig& cfg, RandomStream& rng,
              double velocity_clamp = 0.0);

/// Hybrid generation. Partitions the population into best / better / worst:
/// the best group is the currently fittest particle plus floor(mutate_frac*Q)-1
/// others drawn uniformly at random, the worst group is the currently worst
/// particle plus floor(reproduce_frac*Q)-1 random others disjoint from the
/// best group. Worst particles restart from their personal best with zero
/// velocity, best particles get an i.i.d. Gaussian(0, mutation_sigma_sq)
/// position kick (velocity kept), everyone else takes the standard PSO move.
/// With both fractions zero this consumes exactly the random draws of
/// pso_step and reproduces it bit for bit. Throws ConfigError when the two
/// groups would cover the whole population.
void hybrid_step(Swarm& swarm, const Objective& objective, int iter_index,
                 const HybridConfig& cfg, RandomStream& rng,
                 double velocity_clamp = 0.0);

/// Full optimization run: init_swarm, then pso_step or hybrid_step up to
/// max_iter times. Convergence per RunOptions::stop_rule; iterations_used is
/// the iteration at which it triggered (0 when the initial best is already
/// below tolerance), or max_iter with converged == false when it never did.
OptRun run_optimizer(const Objective& objective,
                     std::span<const double> seed_solution,
                     const HybridConfig& cfg, OptimizerKind kind,
                     RandomStream& rng, const RunOptions& options);

}  // namespace chanest
