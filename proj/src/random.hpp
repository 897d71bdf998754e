#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace chanest {

/// Folds the given parts into one 64-bit seed with a splitmix64-style
/// finalizer. Every (master seed, grid cell, run) pair gets its own stream
/// from this, so execution order and parallelism never change results.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

/// Deterministic random stream: a seeded mt19937_64 plus the samplers the
/// simulator needs. The engine's output sequence is fixed by the standard,
/// so a given (seed, call sequence) reproduces bit-identical values.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Uniform integer in [0, n); requires n >= 1.
  std::uint32_t uniform_index(std::uint32_t n);

  /// Standard normal sample. Box-Muller; the second value of each generated
  /// pair is cached, so consecutive calls consume two uniforms per pair.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace chanest
