#pragma once

#include <cstdint>
#include <random>

namespace heatlab {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Stream-splitting rule: the seed of stream (a, b) under master seed s is
/// splitmix64 applied three times, absorbing s, then a, then b. Every random
/// draw in the library comes from a stream named this way, so results depend
/// only on the master seed and the stream coordinates, never on scheduling.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept;

/// Thin wrapper over mt19937_64 with portable variate transforms (the
/// standard distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;
  /// Exponential with the given rate (> 0).
  double exponential(double rate) noexcept;

  std::uint64_t bits() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace heatlab
