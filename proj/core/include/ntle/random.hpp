#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace ntle {

/// SplitMix64 finalizer. Used to expand user seeds and to derive
/// independent per-replication streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream (a, b) under a base seed: base ^ mix(a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept;

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard; the seed is passed through splitmix64 first. Uniforms are built
/// from the top 53 bits and normals by Box-Muller, so no
/// implementation-defined std distributions are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace ntle
