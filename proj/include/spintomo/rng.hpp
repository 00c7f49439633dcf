#pragma once

#include <cstdint>
#include <random>

namespace spintomo {

/// Reproducible random stream identified by (seed, stream).
///
/// Streams with different indices are seeded independently through std::seed_seq, so each
/// worker shard owns its own sequence and results do not depend on the thread count.
/// Only the raw 64-bit engine output is used, which the standard fixes bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// Standard normal variate (Box-Muller), for test fixtures and random states.
double standard_normal(Rng& rng);

}  // namespace spintomo
