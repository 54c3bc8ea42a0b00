#pragma once

#include <array>
#include <cstdint>

namespace pointhop {

/// Counter-based pseudo-random generator: Philox-4x32 with 10 rounds
/// (Salmon, Moraes, Dror, Shaw, 2011). The 64-bit seed forms the key and
/// the 64-bit stream id occupies the upper counter words, so outputs are
/// a pure function of (seed, stream, draw index). That makes every seeded
/// operation in this library bit-reproducible across runs and platforms.
class Philox {
 public:
  explicit Philox(uint64_t seed, uint64_t stream = 0);

  uint32_t next_u32();
  uint64_t next_u64();

  /// Uniform in [0,1) with 53 random bits.
  double next_double();

  /// Uniform integer in [0,n), unbiased via rejection sampling. n >= 1.
  uint64_t next_below(uint64_t n);

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  uint64_t block_ = 0;
  uint64_t stream_ = 0;
  std::array<uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
};

/// One stateless SplitMix64 mixing step (Steele, Lea, Flood, 2014).
uint64_t splitmix64(uint64_t x);

/// Named sub-stream seeds: derive(master, domain, index) =
/// splitmix64(splitmix64(splitmix64(master) ^ domain) ^ index).
/// Each (domain, index) pair gets an independent, reproducible stream.
uint64_t derive_seed(uint64_t master, uint64_t domain, uint64_t index);

// Domain tags used across the library. Keeping them in one place avoids
// accidental stream collisions between subsystems.
namespace seed_domain {
inline constexpr uint64_t convert = 1;
inline constexpr uint64_t fit_dropout = 2;
inline constexpr uint64_t eval_dropout = 3;
inline constexpr uint64_t unit_sampling = 4;
inline constexpr uint64_t forest = 5;
}  // namespace seed_domain

}  // namespace pointhop
