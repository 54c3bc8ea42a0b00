#include "pointhop/rng.hpp"

namespace pointhop {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& ctr, std::array<uint32_t, 2>& key) {
  const uint64_t p0 = uint64_t(kPhiloxM0) * ctr[0];
  const uint64_t p1 = uint64_t(kPhiloxM1) * ctr[2];
  const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += kPhiloxW0;
  key[1] += kPhiloxW1;
}

}  // namespace

Philox::Philox(uint64_t seed, uint64_t stream)
    : key_{uint32_t(seed), uint32_t(seed >> 32)}, stream_(stream) {}

void Philox::refill() {
  std::array<uint32_t, 4> ctr = {uint32_t(block_), uint32_t(block_ >> 32),
                                 uint32_t(stream_), uint32_t(stream_ >> 32)};
  std::array<uint32_t, 2> key = key_;
  for (int round = 0; round < 10; ++round) philox_round(ctr, key);
  buffer_ = ctr;
  buffer_pos_ = 0;
  ++block_;
}

uint32_t Philox::next_u32() {
  if (buffer_pos_ == 4) refill();
  return buffer_[buffer_pos_++];
}

uint64_t Philox::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t Philox::next_below(uint64_t n) {
  // Accept u < 2^64 - (2^64 mod n); that range holds a whole number of
  // copies of [0,n), so u % n is exactly uniform.
  const uint64_t rem = (UINT64_MAX % n + 1) % n;
  const uint64_t limit = UINT64_MAX - rem;
  uint64_t u;
  do {
    u = next_u64();
  } while (u > limit);
  return u % n;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t domain, uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ domain) ^ index);
}

}  // namespace pointhop
