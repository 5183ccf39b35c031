#ifndef SWL_RNG_HPP
#define SWL_RNG_HPP

#include <cstdint>
#include <utility>

#include "swl/common.hpp"

namespace swl {

// Counter-based random streams (Philox4x32-10).  A stream is identified by a
// 64-bit key; the value at any counter is a pure function of (key, counter),
// so replicas and time steps can be generated in any order, on any thread,
// with bit-identical results.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives a child stream key; successive tags give decorrelated keys.
inline std::uint64_t derive_key(std::uint64_t key, std::uint64_t tag) {
  return splitmix64(key ^ splitmix64(tag + 0x632BE59BD9B4E019ull));
}

struct Philox4x32 {
  std::uint32_t key0 = 0, key1 = 0;

  explicit Philox4x32(std::uint64_t key)
      : key0(static_cast<std::uint32_t>(key)),
        key1(static_cast<std::uint32_t>(key >> 32)) {}

  struct Block {
    std::uint32_t v[4];
  };

  // One 128-bit block at the given 128-bit counter (hi usually 0).
  Block block(std::uint64_t ctr_lo, std::uint64_t ctr_hi = 0) const {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    std::uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t m0 = 0xD2511F53ull * c0;
      const std::uint64_t m1 = 0xCD9E8D57ull * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(m0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(m0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(m1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(m1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return Block{{c0, c1, c2, c3}};
  }
};

// Gaussian/uniform access on top of Philox.  Each counter value yields an
// independent pair of values; consumption is fixed-size (Box-Muller), so no
// counter bookkeeping depends on the data.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : gen_(key) {}

  // Two independent U(0,1] values at the given counter.
  std::pair<double, double> uniform_pair(std::uint64_t ctr) const {
    const auto b = gen_.block(ctr);
    const std::uint64_t w0 =
        (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
    const std::uint64_t w1 =
        (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
    const double scale = 0x1.0p-53;
    double u0 = static_cast<double>(w0 >> 11) * scale;
    double u1 = static_cast<double>(w1 >> 11) * scale;
    if (u0 <= 0.0) u0 = scale;
    if (u1 <= 0.0) u1 = scale;
    return {u0, u1};
  }

  // Two independent N(0,1) values at the given counter (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t ctr) const {
    const auto [u0, u1] = uniform_pair(ctr);
    const double r = std::sqrt(-2.0 * std::log(u0));
    const double a = 2.0 * kPi * u1;
    return {r * std::cos(a), r * std::sin(a)};
  }

  std::uint64_t uniform_index(std::uint64_t ctr, std::uint64_t n) const {
    const auto b = gen_.block(ctr);
    const std::uint64_t w =
        (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
    return w % n;
  }

 private:
  Philox4x32 gen_;
};

// Stream key tags, one per consumer of randomness.
namespace stream_tag {
inline constexpr std::uint64_t kNoiseStep = 1;
inline constexpr std::uint64_t kReplica = 2;
inline constexpr std::uint64_t kBootstrap = 3;
inline constexpr std::uint64_t kProjection = 4;
}  // namespace stream_tag

}  // namespace swl

#endif
