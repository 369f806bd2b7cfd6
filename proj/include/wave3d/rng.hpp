#ifndef WAVE3D_RNG_HPP
#define WAVE3D_RNG_HPP

#include <cmath>
#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (seed, domain tag, key words), so any cell of any stream can be produced
// independently, in any order, on any thread.

namespace wave3d::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// Domain separation tags; streams with distinct tags never collide.
inline constexpr std::uint64_t kTagReplica = 0x7265706c69636173ull;
inline constexpr std::uint64_t kTagBridge = 0x6272696467653030ull;
inline constexpr std::uint64_t kTagField = 0x6669656c64303030ull;

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t absorb(std::uint64_t h, std::uint64_t w) {
  return mix64(h + 0x632be59bd9b4e019ull * w);
}

inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                               std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  std::uint64_t h = mix64(seed);
  h = absorb(h, tag);
  h = absorb(h, a);
  h = absorb(h, b);
  h = absorb(h, c);
  h = absorb(h, d);
  return h;
}

// Uniform in the open interval (0,1); never returns 0 or 1.
inline double to_open01(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

// One standard normal per key, via Box-Muller on two derived uniforms.
inline double keyed_normal(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                           std::uint64_t b, std::uint64_t c, std::uint64_t idx) {
  const double u1 = to_open01(keyed_u64(seed, tag, a, b, c, idx << 1));
  const double u2 = to_open01(keyed_u64(seed, tag, a, b, c, (idx << 1) | 1ull));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Collision-free replica seed derivation (splittable counter scheme).
inline std::uint64_t seed_stream(std::uint64_t master_seed, std::uint64_t replica_index) {
  return keyed_u64(master_seed, kTagReplica, replica_index, 0, 0, 0);
}

}  // namespace wave3d::rng

#endif
