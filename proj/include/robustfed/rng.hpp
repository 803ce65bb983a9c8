#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace robustfed {

using Rng = std::mt19937_64;

// splitmix64 step; used to mix seeds, not as a generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a tag path,
/// e.g. derive_seed(seed, {round, client_id, kByzantineStream}). Clients,
/// rounds and purposes get disjoint streams so results do not depend on
/// scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t tag : tags) {
    state ^= tag + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    out = splitmix64(state);
  }
  return out;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// stream purpose tags
inline constexpr std::uint64_t kStreamPartition = 101;
inline constexpr std::uint64_t kStreamAdversaries = 102;
inline constexpr std::uint64_t kStreamPoison = 103;
inline constexpr std::uint64_t kStreamTrain = 104;
inline constexpr std::uint64_t kStreamByzantine = 105;
inline constexpr std::uint64_t kStreamSelection = 106;
inline constexpr std::uint64_t kStreamInit = 107;
inline constexpr std::uint64_t kStreamData = 108;

}  // namespace robustfed
