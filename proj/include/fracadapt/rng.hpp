#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fracadapt {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic stream derived from a base seed and a key path, e.g.
/// (seed, dist, xi0, phi, L, replication). Streams with different keys are
/// independent of one another and of the order in which they are created.
inline Engine make_stream(std::uint64_t base_seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(base_seed);
    for (auto k : keys) h = mix64(h ^ mix64(k));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return Engine(seq);
}

}  // namespace fracadapt
