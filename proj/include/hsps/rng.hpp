#pragma once

#include <cstdint>
#include <random>

namespace hsps {

using Rng = std::mt19937_64;

/// Independent generator for substream `stream` of a run seeded with `seed`.
/// Substreams are what make batch results independent of the thread count.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace hsps
