#pragma once

#include <cstdint>
#include <random>

namespace evpf {

using Rng = std::mt19937_64;

/// Purpose tags keep independently derived streams from colliding.
enum class StreamTag : std::uint32_t {
  Particle = 0x50415254,  // per-particle motion and prior noise
  Resample = 0x52534d50,  // shared per-update resampling offset
  Synth = 0x53594e54,     // synthetic event generation
};

/// Deterministic stream derived from (run seed, purpose, index).
Rng derive_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index = 0);

/// Systematic-resampling offset in [0, 1/n) for update `sequence`.
/// Every particle derives the same value, so resampling needs no coordinator.
double resample_offset(std::uint64_t seed, std::uint64_t sequence, std::size_t n);

}  // namespace evpf
