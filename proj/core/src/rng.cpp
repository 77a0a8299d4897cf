#include <evpf/rng.hpp>

namespace evpf {

Rng derive_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double resample_offset(std::uint64_t seed, std::uint64_t sequence, std::size_t n) {
  auto rng = derive_stream(seed, StreamTag::Resample, sequence);
  std::uniform_real_distribution<double> u(0.0, 1.0 / static_cast<double>(n));
  return u(rng);
}

}  // namespace evpf
