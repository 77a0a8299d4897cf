#pragma once

// Filter steps shared by the vertex graph and the sequential baseline, so
// both execution modes run literally the same arithmetic.

#include <evpf/filter.hpp>
#include <evpf/rng.hpp>
#include <evpf/simulation.hpp>

#include <deque>
#include <span>
#include <vector>

namespace evpf::detail {

struct ScoredParticle {
  ParticleState state;
  double weight = 0.0;
};

/// Copies the newest min(w_max, |buffer|) events newest-first into `window`.
inline void fill_window(const std::deque<Event>& buffer, std::size_t w_max,
                        std::vector<Event>& window) {
  window.clear();
  const std::size_t k = std::min(w_max, buffer.size());
  for (auto it = buffer.rbegin(); it != buffer.rbegin() + static_cast<std::ptrdiff_t>(k); ++it) {
    window.push_back(*it);
  }
}

inline void push_bounded(std::deque<Event>& buffer, const Event& e, std::size_t w_max) {
  buffer.push_back(e);
  while (buffer.size() > w_max) {
    buffer.pop_front();
  }
}

inline ScoredParticle predict_and_score(const ParticleState& state, std::span<const Event> window,
                                        const SimConfig& config, Rng& noise) {
  const auto predicted = apply_motion_model(state, config.filter, config.geometry, noise);
  const auto likelihood = incremental_likelihood(window, predicted, config.filter);
  return {predicted, likelihood.value};
}

struct BarrierOutcome {
  std::vector<Particle> resampled;
  ParticleState mean;
};

/// Normalizes the sender-ordered population, takes its weighted mean and
/// resamples with the offset every particle derives for `sequence`.
inline BarrierOutcome resolve_barrier(std::span<const Particle> population,
                                      const SimConfig& config, std::uint64_t sequence) {
  const auto normalized = normalize_weights(population, config.filter.eps_w);
  const double u0 = resample_offset(config.seed, sequence, normalized.size());
  return {systematic_resample(normalized, u0), mean_state(normalized)};
}

inline ParticleState initial_state(const SimConfig& config, Rng& noise) {
  if (config.prior.kind == Prior::Kind::Box) {
    return sample_box_prior(config.prior.center, config.prior.spread, config.filter,
                            config.geometry, noise);
  }
  return sample_uniform_prior(config.filter, config.geometry, noise);
}

}  // namespace evpf::detail
