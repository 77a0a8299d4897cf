// Brute-force reference implementations shared by the unit and acceptance
// tests. They favour obviousness over speed.
#pragma once

#include <evpf/filter.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace evpf::oracle {

/// Evaluates S_k / (2*pi*r) for every prefix length k independently.
inline LikelihoodResult all_windows_likelihood(std::span<const Event> newest_first,
                                               const ParticleState& s, const FilterParams& p) {
  if (newest_first.empty()) {
    return {p.eps_w, 0};
  }
  double best = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= newest_first.size(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double dx = newest_first[i].x - s.x;
      const double dy = newest_first[i].y - s.y;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (std::abs(d - s.r) <= p.band) {
        sum += 1.0;
      } else if (d < s.r - p.band) {
        sum -= p.inner_penalty;
      }
    }
    if (best_k == 0 || sum > best) {
      best = sum;
      best_k = k;
    }
  }
  const double value = best / (2.0 * std::numbers::pi * s.r);
  return {value < p.eps_w ? p.eps_w : (value > 1.0 ? 1.0 : value), best_k};
}

/// Enumerates strata u0 + j/count and looks each one up by linear scan of
/// the cumulative sums. Exact-boundary points go to the upper interval.
inline std::vector<std::size_t> strata_indices(const std::vector<double>& weights, double u0,
                                               std::size_t count) {
  std::vector<double> cumulative;
  double acc = 0.0;
  for (double w : weights) {
    acc += w;
    cumulative.push_back(acc);
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < count; ++j) {
    const double u = u0 + static_cast<double>(j) / static_cast<double>(count);
    std::size_t idx = 0;
    while (idx + 1 < weights.size() && (u >= cumulative[idx] || weights[idx] == 0.0)) {
      ++idx;
    }
    out.push_back(idx);
  }
  return out;
}

/// Random newest-first window mixing on-contour, interior and exterior events.
inline std::vector<Event> random_window(std::mt19937_64& rng, const ParticleState& s,
                                        std::size_t length, const SensorGeometry& geo) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::vector<Event> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    double rho = s.r;
    switch (kind(rng)) {
      case 0:
        rho = s.r + (frac(rng) - 0.5) * 2.0;
        break;
      case 1:
        rho = frac(rng) * s.r;
        break;
      default:
        rho = s.r + 2.0 + frac(rng) * 20.0;
        break;
    }
    const double th = angle(rng);
    auto px = [&](double v, std::uint32_t extent) {
      const double c = std::round(v);
      return static_cast<std::uint16_t>(c < 0 ? 0 : (c > extent - 1 ? extent - 1 : c));
    };
    out.push_back(Event{1000 - i, px(s.x + rho * std::cos(th), geo.width),
                        px(s.y + rho * std::sin(th), geo.height), 0});
  }
  return out;
}

}  // namespace evpf::oracle
