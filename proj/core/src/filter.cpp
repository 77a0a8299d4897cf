#include <evpf/filter.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace evpf {
namespace {

// Stratum points sitting within this distance below a cumulative boundary
// are assigned to the next particle, so exact-boundary strata (uniform
// weights with u0 = 0) are not lost to summation round-off.
constexpr double kBoundarySlack = 1e-12;

constexpr double kNormalizedTolerance = 1e-6;

}  // namespace

bool RoiSpec::contains(double x, double y) const noexcept {
  return std::hypot(x - cx, y - cy) <= radius;
}

RoiSpec RoiSpec::whole_frame(const SensorGeometry& geometry) noexcept {
  const double w = geometry.width;
  const double h = geometry.height;
  return RoiSpec{w / 2.0, h / 2.0, std::hypot(w, h)};
}

void FilterParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw std::invalid_argument(std::string("invalid filter parameter: ") + what);
    }
  };
  require(sigma_xy >= 0.0, "sigma_xy must be >= 0");
  require(sigma_r >= 0.0, "sigma_r must be >= 0");
  require(band > 0.0, "band must be > 0");
  require(inner_penalty >= 0.0, "inner_penalty must be >= 0");
  require(q_trigger > 0, "q_trigger must be > 0");
  require(w_max > 0, "w_max must be > 0");
  require(q_trigger <= w_max, "q_trigger must not exceed w_max");
  require(eps_w > 0.0 && eps_w < 1.0, "eps_w must be in (0, 1)");
  require(r_min > 0.0, "r_min must be > 0");
  require(r_max >= r_min, "r_max must be >= r_min");
}

double contour_distance(const Event& e, const ParticleState& s) noexcept {
  const double dx = static_cast<double>(e.x) - s.x;
  const double dy = static_cast<double>(e.y) - s.y;
  return std::abs(std::sqrt(dx * dx + dy * dy) - s.r);
}

double event_score(const Event& e, const ParticleState& s, const FilterParams& params) noexcept {
  const double dx = static_cast<double>(e.x) - s.x;
  const double dy = static_cast<double>(e.y) - s.y;
  const double center = std::sqrt(dx * dx + dy * dy);
  if (std::abs(center - s.r) <= params.band) {
    return 1.0;
  }
  if (center < s.r - params.band) {
    return -params.inner_penalty;
  }
  return 0.0;
}

LikelihoodResult incremental_likelihood(std::span<const Event> newest_first,
                                        const ParticleState& s, const FilterParams& params) {
  if (newest_first.size() > params.w_max) {
    throw ContractViolation("likelihood window of " + std::to_string(newest_first.size()) +
                            " events exceeds w_max " + std::to_string(params.w_max));
  }
  if (newest_first.empty()) {
    return {params.eps_w, 0};
  }
  double sum = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < newest_first.size(); ++k) {
    sum += event_score(newest_first[k], s, params);
    if (sum > best) {
      best = sum;
      best_k = k + 1;
    }
  }
  const double value = best / (2.0 * std::numbers::pi * s.r);
  return {std::clamp(value, params.eps_w, 1.0), best_k};
}

ParticleState clamp_state(const ParticleState& s, const FilterParams& params,
                          const SensorGeometry& geometry) noexcept {
  return ParticleState{std::clamp(s.x, 0.0, static_cast<double>(geometry.width) - 1.0),
                       std::clamp(s.y, 0.0, static_cast<double>(geometry.height) - 1.0),
                       std::clamp(s.r, params.r_min, params.r_max)};
}

ParticleState apply_motion_model(const ParticleState& s, const FilterParams& params,
                                 const SensorGeometry& geometry, Rng& noise) {
  std::normal_distribution<double> z(0.0, 1.0);
  const double dx = z(noise);
  const double dy = z(noise);
  const double dr = z(noise);
  return clamp_state({s.x + params.sigma_xy * dx, s.y + params.sigma_xy * dy,
                      s.r + params.sigma_r * dr},
                     params, geometry);
}

std::vector<Particle> normalize_weights(std::span<const Particle> population, double eps_w) {
  std::vector<Particle> out(population.begin(), population.end());
  if (out.empty()) {
    return out;
  }
  const double n = static_cast<double>(out.size());
  const double sum = std::accumulate(out.begin(), out.end(), 0.0,
                                     [](double acc, const Particle& p) { return acc + p.weight; });
  if (sum < n * eps_w) {
    for (auto& p : out) {
      p.weight = 1.0 / n;
    }
    return out;
  }
  for (auto& p : out) {
    p.weight /= sum;
  }
  return out;
}

std::vector<std::size_t> systematic_resample_indices(std::span<const double> weights, double u0,
                                                     std::size_t count) {
  if (weights.empty()) {
    throw ContractViolation("cannot resample an empty population");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kNormalizedTolerance) {
    throw ContractViolation("weights are not normalized (sum = " + std::to_string(total) + ")");
  }
  const double step = 1.0 / static_cast<double>(count);
  if (u0 < 0.0 || u0 >= step) {
    throw ContractViolation("resampling offset must lie in [0, 1/count)");
  }

  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      last_positive = i;
    }
  }

  std::vector<std::size_t> picks;
  picks.reserve(count);
  std::size_t i = 0;
  double upper = weights[0];
  for (std::size_t j = 0; j < count; ++j) {
    const double u = u0 + static_cast<double>(j) * step;
    while (i < last_positive && u >= upper - kBoundarySlack) {
      ++i;
      upper += weights[i];
    }
    picks.push_back(i);
  }
  return picks;
}

std::vector<Particle> systematic_resample(std::span<const Particle> population, double u0) {
  std::vector<double> weights;
  weights.reserve(population.size());
  for (const auto& p : population) {
    weights.push_back(p.weight);
  }
  const auto picks = systematic_resample_indices(weights, u0, population.size());
  const double uniform = 1.0 / static_cast<double>(population.size());
  std::vector<Particle> out;
  out.reserve(picks.size());
  for (const auto idx : picks) {
    out.push_back(Particle{population[idx].state, uniform});
  }
  return out;
}

ParticleState mean_state(std::span<const Particle> population) {
  if (population.empty()) {
    throw std::invalid_argument("mean_state of an empty population");
  }
  ParticleState m{0.0, 0.0, 0.0};
  for (const auto& p : population) {
    m.x += p.weight * p.state.x;
    m.y += p.weight * p.state.y;
    m.r += p.weight * p.state.r;
  }
  return m;
}

RoiSpec compute_roi(const ParticleState& mean, double roi_gain, double roi_margin) {
  return RoiSpec{mean.x, mean.y, roi_gain * mean.r + roi_margin};
}

ParticleState sample_uniform_prior(const FilterParams& params, const SensorGeometry& geometry,
                                   Rng& noise) {
  std::uniform_real_distribution<double> xs(0.0, static_cast<double>(geometry.width) - 1.0);
  std::uniform_real_distribution<double> ys(0.0, static_cast<double>(geometry.height) - 1.0);
  std::uniform_real_distribution<double> rs(params.r_min, params.r_max);
  const double x = xs(noise);
  const double y = ys(noise);
  const double r = rs(noise);
  return ParticleState{x, y, r};
}

ParticleState sample_box_prior(const ParticleState& center, double spread,
                               const FilterParams& params, const SensorGeometry& geometry,
                               Rng& noise) {
  std::uniform_real_distribution<double> u(-spread, spread);
  const double dx = u(noise);
  const double dy = u(noise);
  const double dr = u(noise);
  return clamp_state({center.x + dx, center.y + dy, center.r + dr}, params, geometry);
}

}  // namespace evpf
