#include <evpf/synth.hpp>

#include <evpf/event_io.hpp>
#include <evpf/rng.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace evpf {
namespace {

constexpr double kMicrosPerSecond = 1e6;

std::uint16_t to_pixel(double v, std::uint32_t extent) {
  const double rounded = std::round(v);
  const double clamped = std::clamp(rounded, 0.0, static_cast<double>(extent - 1));
  return static_cast<std::uint16_t>(clamped);
}

void validate(std::span<const GroundTruthSample> trajectory, const SynthParams& params) {
  if (trajectory.empty()) {
    throw std::invalid_argument("trajectory is empty");
  }
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    if (trajectory[i].t < trajectory[i - 1].t) {
      throw std::invalid_argument("trajectory time decreases at sample " + std::to_string(i));
    }
  }
  for (const auto& s : trajectory) {
    if (!(s.r > 0.0)) {
      throw std::invalid_argument("trajectory radius must be positive");
    }
  }
  if (params.event_rate < 0.0 || params.clutter_rate < 0.0 || params.contour_sigma < 0.0) {
    throw std::invalid_argument("rates and contour_sigma must be non-negative");
  }
  if (params.geometry.width == 0 || params.geometry.height == 0) {
    throw std::invalid_argument("sensor geometry must be non-empty");
  }
}

}  // namespace

std::optional<GroundTruthSample> interpolate_truth(std::span<const GroundTruthSample> truth,
                                                   double t) {
  if (truth.empty() || t < truth.front().t || t > truth.back().t) {
    return std::nullopt;
  }
  auto upper = std::upper_bound(truth.begin(), truth.end(), t,
                                [](double value, const GroundTruthSample& s) {
                                  return value < s.t;
                                });
  if (upper == truth.end()) {
    return truth.back();
  }
  const auto& hi = *upper;
  const auto& lo = *(upper - 1);
  const double span = hi.t - lo.t;
  const double a = span > 0.0 ? (t - lo.t) / span : 0.0;
  return GroundTruthSample{t, lo.cx + a * (hi.cx - lo.cx), lo.cy + a * (hi.cy - lo.cy),
                           lo.r + a * (hi.r - lo.r)};
}

SynthOutput generate_circle_events(std::span<const GroundTruthSample> trajectory,
                                   const SynthParams& params) {
  validate(trajectory, params);
  const auto& geo = params.geometry;
  const double t_begin = trajectory.front().t;
  const double t_end = trajectory.back().t;

  std::vector<Event> contour;
  const double r_max =
      std::max_element(trajectory.begin(), trajectory.end(), [](const auto& a, const auto& b) {
        return a.r < b.r;
      })->r;
  const double peak_rate = params.event_rate * 2.0 * std::numbers::pi * r_max / kMicrosPerSecond;
  if (peak_rate > 0.0) {
    auto rng = derive_stream(params.seed, StreamTag::Synth, 0);
    std::exponential_distribution<double> gap(peak_rate);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::bernoulli_distribution polarity(0.5);
    for (double t = t_begin + gap(rng); t <= t_end; t += gap(rng)) {
      const auto truth = *interpolate_truth(trajectory, t);
      if (unit(rng) * r_max > truth.r) {
        continue;
      }
      const double theta = angle(rng);
      const double rho = truth.r + params.contour_sigma * jitter(rng);
      contour.push_back(Event{static_cast<std::uint64_t>(std::floor(t)),
                              to_pixel(truth.cx + rho * std::cos(theta), geo.width),
                              to_pixel(truth.cy + rho * std::sin(theta), geo.height),
                              static_cast<std::uint8_t>(polarity(rng))});
    }
  }

  std::vector<Event> clutter;
  const double clutter_rate = params.clutter_rate / kMicrosPerSecond;
  if (clutter_rate > 0.0) {
    auto rng = derive_stream(params.seed, StreamTag::Synth, 1);
    std::exponential_distribution<double> gap(clutter_rate);
    std::uniform_int_distribution<std::uint32_t> xs(0, geo.width - 1);
    std::uniform_int_distribution<std::uint32_t> ys(0, geo.height - 1);
    std::bernoulli_distribution polarity(0.5);
    for (double t = t_begin + gap(rng); t <= t_end; t += gap(rng)) {
      const auto x = static_cast<std::uint16_t>(xs(rng));
      const auto y = static_cast<std::uint16_t>(ys(rng));
      clutter.push_back(Event{static_cast<std::uint64_t>(std::floor(t)), x, y,
                              static_cast<std::uint8_t>(polarity(rng))});
    }
  }

  return SynthOutput{merge_streams(contour, clutter),
                     std::vector<GroundTruthSample>(trajectory.begin(), trajectory.end())};
}

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "static") {
    return TrajectoryKind::Static;
  }
  if (name == "linear") {
    return TrajectoryKind::Linear;
  }
  if (name == "circle-orbit") {
    return TrajectoryKind::CircleOrbit;
  }
  throw std::invalid_argument("unknown trajectory '" + std::string(name) +
                              "' (expected static, linear or circle-orbit)");
}

std::string_view to_string(TrajectoryKind kind) noexcept {
  switch (kind) {
    case TrajectoryKind::Static:
      return "static";
    case TrajectoryKind::Linear:
      return "linear";
    case TrajectoryKind::CircleOrbit:
      return "circle-orbit";
  }
  return "static";
}

std::vector<GroundTruthSample> make_trajectory(const TrajectorySpec& spec) {
  if (!(spec.duration_us >= 0.0) || !(spec.radius > 0.0) || !(spec.sample_period_us > 0.0)) {
    throw std::invalid_argument("trajectory needs duration >= 0, radius > 0, sample period > 0");
  }
  const double cx = spec.geometry.width / 2.0;
  const double cy = spec.geometry.height / 2.0;
  const double speed_per_us = spec.speed / kMicrosPerSecond;

  std::vector<GroundTruthSample> out;
  if (spec.kind == TrajectoryKind::Static) {
    out.push_back({0.0, cx, cy, spec.radius});
    out.push_back({spec.duration_us, cx, cy, spec.radius});
    return out;
  }
  if (spec.kind == TrajectoryKind::Linear) {
    const double half = speed_per_us * spec.duration_us / 2.0;
    out.push_back({0.0, cx - half, cy, spec.radius});
    out.push_back({spec.duration_us, cx + half, cy, spec.radius});
    return out;
  }

  if (!(spec.orbit_radius > 0.0)) {
    throw std::invalid_argument("circle-orbit needs orbit_radius > 0");
  }
  const double omega = speed_per_us / spec.orbit_radius;  // rad/µs
  const auto steps = static_cast<std::size_t>(std::ceil(spec.duration_us / spec.sample_period_us));
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = std::min(static_cast<double>(i) * spec.sample_period_us, spec.duration_us);
    out.push_back({t, cx + spec.orbit_radius * std::cos(omega * t),
                   cy + spec.orbit_radius * std::sin(omega * t), spec.radius});
  }
  return out;
}

}  // namespace evpf
