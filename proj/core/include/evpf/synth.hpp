#pragma once

#include <evpf/event.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace evpf {

struct SynthParams {
  double event_rate = 200.0;     // events per contour pixel per second
  double contour_sigma = 1.0;    // radial jitter, pixels
  double clutter_rate = 1000.0;  // uniform background events per second over the frame
  SensorGeometry geometry;
  std::uint64_t seed = 1;
};

struct SynthOutput {
  std::vector<Event> events;
  std::vector<GroundTruthSample> truth;
};

/// Emits a time-ordered event stream for a circle following `trajectory`.
///
/// Contour events form a Poisson process of intensity event_rate * 2*pi*r(t)
/// (sampled by thinning against the largest radius), placed uniformly in angle
/// with normal radial jitter and rounded to the nearest pixel. Clutter is a
/// homogeneous Poisson process uniform over the frame. Both are merged with
/// contour events first on equal timestamps.
SynthOutput generate_circle_events(std::span<const GroundTruthSample> trajectory,
                                   const SynthParams& params);

/// Linear interpolation of center and radius; nullopt outside the sampled span.
std::optional<GroundTruthSample> interpolate_truth(std::span<const GroundTruthSample> truth,
                                                   double t);

enum class TrajectoryKind { Static, Linear, CircleOrbit };

TrajectoryKind parse_trajectory_kind(std::string_view name);
std::string_view to_string(TrajectoryKind kind) noexcept;

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Static;
  double duration_us = 1e6;
  double radius = 15.0;
  double speed = 100.0;         // px/s along the path
  double orbit_radius = 40.0;   // circle-orbit only
  double sample_period_us = 1000.0;
  SensorGeometry geometry;
};

/// Built-in trajectories, all centered on the frame:
///   static       circle at the frame center
///   linear       horizontal sweep through the center at `speed`
///   circle-orbit center orbits the frame center at `speed` along the orbit
std::vector<GroundTruthSample> make_trajectory(const TrajectorySpec& spec);

}  // namespace evpf
