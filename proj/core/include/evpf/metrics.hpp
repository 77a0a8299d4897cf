#pragma once

#include <evpf/event.hpp>
#include <evpf/packet.hpp>
#include <evpf/simulation.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace evpf {

struct TrackErrorOptions {
  double lost_threshold = 20.0;  // pixels
  double settle_fraction = 0.1;  // leading fraction of the track duration ignored
};

struct TrackError {
  double mean_center_err = 0.0;
  double p95_center_err = 0.0;
  double mean_radius_err = 0.0;
  double lost_fraction = 0.0;
  std::size_t samples = 0;   // scored samples
  std::size_t excluded = 0;  // outside the truth span
  std::size_t settling = 0;  // inside the settling window
};

/// Scores each track sample against linearly interpolated ground truth.
TrackError compute_tracking_error(std::span<const OutputPacket> track,
                                  std::span<const GroundTruthSample> truth,
                                  const TrackErrorOptions& options = {});

/// Outputs per second over the span of the track. Throws std::domain_error
/// when fewer than two samples (or a zero-length span) make it undefined.
double compute_update_rate(std::span<const OutputPacket> track);

struct ScalingRow {
  std::uint32_t n = 0;
  ExecutionMode mode = ExecutionMode::Graph;
  double rate_hz = 0.0;
  double period_us = 0.0;
  SimStats stats;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
};

/// Runs both execution modes for every n (strictly ascending) on the same stream.
ScalingReport scaling_experiment(const SimConfig& base, std::span<const std::uint32_t> n_values,
                                 std::span<const Event> events);

void write_track_error_csv(std::ostream& out, const TrackError& error);
void write_scaling_csv(std::ostream& out, const ScalingReport& report);

}  // namespace evpf
