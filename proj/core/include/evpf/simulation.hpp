#pragma once

#include <evpf/event.hpp>
#include <evpf/filter.hpp>
#include <evpf/packet.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evpf {

/// Modeled costs in microseconds.
struct LatencyModel {
  double t_particle_hop = 4.6;     // per state/weight packet serialized out of a particle
  double t_event_hop = 1.0;        // per event, ROI or output packet hop
  double t_score_per_event = 0.2;  // compute per event scored
  double t_cpu_overhead = 1.0;     // fixed compute per particle per update

  /// Compute time of one particle scoring a window of `window` events.
  [[nodiscard]] double particle_compute(std::size_t window) const noexcept {
    return t_score_per_event * static_cast<double>(window) + t_cpu_overhead;
  }
};

enum class ExecutionMode { Graph, Cpu };

ExecutionMode parse_execution_mode(std::string_view name);
std::string_view to_string(ExecutionMode mode) noexcept;

struct Prior {
  enum class Kind { Uniform, Box };
  Kind kind = Kind::Uniform;
  ParticleState center;  // Box only
  double spread = 10.0;  // Box only, pixels on each axis
};

struct SimConfig {
  std::uint32_t n = 100;
  std::uint32_t h = 8;
  FilterParams filter;
  LatencyModel latency;
  SensorGeometry geometry;
  std::uint64_t seed = 1;
  Prior prior;
  ExecutionMode mode = ExecutionMode::Graph;
  double roi_gain = 2.0;
  double roi_margin = 10.0;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct SimStats {
  std::uint64_t updates_total = 0;
  std::uint64_t events_in = 0;
  std::uint64_t events_dropped_roi = 0;
  std::uint64_t packets_state = 0;
  double mean_update_period_us = 0.0;
  double p99_update_period_us = 0.0;
  double modeled_update_rate_hz = 0.0;
  double barrier_wait_us_mean = 0.0;

  // Breakdown of the modeled period and extra conservation counters.
  double mean_compute_us = 0.0;
  double mean_comm_us = 0.0;
  std::uint64_t period_samples = 0;
  std::uint64_t events_forwarded = 0;
  std::uint64_t event_deliveries = 0;
  std::uint64_t packets_roi = 0;
  std::uint64_t packets_output = 0;
  std::uint64_t stale_state_packets = 0;

  /// `key=value` lines, fixed key order.
  [[nodiscard]] std::string to_text() const;
};

struct SimResult {
  std::vector<OutputPacket> track;
  SimStats stats;
};

/// Discrete-event execution of the vertex graph.
SimResult run_simulation(const SimConfig& config, std::span<const Event> events);

/// The same filter executed sequentially with a CPU cost model.
SimResult run_cpu_baseline(const SimConfig& config, std::span<const Event> events);

/// Dispatches on config.mode.
SimResult run(const SimConfig& config, std::span<const Event> events);

}  // namespace evpf
