#pragma once

#include <evpf/filter.hpp>
#include <evpf/packet.hpp>
#include <evpf/rng.hpp>
#include <evpf/simulation.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace evpf {

/// Raised on a message that breaks the exchange protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FilterDecision { Forward, Drop };

FilterDecision roi_filter_step(const RoiSpec& roi, const Event& e) noexcept;

class RoiFilterVertex {
 public:
  explicit RoiFilterVertex(const RoiSpec& initial) : roi_(initial) {}

  FilterDecision on_event(const Event& e) const noexcept { return roi_filter_step(roi_, e); }
  void on_roi_update(const RoiUpdatePacket& update) noexcept { roi_ = update.roi; }

  [[nodiscard]] const RoiSpec& roi() const noexcept { return roi_; }

 private:
  RoiSpec roi_;
};

/// Timing of one update as seen by one particle.
struct UpdateRecord {
  std::uint64_t sequence = 0;
  std::size_t window = 0;
  double trigger_time = 0.0;
  double broadcast_time = 0.0;
  double release_time = 0.0;
};

/// One particle core: buffers forwarded events, triggers an update every
/// q_trigger new events, exchanges (state, weight) with every peer and
/// resamples once the barrier for the current sequence number is complete.
class ParticleVertex {
 public:
  ParticleVertex(std::uint32_t index, const SimConfig& config, Rng noise,
                 const ParticleState& initial);

  /// Handles one delivered packet at simulated time `now`; returns packets to send.
  /// A state/weight broadcast is returned once, addressed to {Particle, kAll}.
  std::vector<Packet> step(const Packet& in, double now);

  [[nodiscard]] std::uint32_t index() const noexcept { return index_; }
  [[nodiscard]] bool is_leader() const noexcept { return index_ == 0; }
  [[nodiscard]] const Particle& particle() const noexcept { return particle_; }
  [[nodiscard]] bool waiting() const noexcept { return waiting_; }
  [[nodiscard]] std::uint64_t sequence() const noexcept { return sequence_; }
  [[nodiscard]] std::uint64_t stale_packets() const noexcept { return stale_packets_; }
  [[nodiscard]] std::size_t buffered() const noexcept { return buffer_.size(); }
  [[nodiscard]] std::size_t pending_new() const noexcept { return new_events_; }
  [[nodiscard]] const std::vector<UpdateRecord>& history() const noexcept { return history_; }

 private:
  std::vector<Packet> on_event(const Event& e, double now);
  std::vector<Packet> on_state_weight(const StateWeightPacket& sw, double now);
  std::optional<Packet> maybe_start_update(double now);

  std::uint32_t index_;
  SimConfig config_;
  Rng noise_;
  Particle particle_;
  std::deque<Event> buffer_;  // oldest at front
  std::vector<Event> window_;
  std::size_t new_events_ = 0;
  bool waiting_ = false;
  std::uint64_t sequence_ = 0;
  std::uint64_t stale_packets_ = 0;

  struct Barrier {
    std::vector<std::optional<StateWeightPacket>> entries;
    std::size_t received = 0;
  };
  std::map<std::uint64_t, Barrier> barriers_;
  std::vector<UpdateRecord> history_;
};

}  // namespace evpf
