#include <evpf/vertices.hpp>

#include "update_cycle.hpp"

#include <cmath>
#include <string>

namespace evpf {

FilterDecision roi_filter_step(const RoiSpec& roi, const Event& e) noexcept {
  return roi.contains(e.x, e.y) ? FilterDecision::Forward : FilterDecision::Drop;
}

ParticleVertex::ParticleVertex(std::uint32_t index, const SimConfig& config, Rng noise,
                               const ParticleState& initial)
    : index_(index),
      config_(config),
      noise_(std::move(noise)),
      particle_{initial, 1.0 / static_cast<double>(config.n)} {
  if (index >= config.n) {
    throw std::invalid_argument("particle index out of range");
  }
  window_.reserve(config.filter.w_max);
}

std::vector<Packet> ParticleVertex::step(const Packet& in, double now) {
  if (const auto* ev = std::get_if<EventPacket>(&in.payload)) {
    return on_event(ev->event, now);
  }
  if (const auto* sw = std::get_if<StateWeightPacket>(&in.payload)) {
    return on_state_weight(*sw, now);
  }
  throw ProtocolError("particle " + std::to_string(index_) + " received an unexpected packet kind");
}

std::vector<Packet> ParticleVertex::on_event(const Event& e, double now) {
  detail::push_bounded(buffer_, e, config_.filter.w_max);
  ++new_events_;
  std::vector<Packet> out;
  if (auto broadcast = maybe_start_update(now)) {
    out.push_back(std::move(*broadcast));
  }
  return out;
}

std::optional<Packet> ParticleVertex::maybe_start_update(double now) {
  if (waiting_ || new_events_ < config_.filter.q_trigger) {
    return std::nullopt;
  }
  new_events_ = 0;
  waiting_ = true;

  detail::fill_window(buffer_, config_.filter.w_max, window_);
  const auto scored = detail::predict_and_score(particle_.state, window_, config_, noise_);
  particle_ = Particle{scored.state, scored.weight};

  const double send_time = now + config_.latency.particle_compute(window_.size());
  history_.push_back(UpdateRecord{sequence_, window_.size(), now, send_time, 0.0});

  Packet p;
  p.src = {VertexKind::Particle, index_};
  p.dst = {VertexKind::Particle, VertexId::kAll};
  p.send_time = send_time;
  p.deliver_time = send_time;
  p.payload = StateWeightPacket{index_, particle_.state, particle_.weight, sequence_};
  return p;
}

std::vector<Packet> ParticleVertex::on_state_weight(const StateWeightPacket& sw, double now) {
  if (sw.sequence < sequence_) {
    ++stale_packets_;
    return {};
  }
  if (sw.sender >= config_.n) {
    throw ProtocolError("state/weight packet from unknown sender " + std::to_string(sw.sender));
  }
  auto& barrier = barriers_[sw.sequence];
  if (barrier.entries.empty()) {
    barrier.entries.resize(config_.n);
  }
  auto& slot = barrier.entries[sw.sender];
  if (slot.has_value()) {
    throw ProtocolError("duplicate state/weight packet from sender " + std::to_string(sw.sender) +
                        " for update " + std::to_string(sw.sequence));
  }
  slot = sw;
  ++barrier.received;

  std::vector<Packet> out;
  if (sw.sequence != sequence_ || barrier.received < config_.n || !waiting_) {
    return out;
  }

  std::vector<Particle> population;
  population.reserve(config_.n);
  for (const auto& entry : barrier.entries) {
    population.push_back(Particle{entry->state, entry->weight});
  }
  barriers_.erase(sw.sequence);

  const auto outcome = detail::resolve_barrier(population, config_, sequence_);
  particle_ = outcome.resampled[index_];
  if (!history_.empty() && history_.back().sequence == sequence_) {
    history_.back().release_time = now;
  }

  if (is_leader()) {
    Packet roi;
    roi.src = {VertexKind::Particle, index_};
    roi.dst = {VertexKind::Filter, VertexId::kAll};
    roi.send_time = now;
    roi.deliver_time = now;
    roi.payload = RoiUpdatePacket{compute_roi(outcome.mean, config_.roi_gain, config_.roi_margin),
                                  sequence_};
    out.push_back(std::move(roi));

    Packet output;
    output.src = {VertexKind::Particle, index_};
    output.dst = {VertexKind::Output, 0};
    output.send_time = now;
    output.deliver_time = now;
    output.payload = OutputPacket{outcome.mean, now, sequence_};
    out.push_back(std::move(output));
  }

  ++sequence_;
  waiting_ = false;
  if (auto broadcast = maybe_start_update(now)) {
    out.push_back(std::move(*broadcast));
  }
  return out;
}

}  // namespace evpf
