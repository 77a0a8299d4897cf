#pragma once

#include <evpf/event.hpp>
#include <evpf/filter.hpp>
#include <evpf/topology.hpp>

#include <cstdint>
#include <variant>

namespace evpf {

struct EventPacket {
  Event event;
};

/// One particle's contribution to the all-to-all exchange of update `sequence`.
struct StateWeightPacket {
  std::uint32_t sender = 0;
  ParticleState state;
  double weight = 0.0;  // unnormalized likelihood
  std::uint64_t sequence = 0;
};

struct RoiUpdatePacket {
  RoiSpec roi;
  std::uint64_t sequence = 0;
};

/// Mean particle state published by the leader after update `sequence`.
struct OutputPacket {
  ParticleState mean;
  double t_us = 0.0;
  std::uint64_t sequence = 0;

  friend bool operator==(const OutputPacket&, const OutputPacket&) = default;
};

using Payload = std::variant<EventPacket, StateWeightPacket, RoiUpdatePacket, OutputPacket>;

struct Packet {
  VertexId src;
  VertexId dst;  // dst.index == VertexId::kAll addresses every vertex of dst.kind
  double send_time = 0.0;
  double deliver_time = 0.0;
  Payload payload;
};

}  // namespace evpf
