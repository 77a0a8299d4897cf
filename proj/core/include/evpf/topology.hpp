#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace evpf {

/// Vertex kinds in delivery-tiebreak order.
enum class VertexKind : std::uint8_t { Input = 0, Filter = 1, Particle = 2, Output = 3 };

struct VertexId {
  /// Index addressing every vertex of a kind (multicast).
  static constexpr std::uint32_t kAll = 0xFFFFFFFFu;

  VertexKind kind = VertexKind::Input;
  std::uint32_t index = 0;

  [[nodiscard]] bool is_multicast() const noexcept { return index == kAll; }

  friend bool operator==(const VertexId&, const VertexId&) = default;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct Edge {
  VertexId src;
  VertexId dst;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Connectivity of the tracking network: input -> h filters -> n particles,
/// all-to-all among particles, and the leader particle back to every filter
/// and out to the output vertex.
struct Topology {
  std::uint32_t h = 0;
  std::uint32_t n = 0;
  std::uint32_t leader = 0;
  std::vector<Edge> input_to_filter;
  std::vector<Edge> filter_to_particle;
  std::vector<Edge> particle_to_particle;  // includes the n self edges
  std::vector<Edge> leader_edges;          // h ROI edges then the output edge
};

/// Throws std::invalid_argument for h == 0 or n == 0.
Topology build_topology(std::uint32_t h, std::uint32_t n);

/// Round-robin assignment of the seq-th input event to a filter vertex.
std::uint32_t distribute_event(std::uint64_t seq, std::uint32_t h) noexcept;

}  // namespace evpf
