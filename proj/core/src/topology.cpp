#include <evpf/topology.hpp>

#include <stdexcept>

namespace evpf {

Topology build_topology(std::uint32_t h, std::uint32_t n) {
  if (h == 0 || n == 0) {
    throw std::invalid_argument("topology needs at least one filter and one particle vertex");
  }
  Topology topo;
  topo.h = h;
  topo.n = n;
  topo.leader = 0;

  const VertexId input{VertexKind::Input, 0};
  const VertexId output{VertexKind::Output, 0};

  topo.input_to_filter.reserve(h);
  topo.filter_to_particle.reserve(static_cast<std::size_t>(h) * n);
  topo.particle_to_particle.reserve(static_cast<std::size_t>(n) * n);
  topo.leader_edges.reserve(h + 1);

  for (std::uint32_t f = 0; f < h; ++f) {
    topo.input_to_filter.push_back({input, {VertexKind::Filter, f}});
    for (std::uint32_t p = 0; p < n; ++p) {
      topo.filter_to_particle.push_back({{VertexKind::Filter, f}, {VertexKind::Particle, p}});
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      topo.particle_to_particle.push_back({{VertexKind::Particle, i}, {VertexKind::Particle, j}});
    }
  }
  const VertexId leader{VertexKind::Particle, topo.leader};
  for (std::uint32_t f = 0; f < h; ++f) {
    topo.leader_edges.push_back({leader, {VertexKind::Filter, f}});
  }
  topo.leader_edges.push_back({leader, output});
  return topo;
}

std::uint32_t distribute_event(std::uint64_t seq, std::uint32_t h) noexcept {
  return h == 0 ? 0 : static_cast<std::uint32_t>(seq % h);
}

}  // namespace evpf
