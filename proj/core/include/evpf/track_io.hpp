#pragma once

#include <evpf/packet.hpp>

#include <iosfwd>
#include <span>
#include <vector>

namespace evpf {

/// Track CSV: header `t_us,x,y,r`, one output per line.
void write_track_csv(std::ostream& out, std::span<const OutputPacket> track);
std::vector<OutputPacket> read_track_csv(std::istream& in);

}  // namespace evpf
