#include <evpf/track_io.hpp>

#include <evpf/event.hpp>

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace evpf {

void write_track_csv(std::ostream& out, std::span<const OutputPacket> track) {
  out << "t_us,x,y,r\n";
  char buf[160];
  for (const auto& p : track) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.4f,%.4f,%.4f\n", p.t_us, p.mean.x, p.mean.y,
                  p.mean.r);
    out << buf;
  }
}

std::vector<OutputPacket> read_track_csv(std::istream& in) {
  std::vector<OutputPacket> track;
  std::string line;
  bool header_checked = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!header_checked) {
      header_checked = true;
      if (line.rfind("t_us", 0) == 0) {
        continue;
      }
    }
    double values[4];
    const char* cur = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 4; ++i) {
      while (cur < end && *cur == ' ') {
        ++cur;
      }
      auto [ptr, ec] = std::from_chars(cur, end, values[i]);
      while (ptr < end && *ptr == ' ') {
        ++ptr;
      }
      const bool last = i == 3;
      if (ec != std::errc{} || (last ? ptr != end : (ptr == end || *ptr != ','))) {
        throw ParseError("bad track record '" + line + "'");
      }
      cur = last ? ptr : ptr + 1;
    }
    if (!track.empty() && values[0] < track.back().t_us) {
      throw StreamError("track timestamp regression at record " + std::to_string(track.size()),
                        track.size());
    }
    track.push_back(OutputPacket{{values[1], values[2], values[3]}, values[0], track.size()});
  }
  return track;
}

}  // namespace evpf
