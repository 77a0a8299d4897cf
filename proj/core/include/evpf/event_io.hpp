#pragma once

#include <evpf/event.hpp>

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evpf {

enum class EventFormat { Csv, Bin };

/// Size of one little-endian binary record: u64 t, u16 x, u16 y, u8 p, 3 pad bytes.
inline constexpr std::size_t kBinaryRecordSize = 16;

EventFormat parse_event_format(std::string_view name);
std::string_view to_string(EventFormat format) noexcept;

/// Parses one `t_us,x,y,p` line. Surrounding whitespace per field is accepted.
Event parse_event_csv(std::string_view line, const SensorGeometry& geometry = {});

std::vector<Event> read_event_stream(std::istream& in, EventFormat format,
                                     const SensorGeometry& geometry = {});
std::vector<Event> read_event_file(const std::string& path, EventFormat format,
                                   const SensorGeometry& geometry = {});

void write_event_stream(std::ostream& out, std::span<const Event> events, EventFormat format);
void write_event_file(const std::string& path, std::span<const Event> events, EventFormat format);

/// Stable time-ordered merge; on equal timestamps events from `a` come first.
std::vector<Event> merge_streams(std::span<const Event> a, std::span<const Event> b);

/// Ground truth CSV with header `t_us,cx,cy,r`.
void write_ground_truth(std::ostream& out, std::span<const GroundTruthSample> truth);
std::vector<GroundTruthSample> read_ground_truth(std::istream& in);

}  // namespace evpf
