#include <evpf/event_io.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <iterator>
#include <fstream>
#include <istream>
#include <ostream>

namespace evpf {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  field = trim(field);
  if (field.empty()) {
    return false;
  }
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void fail(std::string_view line, std::string_view why) {
  throw ParseError("bad event record '" + std::string(line) + "': " + std::string(why));
}

void check_order(const std::vector<Event>& events, const Event& next) {
  if (!events.empty() && next.t < events.back().t) {
    throw StreamError("timestamp regression at record " + std::to_string(events.size()) + " (" +
                          std::to_string(next.t) + " < " + std::to_string(events.back().t) + ")",
                      events.size());
  }
}

template <typename T>
void put_le(unsigned char* dst, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    dst[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFu);
  }
}

template <typename T>
T get_le(const unsigned char* src) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(src[i]) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

EventFormat parse_event_format(std::string_view name) {
  if (name == "csv") {
    return EventFormat::Csv;
  }
  if (name == "bin") {
    return EventFormat::Bin;
  }
  throw std::invalid_argument("unknown event format '" + std::string(name) + "'");
}

std::string_view to_string(EventFormat format) noexcept {
  return format == EventFormat::Csv ? "csv" : "bin";
}

Event parse_event_csv(std::string_view line, const SensorGeometry& geometry) {
  const auto fields = split_fields(line);
  if (fields.size() != 4) {
    fail(line, "expected 4 fields, got " + std::to_string(fields.size()));
  }
  std::uint64_t t = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::uint64_t p = 0;
  if (!parse_number(fields[0], t) || !parse_number(fields[1], x) || !parse_number(fields[2], y) ||
      !parse_number(fields[3], p)) {
    fail(line, "non-numeric field");
  }
  if (x >= geometry.width || y >= geometry.height) {
    fail(line, "pixel outside " + std::to_string(geometry.width) + "x" +
                   std::to_string(geometry.height) + " sensor");
  }
  if (p > 1) {
    fail(line, "polarity must be 0 or 1");
  }
  return Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
               static_cast<std::uint8_t>(p)};
}

std::vector<Event> read_event_stream(std::istream& in, EventFormat format,
                                     const SensorGeometry& geometry) {
  std::vector<Event> events;
  if (format == EventFormat::Csv) {
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) {
        continue;
      }
      const Event e = parse_event_csv(line, geometry);
      check_order(events, e);
      events.push_back(e);
    }
    return events;
  }

  std::array<unsigned char, kBinaryRecordSize> record{};
  while (true) {
    in.read(reinterpret_cast<char*>(record.data()), record.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) {
      break;
    }
    if (got != record.size()) {
      throw ParseError("truncated binary record " + std::to_string(events.size()) + ": " +
                       std::to_string(got) + " of " + std::to_string(kBinaryRecordSize) +
                       " bytes");
    }
    Event e{get_le<std::uint64_t>(record.data()), get_le<std::uint16_t>(record.data() + 8),
            get_le<std::uint16_t>(record.data() + 10), record[12]};
    if (!geometry.contains(e.x, e.y) || e.p > 1) {
      throw ParseError("binary record " + std::to_string(events.size()) +
                       " has out-of-range pixel or polarity");
    }
    check_order(events, e);
    events.push_back(e);
  }
  return events;
}

std::vector<Event> read_event_file(const std::string& path, EventFormat format,
                                   const SensorGeometry& geometry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open event file '" + path + "'");
  }
  return read_event_stream(in, format, geometry);
}

void write_event_stream(std::ostream& out, std::span<const Event> events, EventFormat format) {
  if (format == EventFormat::Csv) {
    for (const auto& e : events) {
      out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<unsigned>(e.p) << '\n';
    }
    return;
  }
  std::array<unsigned char, kBinaryRecordSize> record{};
  for (const auto& e : events) {
    record.fill(0);
    put_le(record.data(), e.t);
    put_le(record.data() + 8, e.x);
    put_le(record.data() + 10, e.y);
    record[12] = e.p;
    out.write(reinterpret_cast<const char*>(record.data()), record.size());
  }
}

void write_event_file(const std::string& path, std::span<const Event> events, EventFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write event file '" + path + "'");
  }
  write_event_stream(out, events, format);
  if (!out) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

std::vector<Event> merge_streams(std::span<const Event> a, std::span<const Event> b) {
  std::vector<Event> out;
  out.reserve(a.size() + b.size());
  // std::merge takes from the first range on ties.
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const Event& lhs, const Event& rhs) { return lhs.t < rhs.t; });
  return out;
}

void write_ground_truth(std::ostream& out, std::span<const GroundTruthSample> truth) {
  out << "t_us,cx,cy,r\n";
  char buf[128];
  for (const auto& s : truth) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.4f,%.4f,%.4f\n", s.t, s.cx, s.cy, s.r);
    out << buf;
  }
}

std::vector<GroundTruthSample> read_ground_truth(std::istream& in) {
  std::vector<GroundTruthSample> truth;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    if (body.empty()) {
      continue;
    }
    if (first && body.rfind("t_us", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = split_fields(body);
    GroundTruthSample s;
    if (fields.size() != 4 || !parse_number(fields[0], s.t) || !parse_number(fields[1], s.cx) ||
        !parse_number(fields[2], s.cy) || !parse_number(fields[3], s.r)) {
      throw ParseError("bad ground-truth record '" + std::string(body) + "'");
    }
    if (!(s.r > 0.0)) {
      throw ParseError("ground-truth radius must be positive: '" + std::string(body) + "'");
    }
    if (!truth.empty() && s.t < truth.back().t) {
      throw StreamError("ground-truth timestamp regression at record " +
                            std::to_string(truth.size()),
                        truth.size());
    }
    truth.push_back(s);
  }
  return truth;
}

}  // namespace evpf
