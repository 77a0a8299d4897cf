#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace evpf {

/// Sensor dimensions in pixels. Defaults match the usual ATIS array.
struct SensorGeometry {
  std::uint32_t width = 304;
  std::uint32_t height = 240;

  [[nodiscard]] bool contains(std::uint32_t x, std::uint32_t y) const noexcept {
    return x < width && y < height;
  }
};

/// One change-detection spike: timestamp in microseconds, pixel, polarity.
struct Event {
  std::uint64_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint8_t p = 0;  // 0 = decrease, 1 = increase

  friend bool operator==(const Event&, const Event&) = default;
};

/// True target circle at time t.
struct GroundTruthSample {
  double t = 0.0;  // µs
  double cx = 0.0;
  double cy = 0.0;
  double r = 1.0;

  friend bool operator==(const GroundTruthSample&, const GroundTruthSample&) = default;
};

/// Malformed text or binary record.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed records that violate a stream-level rule (e.g. time regression).
class StreamError : public std::runtime_error {
 public:
  StreamError(const std::string& what, std::size_t record_index)
      : std::runtime_error(what), record_index_(record_index) {}

  [[nodiscard]] std::size_t record_index() const noexcept { return record_index_; }

 private:
  std::size_t record_index_;
};

}  // namespace evpf
