#pragma once

#include <evpf/event.hpp>
#include <evpf/filter.hpp>
#include <evpf/packet.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace evpf {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kRed{255, 0, 0};

class Image {
 public:
  Image(std::uint32_t width, std::uint32_t height, Rgb fill = kWhite);

  void set(std::int64_t x, std::int64_t y, Rgb color) noexcept;  // ignores out-of-bounds
  [[nodiscard]] Rgb at(std::uint32_t x, std::uint32_t y) const;
  [[nodiscard]] std::uint32_t width() const noexcept { return width_; }
  [[nodiscard]] std::uint32_t height() const noexcept { return height_; }
  [[nodiscard]] std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint8_t> pixels_;  // row-major RGB
};

/// Binary PPM (P6, maxval 255).
void write_ppm(std::ostream& out, const Image& image);

/// 1-px circle outline.
void draw_circle(Image& image, const ParticleState& circle, Rgb color);

/// White frame, events as black points, optional estimate as a red outline.
Image render_frame(const SensorGeometry& geometry, std::span<const Event> events,
                   const std::optional<ParticleState>& estimate);

/// Writes frame_00000.ppm, ... covering the event stream in steps of
/// `frame_period_us`. Each frame shows the events of its period and the
/// latest estimate published by the end of it. Returns the frame count.
std::size_t render_frames(const std::filesystem::path& dir, const SensorGeometry& geometry,
                          std::span<const Event> events, std::span<const OutputPacket> track,
                          double frame_period_us = 10'000.0);

}  // namespace evpf
