#include <evpf/render.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace evpf {

Image::Image(std::uint32_t width, std::uint32_t height, Rgb fill)
    : width_(width), height_(height), pixels_(static_cast<std::size_t>(width) * height * 3) {
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

void Image::set(std::int64_t x, std::int64_t y, Rgb color) noexcept {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    return;
  }
  const auto i = (static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x)) * 3;
  pixels_[i] = color.r;
  pixels_[i + 1] = color.g;
  pixels_[i + 2] = color.b;
}

Rgb Image::at(std::uint32_t x, std::uint32_t y) const {
  if (x >= width_ || y >= height_) {
    throw std::out_of_range("pixel outside image");
  }
  const auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return Rgb{pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void write_ppm(std::ostream& out, const Image& image) {
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void draw_circle(Image& image, const ParticleState& circle, Rgb color) {
  // Two samples per pixel of circumference keeps the outline gap-free.
  const auto steps = std::max<std::size_t>(
      8, static_cast<std::size_t>(std::ceil(4.0 * std::numbers::pi * std::max(circle.r, 1.0))));
  for (std::size_t i = 0; i < steps; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(steps);
    image.set(std::llround(circle.x + circle.r * std::cos(a)),
              std::llround(circle.y + circle.r * std::sin(a)), color);
  }
}

Image render_frame(const SensorGeometry& geometry, std::span<const Event> events,
                   const std::optional<ParticleState>& estimate) {
  Image image(geometry.width, geometry.height);
  for (const auto& e : events) {
    image.set(e.x, e.y, kBlack);
  }
  if (estimate) {
    draw_circle(image, *estimate, kRed);
  }
  return image;
}

std::size_t render_frames(const std::filesystem::path& dir, const SensorGeometry& geometry,
                          std::span<const Event> events, std::span<const OutputPacket> track,
                          double frame_period_us) {
  if (!(frame_period_us > 0.0)) {
    throw std::invalid_argument("frame period must be positive");
  }
  if (events.empty()) {
    return 0;
  }
  std::filesystem::create_directories(dir);
  const double start = static_cast<double>(events.front().t);
  const double stop = static_cast<double>(events.back().t);
  const auto frames = static_cast<std::size_t>(std::floor((stop - start) / frame_period_us)) + 1;

  std::size_t next_event = 0;
  std::size_t next_output = 0;
  std::optional<ParticleState> estimate;
  for (std::size_t f = 0; f < frames; ++f) {
    const double frame_end = start + static_cast<double>(f + 1) * frame_period_us;
    const std::size_t first = next_event;
    while (next_event < events.size() && static_cast<double>(events[next_event].t) < frame_end) {
      ++next_event;
    }
    while (next_output < track.size() && track[next_output].t_us < frame_end) {
      estimate = track[next_output].mean;
      ++next_output;
    }
    const auto image = render_frame(geometry, events.subspan(first, next_event - first), estimate);
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05zu.ppm", f);
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write frame " + (dir / name).string());
    }
    write_ppm(out, image);
  }
  return frames;
}

}  // namespace evpf
