#include <evpf/event_io.hpp>
#include <evpf/synth.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

namespace {

using evpf::GroundTruthSample;

std::vector<GroundTruthSample> stationary(double r, double duration_us) {
  return {{0.0, 150.0, 120.0, r}, {duration_us, 150.0, 120.0, r}};
}

double signed_contour_offset(const evpf::Event& e, const GroundTruthSample& truth) {
  return std::hypot(e.x - truth.cx, e.y - truth.cy) - truth.r;
}

TEST(GenerateCircleEvents, ZeroSigmaEventsSitOnTheContour) {
  evpf::TrajectorySpec spec;
  spec.kind = evpf::TrajectoryKind::CircleOrbit;
  spec.duration_us = 200'000;
  const auto trajectory = evpf::make_trajectory(spec);
  evpf::SynthParams params;
  params.contour_sigma = 0.0;
  params.clutter_rate = 0.0;
  params.seed = 3;
  const auto out = evpf::generate_circle_events(trajectory, params);
  ASSERT_GT(out.events.size(), 1000u);
  // Pixel rounding moves a point by at most sqrt(2)/2; the timestamp floor
  // adds < 1 µs of motion at 100 px/s.
  const double slack = std::sqrt(0.5) + 1e-3;
  for (const auto& e : out.events) {
    const auto truth = evpf::interpolate_truth(out.truth, static_cast<double>(e.t) + 0.5);
    ASSERT_TRUE(truth.has_value());
    EXPECT_LE(std::abs(signed_contour_offset(e, *truth)), slack);
  }
}

TEST(GenerateCircleEvents, ZeroRatesGiveEmptyStream) {
  evpf::SynthParams params;
  params.event_rate = 0.0;
  params.clutter_rate = 0.0;
  EXPECT_TRUE(evpf::generate_circle_events(stationary(20, 1e6), params).events.empty());
}

TEST(GenerateCircleEvents, RadialJitterStatistics) {
  const double sigma = 2.0;
  evpf::SynthParams params;
  params.event_rate = 10'000.0 / (2.0 * std::numbers::pi * 20.0);  // ~10k events in 1 s
  params.contour_sigma = sigma;
  params.clutter_rate = 0.0;
  params.seed = 11;
  const auto trajectory = stationary(20.0, 1e6);
  const auto out = evpf::generate_circle_events(trajectory, params);
  const double n = static_cast<double>(out.events.size());
  EXPECT_NEAR(n, 10'000.0, 4.0 * std::sqrt(10'000.0));

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& e : out.events) {
    const double d = signed_contour_offset(e, trajectory.front());
    sum += d;
    sum_sq += d * d;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_LE(std::abs(mean), 3.0 * sigma / std::sqrt(n));
  EXPECT_NEAR(stddev, sigma, 0.1 * sigma);
}

TEST(GenerateCircleEvents, ClutterRateAndBounds) {
  evpf::SynthParams params;
  params.event_rate = 0.0;
  params.clutter_rate = 5000.0;
  params.geometry = {64, 48};
  const auto out = evpf::generate_circle_events(stationary(10, 2e6), params);
  EXPECT_NEAR(static_cast<double>(out.events.size()), 10'000.0, 4.0 * 100.0);
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    EXPECT_TRUE(params.geometry.contains(out.events[i].x, out.events[i].y));
    if (i > 0) {
      EXPECT_GE(out.events[i].t, out.events[i - 1].t);
    }
  }
}

TEST(GenerateCircleEvents, DeterministicPerSeed) {
  evpf::TrajectorySpec spec;
  spec.kind = evpf::TrajectoryKind::Linear;
  spec.duration_us = 100'000;
  const auto trajectory = evpf::make_trajectory(spec);
  evpf::SynthParams params;
  params.seed = 99;
  auto bytes = [&](const evpf::SynthParams& p) {
    std::ostringstream out;
    const auto gen = evpf::generate_circle_events(trajectory, p);
    evpf::write_event_stream(out, gen.events, evpf::EventFormat::Bin);
    return out.str();
  };
  EXPECT_EQ(bytes(params), bytes(params));
  auto other = params;
  other.seed = 100;
  EXPECT_NE(bytes(params), bytes(other));
}

TEST(GenerateCircleEvents, RejectsBadInput) {
  evpf::SynthParams params;
  EXPECT_THROW(evpf::generate_circle_events({}, params), std::invalid_argument);
  const std::vector<GroundTruthSample> backwards{{10, 1, 1, 5}, {5, 1, 1, 5}};
  EXPECT_THROW(evpf::generate_circle_events(backwards, params), std::invalid_argument);
  params.clutter_rate = -1.0;
  EXPECT_THROW(evpf::generate_circle_events(stationary(5, 10), params), std::invalid_argument);
}

TEST(InterpolateTruth, LinearBetweenSamples) {
  const std::vector<GroundTruthSample> truth{{0, 0, 0, 10}, {1000, 10, 20, 20}};
  const auto mid = evpf::interpolate_truth(truth, 500);
  ASSERT_TRUE(mid);
  EXPECT_DOUBLE_EQ(mid->cx, 5.0);
  EXPECT_DOUBLE_EQ(mid->cy, 10.0);
  EXPECT_DOUBLE_EQ(mid->r, 15.0);
  EXPECT_DOUBLE_EQ(evpf::interpolate_truth(truth, 1000)->cx, 10.0);
  EXPECT_FALSE(evpf::interpolate_truth(truth, -1));
  EXPECT_FALSE(evpf::interpolate_truth(truth, 1000.5));
}

TEST(MakeTrajectory, BuiltIns) {
  evpf::TrajectorySpec spec;
  spec.duration_us = 1e6;
  spec.kind = evpf::TrajectoryKind::Static;
  const auto still = evpf::make_trajectory(spec);
  EXPECT_EQ(still.front().cx, still.back().cx);

  spec.kind = evpf::TrajectoryKind::Linear;
  const auto line = evpf::make_trajectory(spec);
  EXPECT_NEAR(line.back().cx - line.front().cx, spec.speed, 1e-9);

  spec.kind = evpf::TrajectoryKind::CircleOrbit;
  const auto orbit = evpf::make_trajectory(spec);
  double path = 0.0;
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    path += std::hypot(orbit[i].cx - orbit[i - 1].cx, orbit[i].cy - orbit[i - 1].cy);
  }
  EXPECT_NEAR(path, spec.speed, 0.01 * spec.speed);
  for (const auto& s : orbit) {
    EXPECT_NEAR(std::hypot(s.cx - 152.0, s.cy - 120.0), spec.orbit_radius, 1e-9);
  }

  EXPECT_EQ(evpf::parse_trajectory_kind("circle-orbit"), evpf::TrajectoryKind::CircleOrbit);
  EXPECT_THROW(evpf::parse_trajectory_kind("zigzag"), std::invalid_argument);
}

}  // namespace
