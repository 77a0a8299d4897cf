#include <evpf/metrics.hpp>

#include <evpf/synth.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace evpf {

TrackError compute_tracking_error(std::span<const OutputPacket> track,
                                  std::span<const GroundTruthSample> truth,
                                  const TrackErrorOptions& options) {
  if (truth.empty()) {
    throw std::invalid_argument("ground truth is empty");
  }
  TrackError err;
  if (track.empty()) {
    return err;
  }
  const auto [lo, hi] = std::minmax_element(
      track.begin(), track.end(),
      [](const OutputPacket& a, const OutputPacket& b) { return a.t_us < b.t_us; });
  const double settle_until = lo->t_us + options.settle_fraction * (hi->t_us - lo->t_us);

  std::vector<double> center_errors;
  double radius_sum = 0.0;
  std::size_t lost = 0;
  for (const auto& sample : track) {
    if (sample.t_us < settle_until) {
      ++err.settling;
      continue;
    }
    const auto expected = interpolate_truth(truth, sample.t_us);
    if (!expected) {
      ++err.excluded;
      continue;
    }
    const double e = std::hypot(sample.mean.x - expected->cx, sample.mean.y - expected->cy);
    center_errors.push_back(e);
    radius_sum += std::abs(sample.mean.r - expected->r);
    if (e > options.lost_threshold) {
      ++lost;
    }
  }
  err.samples = center_errors.size();
  if (center_errors.empty()) {
    return err;
  }
  const double count = static_cast<double>(center_errors.size());
  double center_sum = 0.0;
  for (const double e : center_errors) {
    center_sum += e;
  }
  std::sort(center_errors.begin(), center_errors.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * count));
  err.mean_center_err = center_sum / count;
  err.p95_center_err = center_errors[std::max<std::size_t>(rank, 1) - 1];
  err.mean_radius_err = radius_sum / count;
  err.lost_fraction = static_cast<double>(lost) / count;
  return err;
}

double compute_update_rate(std::span<const OutputPacket> track) {
  if (track.size() < 2) {
    throw std::domain_error("update rate needs at least two outputs");
  }
  const double span_us = track.back().t_us - track.front().t_us;
  if (!(span_us > 0.0)) {
    throw std::domain_error("update rate undefined over a zero-length track");
  }
  return static_cast<double>(track.size() - 1) / (span_us * 1e-6);
}

ScalingReport scaling_experiment(const SimConfig& base, std::span<const std::uint32_t> n_values,
                                 std::span<const Event> events) {
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) {
      throw std::invalid_argument("particle counts must be strictly ascending");
    }
  }
  ScalingReport report;
  for (const auto n : n_values) {
    for (const auto mode : {ExecutionMode::Graph, ExecutionMode::Cpu}) {
      SimConfig config = base;
      config.n = n;
      config.mode = mode;
      auto result = run(config, events);
      report.rows.push_back(ScalingRow{n, mode, result.stats.modeled_update_rate_hz,
                                       result.stats.mean_update_period_us, result.stats});
    }
  }
  return report;
}

void write_track_error_csv(std::ostream& out, const TrackError& error) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%zu,%zu,%zu\n", error.mean_center_err,
                error.p95_center_err, error.mean_radius_err, error.lost_fraction, error.samples,
                error.excluded, error.settling);
  out << "mean_center_err,p95_center_err,mean_radius_err,lost_fraction,samples,excluded,settling\n"
      << buf;
}

void write_scaling_csv(std::ostream& out, const ScalingReport& report) {
  out << "n,mode,rate_hz,period_us\n";
  char buf[128];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%u,%s,%.6f,%.6f\n", row.n, to_string(row.mode).data(),
                  row.rate_hz, row.period_us);
    out << buf;
  }
}

}  // namespace evpf
