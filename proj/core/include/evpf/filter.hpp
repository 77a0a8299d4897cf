#pragma once

#include <evpf/event.hpp>
#include <evpf/rng.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace evpf {

/// Circle hypothesis: center and radius in pixels.
struct ParticleState {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;

  friend bool operator==(const ParticleState&, const ParticleState&) = default;
};

struct Particle {
  ParticleState state;
  double weight = 0.0;

  friend bool operator==(const Particle&, const Particle&) = default;
};

/// Circular gate; events farther than `radius` from the center are dropped.
struct RoiSpec {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;

  [[nodiscard]] bool contains(double x, double y) const noexcept;
  /// A gate covering every pixel of `geometry`.
  static RoiSpec whole_frame(const SensorGeometry& geometry) noexcept;

  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

struct FilterParams {
  double sigma_xy = 5.0;       // motion noise on the center, pixels
  double sigma_r = 2.0;        // motion noise on the radius, pixels
  double band = 1.5;           // contour band half-width, pixels
  double inner_penalty = 0.5;  // score subtracted per interior event
  std::size_t q_trigger = 30;  // new events per update
  std::size_t w_max = 300;     // longest window scored, events
  double eps_w = 1e-6;         // likelihood floor
  double r_min = 10.0;
  double r_max = 50.0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct LikelihoodResult {
  double value = 0.0;
  std::size_t best_k = 0;
};

/// Raised when a caller breaks an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

double contour_distance(const Event& e, const ParticleState& s) noexcept;

/// +1 inside the contour band, -inner_penalty strictly inside the circle, 0 outside.
double event_score(const Event& e, const ParticleState& s, const FilterParams& params) noexcept;

/// Best prefix score of a newest-first window, normalized by circumference.
///
/// With S_k the summed event_score of the k newest events, returns
/// clamp(max_k S_k / (2*pi*r), eps_w, 1) and the smallest k attaining the
/// maximum. One pass: running sum plus running maximum.
LikelihoodResult incremental_likelihood(std::span<const Event> newest_first,
                                        const ParticleState& s, const FilterParams& params);

/// Constant-position prediction: Gaussian jitter on x, y, r and nothing else.
/// The result is clamped to [r_min, r_max] and to the sensor.
ParticleState apply_motion_model(const ParticleState& s, const FilterParams& params,
                                 const SensorGeometry& geometry, Rng& noise);

/// Divides by the weight sum; a sum below n*eps_w resets to uniform.
std::vector<Particle> normalize_weights(std::span<const Particle> population, double eps_w = 1e-6);

/// Systematic resampling indices: stratum j at u0 + j/count picks the particle
/// whose cumulative-weight interval contains it. Weights must sum to 1.
std::vector<std::size_t> systematic_resample_indices(std::span<const double> weights, double u0,
                                                     std::size_t count);

/// Resamples a normalized population to the same size; output weights are 1/n.
std::vector<Particle> systematic_resample(std::span<const Particle> population, double u0);

/// Weighted mean of x, y and r.
ParticleState mean_state(std::span<const Particle> population);

RoiSpec compute_roi(const ParticleState& mean, double roi_gain = 2.0, double roi_margin = 10.0);

/// Initial hypothesis: uniform over frame and [r_min, r_max].
ParticleState sample_uniform_prior(const FilterParams& params, const SensorGeometry& geometry,
                                   Rng& noise);

/// Initial hypothesis: uniform within +-spread of `center` on every axis, clamped.
ParticleState sample_box_prior(const ParticleState& center, double spread,
                               const FilterParams& params, const SensorGeometry& geometry,
                               Rng& noise);

/// Clamps radius to [r_min, r_max] and center to the pixel grid.
ParticleState clamp_state(const ParticleState& s, const FilterParams& params,
                          const SensorGeometry& geometry) noexcept;

}  // namespace evpf
