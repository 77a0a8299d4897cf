#include <evpf/simulation.hpp>

#include <evpf/topology.hpp>
#include <evpf/vertices.hpp>

#include "update_cycle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <string>

namespace evpf {

ExecutionMode parse_execution_mode(std::string_view name) {
  if (name == "graph") {
    return ExecutionMode::Graph;
  }
  if (name == "cpu") {
    return ExecutionMode::Cpu;
  }
  throw std::invalid_argument("unknown mode '" + std::string(name) + "' (expected graph or cpu)");
}

std::string_view to_string(ExecutionMode mode) noexcept {
  return mode == ExecutionMode::Graph ? "graph" : "cpu";
}

void SimConfig::validate() const {
  if (n == 0 || h == 0) {
    throw std::invalid_argument("n and h must both be >= 1");
  }
  filter.validate();
  const auto& l = latency;
  if (l.t_particle_hop < 0.0 || l.t_event_hop < 0.0 || l.t_score_per_event < 0.0 ||
      l.t_cpu_overhead < 0.0) {
    throw std::invalid_argument("latency constants must be >= 0");
  }
  if (geometry.width == 0 || geometry.height == 0) {
    throw std::invalid_argument("sensor geometry must be non-empty");
  }
  if (prior.kind == Prior::Kind::Box && !(prior.spread >= 0.0)) {
    throw std::invalid_argument("prior spread must be >= 0");
  }
  if (!(roi_gain > 0.0) || roi_margin < 0.0) {
    throw std::invalid_argument("roi_gain must be > 0 and roi_margin >= 0");
  }
}

std::string SimStats::to_text() const {
  std::ostringstream out;
  char buf[64];
  auto real = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out << key << '=' << buf << '\n';
  };
  auto count = [&](const char* key, std::uint64_t v) { out << key << '=' << v << '\n'; };
  count("updates_total", updates_total);
  count("events_in", events_in);
  count("events_dropped_roi", events_dropped_roi);
  count("packets_state", packets_state);
  real("mean_update_period_us", mean_update_period_us);
  real("p99_update_period_us", p99_update_period_us);
  real("modeled_update_rate_hz", modeled_update_rate_hz);
  real("barrier_wait_us_mean", barrier_wait_us_mean);
  real("mean_compute_us", mean_compute_us);
  real("mean_comm_us", mean_comm_us);
  count("period_samples", period_samples);
  count("events_forwarded", events_forwarded);
  count("event_deliveries", event_deliveries);
  count("packets_roi", packets_roi);
  count("packets_output", packets_output);
  count("stale_state_packets", stale_state_packets);
  return out.str();
}

namespace {

struct PeriodSample {
  double period = 0.0;
  double compute = 0.0;
  std::size_t window = 0;
};

// Period statistics use steady-state updates (full window) when any exist,
// so warm-up updates with short windows do not skew the cost comparison.
void summarize_periods(const std::vector<PeriodSample>& samples, std::size_t w_max,
                       SimStats& stats) {
  std::vector<PeriodSample> steady;
  for (const auto& s : samples) {
    if (s.window == w_max) {
      steady.push_back(s);
    }
  }
  const auto& used = steady.empty() ? samples : steady;
  if (used.empty()) {
    return;
  }
  std::vector<double> periods;
  periods.reserve(used.size());
  double sum = 0.0;
  double compute = 0.0;
  for (const auto& s : used) {
    periods.push_back(s.period);
    sum += s.period;
    compute += s.compute;
  }
  const double count = static_cast<double>(used.size());
  stats.period_samples = used.size();
  stats.mean_update_period_us = sum / count;
  stats.mean_compute_us = compute / count;
  stats.mean_comm_us = stats.mean_update_period_us - stats.mean_compute_us;
  std::sort(periods.begin(), periods.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * count));
  stats.p99_update_period_us = periods[std::max<std::size_t>(rank, 1) - 1];
  stats.modeled_update_rate_hz =
      stats.mean_update_period_us > 0.0 ? 1e6 / stats.mean_update_period_us : 0.0;
}

struct Scheduled {
  Packet packet;
  VertexKind src_kind = VertexKind::Input;
  std::uint32_t src_index = 0;
  std::uint64_t send_seq = 0;
  // State/weight fan-out: slot k of the sender's serialized broadcast.
  std::uint32_t slot = 0;
};

struct Later {
  bool operator()(const Scheduled& a, const Scheduled& b) const noexcept {
    if (a.packet.deliver_time != b.packet.deliver_time) {
      return a.packet.deliver_time > b.packet.deliver_time;
    }
    if (a.src_kind != b.src_kind) {
      return a.src_kind > b.src_kind;
    }
    if (a.src_index != b.src_index) {
      return a.src_index > b.src_index;
    }
    return a.send_seq > b.send_seq;
  }
};

class GraphSimulation {
 public:
  GraphSimulation(const SimConfig& config, std::span<const Event> events)
      : config_(config), events_(events), topology_(build_topology(config.h, config.n)) {
    filters_.assign(config.h, RoiFilterVertex(RoiSpec::whole_frame(config.geometry)));
    particles_.reserve(config.n);
    for (std::uint32_t i = 0; i < config.n; ++i) {
      auto noise = derive_stream(config.seed, StreamTag::Particle, i);
      const auto initial = detail::initial_state(config, noise);
      particles_.emplace_back(i, config, std::move(noise), initial);
    }
    filter_seq_.assign(config.h, 0);
    particle_seq_.assign(config.n, 0);
  }

  SimResult run() {
    std::size_t next_event = 0;
    while (next_event < events_.size() || !queue_.empty()) {
      // External injections precede any packet delivered at the same instant.
      if (next_event < events_.size() &&
          (queue_.empty() ||
           static_cast<double>(events_[next_event].t) <= queue_.top().packet.deliver_time)) {
        inject(next_event);
        ++next_event;
        continue;
      }
      Scheduled item = queue_.top();
      queue_.pop();
      advance_clock(item.packet.deliver_time);
      deliver(item);
    }
    return finish();
  }

 private:
  void advance_clock(double t) {
    if (t < clock_) {
      throw std::logic_error("simulated clock moved backwards");
    }
    clock_ = t;
  }

  void inject(std::size_t seq) {
    const Event& e = events_[seq];
    const double now = static_cast<double>(e.t);
    advance_clock(now);
    ++result_.stats.events_in;
    Packet p;
    p.src = {VertexKind::Input, 0};
    p.dst = {VertexKind::Filter, distribute_event(seq, config_.h)};
    p.send_time = now;
    p.deliver_time = now + config_.latency.t_event_hop;
    p.payload = EventPacket{e};
    push(std::move(p), input_seq_++);
  }

  void push(Packet p, std::uint64_t send_seq, std::uint32_t slot = 0) {
    Scheduled s;
    s.src_kind = p.src.kind;
    s.src_index = p.src.index;
    s.send_seq = send_seq;
    s.slot = slot;
    s.packet = std::move(p);
    queue_.push(std::move(s));
  }

  std::uint64_t next_seq(const VertexId& src, std::uint64_t reserve = 1) {
    std::uint64_t* counter = &input_seq_;
    if (src.kind == VertexKind::Filter) {
      counter = &filter_seq_[src.index];
    } else if (src.kind == VertexKind::Particle) {
      counter = &particle_seq_[src.index];
    }
    const auto seq = *counter;
    *counter += reserve;
    return seq;
  }

  void deliver(const Scheduled& item) {
    const Packet& p = item.packet;
    const double now = p.deliver_time;
    switch (p.dst.kind) {
      case VertexKind::Filter:
        deliver_to_filters(p, now);
        break;
      case VertexKind::Particle:
        deliver_to_particles(item, now);
        break;
      case VertexKind::Output:
        ++result_.stats.packets_output;
        result_.track.push_back(std::get<OutputPacket>(p.payload));
        break;
      case VertexKind::Input:
        throw std::logic_error("nothing is addressed to the input vertex");
    }
  }

  void deliver_to_filters(const Packet& p, double now) {
    if (const auto* ev = std::get_if<EventPacket>(&p.payload)) {
      auto& filter = filters_[p.dst.index];
      if (filter.on_event(ev->event) == FilterDecision::Drop) {
        ++result_.stats.events_dropped_roi;
        return;
      }
      ++result_.stats.events_forwarded;
      Packet fwd;
      fwd.src = p.dst;
      fwd.dst = {VertexKind::Particle, VertexId::kAll};
      fwd.send_time = now;
      fwd.deliver_time = now + config_.latency.t_event_hop;
      fwd.payload = *ev;
      const auto seq = next_seq(fwd.src);
      push(std::move(fwd), seq);
      return;
    }
    const auto& update = std::get<RoiUpdatePacket>(p.payload);
    for (auto& filter : filters_) {
      filter.on_roi_update(update);
      ++result_.stats.packets_roi;
    }
  }

  void deliver_to_particles(const Scheduled& item, double now) {
    const Packet& p = item.packet;
    if (p.dst.is_multicast()) {
      for (auto& particle : particles_) {
        ++result_.stats.event_deliveries;
        route(particle.step(p, now));
      }
      return;
    }
    if (std::holds_alternative<StateWeightPacket>(p.payload)) {
      ++result_.stats.packets_state;
      schedule_next_slot(item);
    }
    route(particles_[p.dst.index].step(p, now));
  }

  // A particle's broadcast leaves one packet per t_particle_hop: slot 0 is the
  // local copy (no latency), slot k reaches particle (sender + k) mod n at
  // send + k * hop. Slots are scheduled one at a time.
  void schedule_next_slot(const Scheduled& item) {
    const std::uint32_t n = config_.n;
    if (item.slot + 1 >= n) {
      return;
    }
    const std::uint32_t slot = item.slot + 1;
    Packet next = item.packet;
    next.dst = {VertexKind::Particle, (item.src_index + slot) % n};
    next.send_time = item.packet.deliver_time;
    next.deliver_time = next.send_time + config_.latency.t_particle_hop;
    push(std::move(next), item.send_seq + 1, slot);
  }

  void route(std::vector<Packet> out) {
    for (auto& p : out) {
      if (std::holds_alternative<StateWeightPacket>(p.payload)) {
        // Local copy first; the remaining n-1 slots follow from schedule_next_slot.
        p.dst = p.src;
        p.deliver_time = p.send_time;
        const auto seq = next_seq(p.src, config_.n);
        push(std::move(p), seq, 0);
      } else {
        p.deliver_time = p.send_time + config_.latency.t_event_hop;
        const auto seq = next_seq(p.src);
        push(std::move(p), seq);
      }
    }
  }

  SimResult finish() {
    auto& stats = result_.stats;
    const auto& leader = particles_[topology_.leader];
    std::vector<PeriodSample> samples;
    for (const auto& rec : leader.history()) {
      if (rec.release_time < rec.trigger_time) {
        continue;  // never released
      }
      samples.push_back({rec.release_time - rec.trigger_time, rec.broadcast_time - rec.trigger_time,
                         rec.window});
    }
    stats.updates_total = leader.sequence();
    double wait = 0.0;
    std::size_t waits = 0;
    for (const auto& particle : particles_) {
      stats.stale_state_packets += particle.stale_packets();
      for (const auto& rec : particle.history()) {
        if (rec.sequence < particle.sequence()) {
          wait += rec.release_time - rec.broadcast_time;
          ++waits;
        }
      }
    }
    stats.barrier_wait_us_mean = waits ? wait / static_cast<double>(waits) : 0.0;
    summarize_periods(samples, config_.filter.w_max, stats);
    return std::move(result_);
  }

  const SimConfig& config_;
  std::span<const Event> events_;
  Topology topology_;
  std::vector<RoiFilterVertex> filters_;
  std::vector<ParticleVertex> particles_;
  std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue_;
  std::uint64_t input_seq_ = 0;
  std::vector<std::uint64_t> filter_seq_;
  std::vector<std::uint64_t> particle_seq_;
  double clock_ = 0.0;
  SimResult result_;
};

class CpuBaseline {
 public:
  CpuBaseline(const SimConfig& config, std::span<const Event> events)
      : config_(config), events_(events), roi_(RoiSpec::whole_frame(config.geometry)) {
    population_.reserve(config.n);
    noise_.reserve(config.n);
    for (std::uint32_t i = 0; i < config.n; ++i) {
      noise_.push_back(derive_stream(config.seed, StreamTag::Particle, i));
      population_.push_back(
          Particle{detail::initial_state(config, noise_.back()), 1.0 / config.n});
    }
    window_.reserve(config.filter.w_max);
  }

  SimResult run() {
    for (const auto& e : events_) {
      const double now = static_cast<double>(e.t);
      // Events stamped at or before a completion time are handled first.
      while (busy_ && release_time_ < now) {
        complete();
      }
      ++result_.stats.events_in;
      if (roi_filter_step(roi_, e) == FilterDecision::Drop) {
        ++result_.stats.events_dropped_roi;
        continue;
      }
      ++result_.stats.events_forwarded;
      detail::push_bounded(buffer_, e, config_.filter.w_max);
      ++new_events_;
      maybe_start(now);
    }
    while (busy_) {
      complete();
    }
    summarize_periods(samples_, config_.filter.w_max, result_.stats);
    return std::move(result_);
  }

 private:
  void maybe_start(double now) {
    if (busy_ || new_events_ < config_.filter.q_trigger) {
      return;
    }
    new_events_ = 0;
    detail::fill_window(buffer_, config_.filter.w_max, window_);
    for (std::uint32_t i = 0; i < config_.n; ++i) {
      const auto scored =
          detail::predict_and_score(population_[i].state, window_, config_, noise_[i]);
      population_[i] = Particle{scored.state, scored.weight};
    }
    const double per_particle = config_.latency.particle_compute(window_.size());
    const double cost = static_cast<double>(config_.n) * per_particle;
    release_time_ = now + cost;
    samples_.push_back({cost, cost, window_.size()});
    busy_ = true;
  }

  void complete() {
    const auto outcome = detail::resolve_barrier(population_, config_, sequence_);
    population_ = outcome.resampled;
    roi_ = compute_roi(outcome.mean, config_.roi_gain, config_.roi_margin);
    result_.track.push_back(OutputPacket{outcome.mean, release_time_, sequence_});
    ++sequence_;
    ++result_.stats.updates_total;
    busy_ = false;
    maybe_start(release_time_);
  }

  const SimConfig& config_;
  std::span<const Event> events_;
  RoiSpec roi_;
  std::vector<Particle> population_;
  std::vector<Rng> noise_;
  std::deque<Event> buffer_;
  std::vector<Event> window_;
  std::size_t new_events_ = 0;
  bool busy_ = false;
  double release_time_ = 0.0;
  std::uint64_t sequence_ = 0;
  std::vector<PeriodSample> samples_;
  SimResult result_;
};

void validate_events(std::span<const Event> events, const SensorGeometry& geometry) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!geometry.contains(events[i].x, events[i].y) || events[i].p > 1) {
      throw std::invalid_argument("event " + std::to_string(i) + " is outside the sensor");
    }
    if (i > 0 && events[i].t < events[i - 1].t) {
      throw std::invalid_argument("event " + std::to_string(i) + " breaks time order");
    }
  }
}

}  // namespace

SimResult run_simulation(const SimConfig& config, std::span<const Event> events) {
  config.validate();
  validate_events(events, config.geometry);
  return GraphSimulation(config, events).run();
}

SimResult run_cpu_baseline(const SimConfig& config, std::span<const Event> events) {
  config.validate();
  validate_events(events, config.geometry);
  return CpuBaseline(config, events).run();
}

SimResult run(const SimConfig& config, std::span<const Event> events) {
  return config.mode == ExecutionMode::Graph ? run_simulation(config, events)
                                             : run_cpu_baseline(config, events);
}

}  // namespace evpf
