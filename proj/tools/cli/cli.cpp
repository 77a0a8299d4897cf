#include <cli/cli.hpp>

#include <cli/digest.hpp>
#include <cli/manifest.hpp>

#include <evpf/event_io.hpp>
#include <evpf/metrics.hpp>
#include <evpf/render.hpp>
#include <evpf/simulation.hpp>
#include <evpf/synth.hpp>
#include <evpf/track_io.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace evpf::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersion = EVPF_VERSION;
constexpr const char* kManifestName = "manifest.txt";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Shared simulation flags

struct SimOptions {
  SimConfig config;
  std::string mode = "graph";
  std::string prior = "uniform";
};

void add_sim_options(CLI::App& app, SimOptions& o, bool per_run) {
  auto& c = o.config;
  if (per_run) {
    app.add_option("--n", c.n, "particle vertices")->capture_default_str();
    app.add_option("--mode", o.mode, "execution mode")
        ->check(CLI::IsMember({"graph", "cpu"}))
        ->capture_default_str();
  }
  app.add_option("--h", c.h, "ROI filter vertices")->capture_default_str();
  app.add_option("--seed", c.seed, "run seed")->capture_default_str();
  app.add_option("--q-trigger", c.filter.q_trigger, "new events per update")
      ->capture_default_str();
  app.add_option("--w-max", c.filter.w_max, "longest likelihood window")->capture_default_str();
  app.add_option("--band", c.filter.band, "contour band half-width, px")->capture_default_str();
  app.add_option("--inner-penalty", c.filter.inner_penalty, "score per interior event")
      ->capture_default_str();
  app.add_option("--sigma-xy", c.filter.sigma_xy, "center motion noise, px")
      ->capture_default_str();
  app.add_option("--sigma-r", c.filter.sigma_r, "radius motion noise, px")->capture_default_str();
  app.add_option("--eps-w", c.filter.eps_w, "likelihood floor")->capture_default_str();
  app.add_option("--r-min", c.filter.r_min, "smallest radius, px")->capture_default_str();
  app.add_option("--r-max", c.filter.r_max, "largest radius, px")->capture_default_str();
  app.add_option("--t-particle-hop", c.latency.t_particle_hop, "us per state packet")
      ->capture_default_str();
  app.add_option("--t-event-hop", c.latency.t_event_hop, "us per event/ROI/output hop")
      ->capture_default_str();
  app.add_option("--t-score-per-event", c.latency.t_score_per_event, "us per scored event")
      ->capture_default_str();
  app.add_option("--t-cpu-overhead", c.latency.t_cpu_overhead, "us per particle update")
      ->capture_default_str();
  app.add_option("--roi-gain", c.roi_gain, "ROI radius per unit estimated radius")
      ->capture_default_str();
  app.add_option("--roi-margin", c.roi_margin, "ROI radius margin, px")->capture_default_str();
  app.add_option("--prior", o.prior, "initial particle distribution")
      ->check(CLI::IsMember({"uniform", "box"}))
      ->capture_default_str();
  app.add_option("--prior-x", c.prior.center.x, "box prior center x");
  app.add_option("--prior-y", c.prior.center.y, "box prior center y");
  app.add_option("--prior-r", c.prior.center.r, "box prior radius");
  app.add_option("--prior-spread", c.prior.spread, "box prior half-width, px")
      ->capture_default_str();
}

SimConfig finalize(const SimOptions& o) {
  SimConfig c = o.config;
  c.mode = parse_execution_mode(o.mode);
  c.prior.kind = o.prior == "box" ? Prior::Kind::Box : Prior::Kind::Uniform;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

void describe(Manifest& m, const SimConfig& c, bool per_run) {
  if (per_run) {
    m.set("n", std::uint64_t{c.n});
    m.set("mode", std::string(to_string(c.mode)));
  }
  m.set("h", std::uint64_t{c.h});
  m.set("seed", c.seed);
  m.set("q-trigger", std::uint64_t{c.filter.q_trigger});
  m.set("w-max", std::uint64_t{c.filter.w_max});
  m.set("band", c.filter.band);
  m.set("inner-penalty", c.filter.inner_penalty);
  m.set("sigma-xy", c.filter.sigma_xy);
  m.set("sigma-r", c.filter.sigma_r);
  m.set("eps-w", c.filter.eps_w);
  m.set("r-min", c.filter.r_min);
  m.set("r-max", c.filter.r_max);
  m.set("t-particle-hop", c.latency.t_particle_hop);
  m.set("t-event-hop", c.latency.t_event_hop);
  m.set("t-score-per-event", c.latency.t_score_per_event);
  m.set("t-cpu-overhead", c.latency.t_cpu_overhead);
  m.set("roi-gain", c.roi_gain);
  m.set("roi-margin", c.roi_margin);
  m.set("prior", std::string(c.prior.kind == Prior::Kind::Box ? "box" : "uniform"));
  if (c.prior.kind == Prior::Kind::Box) {
    m.set("prior-x", c.prior.center.x);
    m.set("prior-y", c.prior.center.y);
    m.set("prior-r", c.prior.center.r);
    m.set("prior-spread", c.prior.spread);
  }
}

Manifest new_manifest(const char* command) {
  Manifest m;
  m.set("command", std::string(command));
  m.set("tool-version", std::string(kVersion));
  return m;
}

// ---------------------------------------------------------------------------
// File helpers

EventFormat format_for(const fs::path& path, const std::string& flag) {
  if (!flag.empty()) {
    return parse_event_format(flag);
  }
  return path.extension() == ".bin" ? EventFormat::Bin : EventFormat::Csv;
}

std::vector<Event> load_events(const fs::path& path, EventFormat format,
                               const std::string& expected_digest) {
  if (!fs::is_regular_file(path)) {
    throw std::runtime_error("cannot read event file " + path.string());
  }
  if (!expected_digest.empty() && sha256_file(path) != expected_digest) {
    throw std::runtime_error("event file " + path.string() + " does not match events-sha256");
  }
  return read_event_file(path.string(), format);
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  body(out);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

std::vector<std::uint32_t> parse_n_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::uint32_t v = 0;
    const auto* end = item.data() + item.size();
    const auto res = std::from_chars(item.data(), end, v);
    if (item.empty() || res.ec != std::errc{} || res.ptr != end || v == 0) {
      throw UsageError("--n expects a comma-separated list of positive integers, got '" + text +
                       "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw UsageError("--n list is empty");
  }
  return out;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string traj = "static";
  double dur_ms = 1000.0;
  double radius = 15.0;
  double speed = 100.0;
  double orbit_radius = 40.0;
  SynthParams params;
  std::string format = "csv";
  std::string out_dir = ".";
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("--traj", a.traj, "trajectory")
      ->check(CLI::IsMember({"static", "linear", "circle-orbit"}))
      ->capture_default_str();
  app.add_option("--dur-ms", a.dur_ms, "duration, ms")->capture_default_str();
  app.add_option("--radius", a.radius, "circle radius, px")->capture_default_str();
  app.add_option("--speed", a.speed, "target speed, px/s")->capture_default_str();
  app.add_option("--orbit-radius", a.orbit_radius, "circle-orbit path radius, px")
      ->capture_default_str();
  app.add_option("--event-rate", a.params.event_rate, "events per contour px per s")
      ->capture_default_str();
  app.add_option("--contour-sigma", a.params.contour_sigma, "radial jitter, px")
      ->capture_default_str();
  app.add_option("--clutter-hz", a.params.clutter_rate, "background events per s")
      ->capture_default_str();
  app.add_option("--seed", a.params.seed, "stream seed")->capture_default_str();
  app.add_option("--format", a.format, "event file format")
      ->check(CLI::IsMember({"csv", "bin"}))
      ->capture_default_str();
  app.add_option("--out-dir", a.out_dir, "output directory")->capture_default_str();
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  TrajectorySpec spec;
  spec.kind = parse_trajectory_kind(a.traj);
  spec.duration_us = a.dur_ms * 1000.0;
  spec.radius = a.radius;
  spec.speed = a.speed;
  spec.orbit_radius = a.orbit_radius;
  SynthOutput gen;
  try {
    gen = generate_circle_events(make_trajectory(spec), a.params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  const auto format = parse_event_format(a.format);
  const fs::path events_path = dir / (format == EventFormat::Bin ? "events.bin" : "events.csv");
  const fs::path truth_path = dir / "truth.csv";
  write_event_file(events_path.string(), gen.events, format);
  write_file(truth_path, [&](std::ostream& o) { write_ground_truth(o, gen.truth); });

  auto m = new_manifest("synth");
  m.set("traj", a.traj);
  m.set("dur-ms", a.dur_ms);
  m.set("radius", a.radius);
  m.set("speed", a.speed);
  m.set("orbit-radius", a.orbit_radius);
  m.set("event-rate", a.params.event_rate);
  m.set("contour-sigma", a.params.contour_sigma);
  m.set("clutter-hz", a.params.clutter_rate);
  m.set("seed", a.params.seed);
  m.set("format", a.format);
  m.set("output-events-sha256", sha256_file(events_path));
  m.set("output-truth-sha256", sha256_file(truth_path));
  m.write(dir / kManifestName);

  out << "wrote " << gen.events.size() << " events to " << events_path.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// track

struct TrackArgs {
  SimOptions sim;
  std::string events;
  std::string format;
  std::string events_sha256;
  std::string out_dir = ".";
  std::string render_dir;
  double frame_ms = 10.0;
};

void add_track(CLI::App& app, TrackArgs& a) {
  app.add_option("--events", a.events, "event file")->required();
  app.add_option("--format", a.format, "event file format (default: from extension)")
      ->check(CLI::IsMember({"csv", "bin"}));
  app.add_option("--events-sha256", a.events_sha256, "refuse input whose digest differs");
  app.add_option("--out-dir", a.out_dir, "output directory")->capture_default_str();
  app.add_option("--render-dir", a.render_dir, "write PPM frames here");
  app.add_option("--frame-ms", a.frame_ms, "frame period for --render-dir, ms")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_sim_options(app, a.sim, true);
}

int cmd_track(const TrackArgs& a, std::ostream& out) {
  const auto config = finalize(a.sim);
  const fs::path events_path(a.events);
  const auto format = format_for(events_path, a.format);
  const auto events = load_events(events_path, format, a.events_sha256);
  const auto result = run(config, events);

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  write_file(dir / "track.csv", [&](std::ostream& o) { write_track_csv(o, result.track); });
  write_file(dir / "stats.txt", [&](std::ostream& o) { o << result.stats.to_text(); });

  auto m = new_manifest("track");
  m.set("events", events_path.string());
  m.set("format", std::string(to_string(format)));
  m.set("events-sha256", sha256_file(events_path));
  describe(m, config, true);
  m.write(dir / kManifestName);

  if (!a.render_dir.empty()) {
    render_frames(a.render_dir, config.geometry, events, result.track, a.frame_ms * 1000.0);
  }
  out << result.stats.to_text();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string track;
  std::string truth;
  std::string out;
  TrackErrorOptions options;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  app.add_option("--track", a.track, "track CSV")->required();
  app.add_option("--truth", a.truth, "ground-truth CSV")->required();
  app.add_option("--out", a.out, "also write the error row here");
  app.add_option("--lost-threshold", a.options.lost_threshold, "px")->capture_default_str();
  app.add_option("--settle-fraction", a.options.settle_fraction, "leading fraction skipped")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

template <typename T, typename Reader>
std::vector<T> read_with(const std::string& path, Reader reader) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return reader(in);
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto track = read_with<OutputPacket>(a.track, read_track_csv);
  const auto truth = read_with<GroundTruthSample>(a.truth, read_ground_truth);
  if (truth.empty()) {
    throw std::runtime_error("ground truth " + a.truth + " has no samples");
  }
  const auto error = compute_tracking_error(track, truth, a.options);
  if (!a.out.empty()) {
    write_file(a.out, [&](std::ostream& o) { write_track_error_csv(o, error); });
  }
  write_track_error_csv(out, error);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  SimOptions sim;
  std::string n_list = "50,100,200,400";
  std::string events;
  std::string format;
  std::string events_sha256;
  double dur_ms = 200.0;
  double event_rate = 1000.0;
  double clutter_hz = 1000.0;
  std::uint64_t stream_seed = 1;
  std::string out_dir = ".";
};

void add_bench(CLI::App& app, BenchArgs& a) {
  app.add_option("--n", a.n_list, "comma-separated particle counts, ascending")
      ->capture_default_str();
  app.add_option("--events", a.events, "event file (default: synthetic high-rate stream)");
  app.add_option("--format", a.format, "event file format (default: from extension)")
      ->check(CLI::IsMember({"csv", "bin"}));
  app.add_option("--events-sha256", a.events_sha256, "refuse input whose digest differs");
  app.add_option("--dur-ms", a.dur_ms, "synthetic stream duration, ms")->capture_default_str();
  app.add_option("--event-rate", a.event_rate, "synthetic events per contour px per s")
      ->capture_default_str();
  app.add_option("--clutter-hz", a.clutter_hz, "synthetic background events per s")
      ->capture_default_str();
  app.add_option("--stream-seed", a.stream_seed, "synthetic stream seed")->capture_default_str();
  app.add_option("--out-dir", a.out_dir, "output directory")->capture_default_str();
  add_sim_options(app, a.sim, false);
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const auto ns = parse_n_list(a.n_list);
  if (!std::is_sorted(ns.begin(), ns.end()) ||
      std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
    throw UsageError("--n values must be strictly ascending");
  }
  const auto config = finalize(a.sim);

  auto m = new_manifest("bench");
  m.set("n", a.n_list);
  std::vector<Event> events;
  if (!a.events.empty()) {
    const fs::path path(a.events);
    const auto format = format_for(path, a.format);
    events = load_events(path, format, a.events_sha256);
    m.set("events", path.string());
    m.set("format", std::string(to_string(format)));
    m.set("events-sha256", sha256_file(path));
  } else {
    TrajectorySpec spec;
    spec.duration_us = a.dur_ms * 1000.0;
    SynthParams params;
    params.event_rate = a.event_rate;
    params.clutter_rate = a.clutter_hz;
    params.seed = a.stream_seed;
    try {
      events = generate_circle_events(make_trajectory(spec), params).events;
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    m.set("dur-ms", a.dur_ms);
    m.set("event-rate", a.event_rate);
    m.set("clutter-hz", a.clutter_hz);
    m.set("stream-seed", a.stream_seed);
  }
  describe(m, config, false);

  const auto report = scaling_experiment(config, ns, events);
  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  write_file(dir / "scaling.csv", [&](std::ostream& o) { write_scaling_csv(o, report); });
  m.write(dir / kManifestName);
  write_scaling_csv(out, report);
  return kExitOk;
}

// ---------------------------------------------------------------------------

bool is_subcommand(const std::string& s) {
  return s == "synth" || s == "track" || s == "eval" || s == "bench";
}

// Replaces `--config FILE` with the file's `--key value` pairs, placed right
// after the subcommand so explicit flags (parsed later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw UsageError("--config needs a file argument");
      }
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) {
    return rest;
  }
  if (rest.empty() || !is_subcommand(rest.front())) {
    throw UsageError("--config must follow a subcommand");
  }
  const auto from_file = config_file_args(*config);
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Event-driven particle filter for circle tracking on a simulated vertex graph",
               "evpf"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  // `--h` is the filter-vertex count, so help is long-form only.
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SynthArgs synth;
  TrackArgs track;
  EvalArgs eval;
  BenchArgs bench;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic circle event stream");
  auto* track_cmd = app.add_subcommand("track", "run the filter over an event file");
  auto* eval_cmd = app.add_subcommand("eval", "score a track against ground truth");
  auto* bench_cmd = app.add_subcommand("bench", "graph vs cpu scaling experiment");
  for (auto* sub : {synth_cmd, track_cmd, eval_cmd, bench_cmd}) {
    sub->add_option("--config", "flat key=value file; flags override it");
  }
  add_synth(*synth_cmd, synth);
  add_track(*track_cmd, track);
  add_eval(*eval_cmd, eval);
  add_bench(*bench_cmd, bench);

  try {
    auto expanded = expand_config(args);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e_out;
    const int code = app.exit(e, o, e_out);
    out << o.str();
    err << e_out.str();
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "evpf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "evpf: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (*synth_cmd) {
      return cmd_synth(synth, out);
    }
    if (*track_cmd) {
      return cmd_track(track, out);
    }
    if (*eval_cmd) {
      return cmd_eval(eval, out);
    }
    return cmd_bench(bench, out);
  } catch (const UsageError& e) {
    err << "evpf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "evpf: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace evpf::cli
