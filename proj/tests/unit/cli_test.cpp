#include <cli/cli.hpp>
#include <cli/digest.hpp>

#include <evpf/event_io.hpp>
#include <evpf/synth.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome r;
  r.code = evpf::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void dump(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Field `name` of a one-row CSV with a header line.
double csv_field(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  std::istringstream hs(header);
  std::istringstream rs(row);
  std::string h;
  std::string v;
  while (std::getline(hs, h, ',') && std::getline(rs, v, ',')) {
    if (h == name) {
      return std::stod(v);
    }
  }
  ADD_FAILURE() << "no column " << name << " in\n" << csv;
  return NAN;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           ("evpf_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }
  std::string str(const std::string& name) const { return path(name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SynthIsDeterministic) {
  for (const char* sub : {"a", "b"}) {
    const auto r = cli({"synth", "--traj", "static", "--dur-ms", "1000", "--seed", "7",
                        "--out-dir", str(sub)});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  for (const char* file : {"events.csv", "truth.csv", "manifest.txt"}) {
    EXPECT_EQ(evpf::cli::sha256_file(path("a") / file), evpf::cli::sha256_file(path("b") / file))
        << file;
  }
  EXPECT_FALSE(slurp(path("a") / "events.csv").empty());
}

TEST_F(CliTest, SynthBinaryFormat) {
  ASSERT_EQ(cli({"synth", "--dur-ms", "100", "--format", "bin", "--out-dir", str("s")}).code, 0);
  EXPECT_EQ(fs::file_size(path("s") / "events.bin") % evpf::kBinaryRecordSize, 0u);
}

TEST_F(CliTest, SynthUnknownTrajectoryIsUsageError) {
  const auto r = cli({"synth", "--traj", "zigzag", "--out-dir", str("s")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SynthDegenerateSigmaStaysOnContour) {
  ASSERT_EQ(cli({"synth", "--traj", "circle-orbit", "--dur-ms", "300", "--clutter-hz", "0",
                 "--contour-sigma", "0", "--out-dir", str("s")})
                .code,
            0);
  const auto events = evpf::read_event_file(str("s/events.csv"), evpf::EventFormat::Csv);
  std::ifstream truth_in(path("s") / "truth.csv");
  const auto truth = evpf::read_ground_truth(truth_in);
  ASSERT_FALSE(events.empty());
  for (const auto& e : events) {
    const auto g = evpf::interpolate_truth(truth, static_cast<double>(e.t) + 0.5);
    ASSERT_TRUE(g);
    EXPECT_LE(std::abs(std::hypot(e.x - g->cx, e.y - g->cy) - g->r), std::sqrt(0.5) + 1e-3);
  }
}

TEST_F(CliTest, TrackStaticSceneIsNeverLost) {
  ASSERT_EQ(cli({"synth", "--traj", "static", "--dur-ms", "1000", "--seed", "3", "--out-dir",
                 str("s")})
                .code,
            0);
  const auto t = cli({"track", "--events", str("s/events.csv"), "--n", "100", "--out-dir",
                      str("t")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("updates_total="), std::string::npos);
  const auto e = cli({"eval", "--track", str("t/track.csv"), "--truth", str("s/truth.csv"),
                      "--out", str("err.csv")});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(csv_field(e.out, "lost_fraction"), 0.0);
  EXPECT_GT(csv_field(e.out, "samples"), 0.0);
  EXPECT_EQ(slurp(path("err.csv")), e.out);
  EXPECT_EQ(slurp(path("t/track.csv")).rfind("t_us,x,y,r\n", 0), 0u);
}

TEST_F(CliTest, SingleParticleCpuMatchesZeroLatencyGraph) {
  ASSERT_EQ(cli({"synth", "--dur-ms", "500", "--seed", "5", "--out-dir", str("s")}).code, 0);
  ASSERT_EQ(cli({"track", "--events", str("s/events.csv"), "--mode", "cpu", "--n", "1", "--seed",
                 "5", "--out-dir", str("cpu")})
                .code,
            0);
  ASSERT_EQ(cli({"track", "--events", str("s/events.csv"), "--mode", "graph", "--n", "1",
                 "--seed", "5", "--t-particle-hop", "0", "--t-event-hop", "0", "--out-dir",
                 str("graph")})
                .code,
            0);
  const auto cpu = slurp(path("cpu") / "track.csv");
  EXPECT_GT(std::count(cpu.begin(), cpu.end(), '\n'), 2);
  EXPECT_EQ(cpu, slurp(path("graph") / "track.csv"));
}

TEST_F(CliTest, EmptyEventFileGivesEmptyTrack) {
  dump(path("empty.csv"), "");
  const auto r = cli({"track", "--events", str("empty.csv"), "--out-dir", str("t")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("t") / "track.csv"), "t_us,x,y,r\n");
}

TEST_F(CliTest, TrackErrorsMapToExitCodes) {
  EXPECT_EQ(cli({"track", "--events", str("missing.csv"), "--out-dir", str("t")}).code, 1);
  dump(path("bad.csv"), "10,1,1,0\n5,1,1,0\n");
  EXPECT_EQ(cli({"track", "--events", str("bad.csv"), "--out-dir", str("t")}).code, 1);
  dump(path("ok.csv"), "10,1,1,0\n");
  EXPECT_EQ(cli({"track", "--events", str("ok.csv"), "--n", "0"}).code, 2);
  EXPECT_EQ(cli({"track", "--events", str("ok.csv"), "--q-trigger", "500"}).code, 2);
  EXPECT_EQ(cli({"track", "--events", str("ok.csv"), "--mode", "gpu"}).code, 2);
  EXPECT_EQ(cli({"track", "--events", str("ok.csv"), "--no-such-flag"}).code, 2);
  EXPECT_EQ(cli({"track"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"track", "--events", str("ok.csv"), "--events-sha256", "00"}).code, 1);
}

TEST_F(CliTest, HelpAndVersionSucceed) {
  const auto help = cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("track"), std::string::npos);
  EXPECT_EQ(cli({"track", "--help"}).code, 0);
  EXPECT_EQ(cli({"--version"}).code, 0);
}

TEST_F(CliTest, ManifestReproducesTrackByteForByte) {
  ASSERT_EQ(cli({"synth", "--dur-ms", "400", "--seed", "2", "--format", "bin", "--out-dir",
                 str("s")})
                .code,
            0);
  ASSERT_EQ(cli({"track", "--events", str("s/events.bin"), "--n", "30", "--seed", "11",
                 "--sigma-xy", "2.5", "--prior", "box", "--prior-x", "152", "--prior-y", "120",
                 "--prior-r", "15", "--out-dir", str("first")})
                .code,
            0);
  const auto again = cli({"track", "--config", str("first/manifest.txt"), "--out-dir",
                          str("second")});
  ASSERT_EQ(again.code, 0) << again.err;
  for (const char* file : {"track.csv", "stats.txt", "manifest.txt"}) {
    EXPECT_EQ(slurp(path("first") / file), slurp(path("second") / file)) << file;
  }
  const auto manifest = slurp(path("first") / "manifest.txt");
  for (const char* key : {"tool-version=", "events-sha256=", "seed=11\n", "sigma-xy=2.5\n",
                          "prior=box\n", "n=30\n"}) {
    EXPECT_NE(manifest.find(key), std::string::npos) << key;
  }

  // Flags after the config file win.
  ASSERT_EQ(cli({"track", "--config", str("first/manifest.txt"), "--seed", "12", "--out-dir",
                 str("third")})
                .code,
            0);
  EXPECT_NE(slurp(path("first") / "track.csv"), slurp(path("third") / "track.csv"));
  EXPECT_NE(slurp(path("third") / "manifest.txt").find("seed=12\n"), std::string::npos);
}

TEST_F(CliTest, ManifestReproducesSynth) {
  ASSERT_EQ(cli({"synth", "--traj", "linear", "--dur-ms", "200", "--seed", "4", "--clutter-hz",
                 "300", "--out-dir", str("a")})
                .code,
            0);
  ASSERT_EQ(cli({"synth", "--config", str("a/manifest.txt"), "--out-dir", str("b")}).code, 0);
  EXPECT_EQ(slurp(path("a") / "events.csv"), slurp(path("b") / "events.csv"));
  EXPECT_EQ(slurp(path("a") / "manifest.txt"), slurp(path("b") / "manifest.txt"));
}

TEST_F(CliTest, ConfigWithUnknownKeyIsUsageError) {
  dump(path("cfg.txt"), "bogus-key=3\n");
  dump(path("ok.csv"), "");
  EXPECT_EQ(cli({"track", "--config", str("cfg.txt"), "--events", str("ok.csv")}).code, 2);
  EXPECT_EQ(cli({"track", "--config", str("nope.txt"), "--events", str("ok.csv")}).code, 1);
}

TEST_F(CliTest, RenderWritesFrames) {
  ASSERT_EQ(cli({"synth", "--dur-ms", "100", "--out-dir", str("s")}).code, 0);
  ASSERT_EQ(cli({"track", "--events", str("s/events.csv"), "--n", "10", "--out-dir", str("t"),
                 "--render-dir", str("frames")})
                .code,
            0);
  EXPECT_TRUE(fs::exists(path("frames") / "frame_00000.ppm"));
  EXPECT_TRUE(fs::exists(path("frames") / "frame_00009.ppm"));
  EXPECT_EQ(slurp(path("frames") / "frame_00000.ppm").rfind("P6\n304 240\n255\n", 0), 0u);
}

TEST_F(CliTest, EvalFixtures) {
  dump(path("truth.csv"), "t_us,cx,cy,r\n0,0,0,15\n1000,10,0,15\n");
  auto same = cli({"eval", "--track", str("truth.csv"), "--truth", str("truth.csv")});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(csv_field(same.out, "mean_center_err"), 0.0);

  dump(path("offset.csv"), "t_us,x,y,r\n0,3,4,15\n500,8,4,15\n1000,13,4,15\n");
  const auto offset = cli({"eval", "--track", str("offset.csv"), "--truth", str("truth.csv")});
  ASSERT_EQ(offset.code, 0);
  EXPECT_DOUBLE_EQ(csv_field(offset.out, "mean_center_err"), 5.0);

  dump(path("late.csv"), "t_us,x,y,r\n5000,0,0,15\n6000,0,0,15\n7000,0,0,15\n");
  const auto late = cli({"eval", "--track", str("late.csv"), "--truth", str("truth.csv"),
                         "--settle-fraction", "0"});
  ASSERT_EQ(late.code, 0);
  EXPECT_EQ(csv_field(late.out, "samples"), 0.0);
  EXPECT_EQ(csv_field(late.out, "excluded"), 3.0);

  dump(path("garbage.csv"), "t_us,x,y,r\nnot,a,number,here\n");
  EXPECT_EQ(cli({"eval", "--track", str("garbage.csv"), "--truth", str("truth.csv")}).code, 1);
  EXPECT_EQ(cli({"eval", "--track", str("missing.csv"), "--truth", str("truth.csv")}).code, 1);
}

TEST_F(CliTest, BenchRowsAndMonotoneRates) {
  const auto r = cli({"bench", "--n", "50,100,200", "--dur-ms", "40", "--out-dir", str("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(path("b") / "scaling.csv");
  EXPECT_EQ(csv, r.out);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,mode,rate_hz,period_us");
  std::vector<double> graph_rates;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string n;
    std::string mode;
    std::string rate;
    std::getline(fields, n, ',');
    std::getline(fields, mode, ',');
    std::getline(fields, rate, ',');
    if (mode == "graph") {
      graph_rates.push_back(std::stod(rate));
    }
  }
  EXPECT_EQ(rows, 6);
  ASSERT_EQ(graph_rates.size(), 3u);
  EXPECT_GT(graph_rates[0], graph_rates[1]);
  EXPECT_GT(graph_rates[1], graph_rates[2]);
  EXPECT_TRUE(fs::exists(path("b") / "manifest.txt"));

  EXPECT_EQ(cli({"bench", "--n", "100,50", "--out-dir", str("b")}).code, 2);
  EXPECT_EQ(cli({"bench", "--n", "10,x", "--out-dir", str("b")}).code, 2);
}

}  // namespace
