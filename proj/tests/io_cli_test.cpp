#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <unistd.h>

#include "pad/cli.hpp"

namespace fs = std::filesystem;

namespace pad {
namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("pad_io_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream is(p);
  std::size_t n = 0;
  for (std::string s; std::getline(is, s);) n += !s.empty();
  return n;
}

int run_pad(const std::string& args) {
  const std::string cmd = std::string(PAD_BINARY) + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

// One video, two frames: a 100x100 box that moves right by 10 pixels.
const char* kShiftFixture =
    R"({"video":"a","frame":0,"objects":[{"x0":0,"y0":0,"x1":0.3333333333333333,"y1":0.3333333333333333,"class":0}]})"
    "\n"
    R"({"video":"a","frame":1,"objects":[{"x0":0.03333333333333333,"y0":0,"x1":0.36666666666666664,"y1":0.3333333333333333,"class":0}]})"
    "\n";

TEST(Annotations, RoundTrip) {
  SyntheticParams p;
  p.videos = 3;
  p.frames_per_video = 10;
  auto videos = gen_synthetic(p);
  std::stringstream ss;
  write_annotations(ss, videos, 300.0);
  auto back = read_annotations(ss, 300.0);
  ASSERT_EQ(back.size(), videos.size());
  for (std::size_t v = 0; v < videos.size(); ++v) {
    EXPECT_EQ(back[v].name, videos[v].name);
    ASSERT_EQ(back[v].frames.size(), videos[v].frames.size());
    for (std::size_t i = 0; i < videos[v].frames.size(); ++i) {
      const auto& a = videos[v].frames[i];
      const auto& b = back[v].frames[i];
      EXPECT_EQ(a.frame_id, b.frame_id);
      ASSERT_EQ(a.objects.size(), b.objects.size());
      for (std::size_t k = 0; k < a.objects.size(); ++k) {
        EXPECT_EQ(a.objects[k].class_id, b.objects[k].class_id);
        EXPECT_NEAR(a.objects[k].rect.x_min, b.objects[k].rect.x_min, 1e-9);
        EXPECT_NEAR(a.objects[k].rect.y_max, b.objects[k].rect.y_max, 1e-9);
      }
    }
  }
}

TEST(Annotations, ErrorsNameTheLine) {
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::istringstream is(text);
    try {
      read_annotations(is, 300.0);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const FormatError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
      EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line)), std::string::npos);
    }
  };
  const std::string good = R"({"video":"a","frame":0,"objects":[]})";
  expect_line(good + "\n{not json\n", 2);
  expect_line(good + "\n\n" + R"({"video":"a","frame":1,"objects":[{"x0":0,"y0":0,"x1":1.5,"y1":1,"class":0}]})", 3);
  expect_line(R"({"video":"a","frame":0,"objects":[{"x0":0.5,"y0":0,"x1":0.5,"y1":1,"class":0}]})", 1);
  expect_line(R"({"video":"a","frame":0,"objects":[{"x0":0,"y0":0,"x1":1,"y1":1,"class":-2}]})", 1);
  expect_line(good + "\n" + good, 2);
  expect_line(R"({"frame":0,"objects":[]})", 1);
}

TEST(Annotations, VideosInterleaved) {
  std::istringstream is(R"({"video":"b","frame":0,"objects":[]})"
                        "\n"
                        R"({"video":"a","frame":3,"objects":[]})"
                        "\n"
                        R"({"video":"b","frame":4,"objects":[]})");
  auto vs = read_annotations(is, 300.0);
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_EQ(vs[0].name, "a");
  EXPECT_EQ(vs[1].frames.size(), 2u);
  EXPECT_EQ(vs[1].frames[1].frame_id, 4);
}

TEST(Histogram, CsvFormat) {
  std::ostringstream os;
  write_histogram_csv(os, histogram(std::vector<double>{0.1, 0.1, 0.9}, 2, 0.0, 1.0));
  EXPECT_EQ(os.str(), "bin_left,bin_right,count\n0,0.5,2\n0.5,1,1\n");
}

TEST(Cli, GenWritesOneRecordPerFrameAndIsReproducible) {
  const auto a = scratch("gen_a.jsonl"), b = scratch("gen_b.jsonl"), c = scratch("gen_c.jsonl");
  ASSERT_EQ(run_pad("gen --videos 10 --frames 100 --seed 5 --out " + a.string()), 0);
  ASSERT_EQ(run_pad("gen --videos 10 --frames 100 --seed 5 --out " + b.string()), 0);
  ASSERT_EQ(run_pad("gen --videos 10 --frames 100 --seed 6 --out " + c.string()), 0);
  EXPECT_EQ(count_lines(a), 1000u);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
}

TEST(Cli, RejectsBadArguments) {
  const auto out = scratch("bad.jsonl");
  EXPECT_NE(run_pad("gen --occupancy 1.5 --out " + out.string()), 0);
  EXPECT_NE(run_pad("gen --occupancy 0 --out " + out.string()), 0);
  EXPECT_NE(run_pad("run " + scratch("missing.jsonl").string() + " --out " + out.string()), 0);
  EXPECT_NE(run_pad("run " + out.string() + " --mode bogus --out " + out.string()), 0);
  EXPECT_NE(run_pad("frobnicate"), 0);
}

TEST(Cli, RunModes) {
  const auto ann = scratch("run_ann.jsonl");
  ASSERT_EQ(run_pad("gen --videos 4 --frames 30 --seed 2 --out " + ann.string()), 0);
  for (const char* mode : {"pad", "naive", "baseline"}) {
    const auto out = scratch(std::string("run_") + mode + ".jsonl");
    ASSERT_EQ(run_pad("run " + ann.string() + " --mode " + mode + " --out " + out.string()), 0) << mode;
    EXPECT_EQ(count_lines(out), 120u);
    auto summary = nlohmann::json::parse(slurp(out.string() + ".summary.json"));
    const double reduction = summary.at("cost").at("reduction").get<double>();
    if (std::string(mode) == "baseline") {
      EXPECT_EQ(reduction, 0.0);
      EXPECT_EQ(summary.at("cost").at("counts").at("anchor").get<std::size_t>(), 120u);
    } else {
      EXPECT_GT(reduction, 0.0) << mode;
    }
    EXPECT_GE(summary.at("eval").at("map").get<double>(), 0.0);
  }
}

TEST(Cli, RunRecordsCarryDecisionsAndPlans) {
  const auto ann = scratch("plan_ann.jsonl");
  write_text(ann, kShiftFixture);
  cli::RunOptions opt;
  opt.annotations = ann;
  opt.noise_profile = "none";
  opt.out = scratch("plan_out.jsonl");
  cli::cmd_run(opt);
  std::ifstream is(opt.out);
  std::string l0, l1;
  std::getline(is, l0);
  std::getline(is, l1);
  auto j0 = nlohmann::json::parse(l0), j1 = nlohmann::json::parse(l1);
  EXPECT_EQ(j0.at("decision"), "anchor");
  EXPECT_FALSE(j0.contains("plan"));
  EXPECT_EQ(j1.at("decision"), "packed");
  EXPECT_EQ(j1.at("plan").at("method"), "greedy");
  EXPECT_EQ(j1.at("detections").size(), 1u);
  EXPECT_TRUE(fs::exists(scratch("plan_out.jsonl.summary.json")));
}

TEST(Cli, StatsOnFixtures) {
  const auto ann = scratch("stats_ann.jsonl");
  write_text(ann, kShiftFixture);
  const auto dir = scratch("stats_out");
  ASSERT_EQ(run_pad("stats " + ann.string() + " --bins 10 --out " + dir.string()), 0);
  auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_NEAR(summary.at("mean_temporal_iou").get<double>(), 9.0 / 11.0, 1e-9);
  EXPECT_NEAR(summary.at("mean_occupancy").get<double>(), 1.0 / 9.0, 1e-9);
  EXPECT_EQ(count_lines(dir / "occupancy.csv"), 11u);
  EXPECT_EQ(slurp(dir / "temporal_iou.csv").substr(0, 24), "bin_left,bin_right,count");

  const auto half = scratch("stats_half.jsonl");
  write_text(half, R"({"video":"h","frame":0,"objects":[{"x0":0,"y0":0,"x1":0.5,"y1":0.5,"class":0},)"
                   R"({"x0":0.5,"y0":0.5,"x1":1,"y1":1,"class":1}]})"
                   "\n"
                   R"({"video":"h","frame":1,"objects":[{"x0":0,"y0":0,"x1":0.5,"y1":0.5,"class":0},)"
                   R"({"x0":0.5,"y0":0.5,"x1":1,"y1":1,"class":1}]})"
                   "\n");
  cli::StatsOptions opt;
  opt.annotations = half;
  opt.out = scratch("stats_half_out");
  auto s = cli::cmd_stats(opt);
  EXPECT_EQ(s.mean_occupancy, 0.5);
  EXPECT_EQ(s.mean_temporal_iou, 1.0);
}

}  // namespace
}  // namespace pad
