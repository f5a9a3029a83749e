#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pad/harness.hpp"
#include "pad/io.hpp"
#include "pad/simdet.hpp"
#include "pad/stats.hpp"

namespace pad::cli {

// Commands behind the `pad` executable. Each returns normally on success
// and throws std::exception (std::invalid_argument for bad options) on
// failure.

inline NoiseModel noise_profile(const std::string& name, std::uint64_t seed) {
  if (name == "default") {
    NoiseModel n;
    n.seed = seed;
    return n;
  }
  if (name == "none") return NoiseModel::disabled(seed);
  throw std::invalid_argument("unknown noise profile '" + name + "' (expected default or none)");
}

inline Mode parse_mode(const std::string& s) {
  if (s == "pad") return Mode::Pad;
  if (s == "naive") return Mode::Naive;
  if (s == "baseline") return Mode::Baseline;
  throw std::invalid_argument("unknown mode '" + s + "' (expected pad, naive or baseline)");
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

inline std::vector<Video> load_annotations(const std::filesystem::path& p, double side) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + p.string());
  return read_annotations(is, side);
}

struct GenOptions {
  SyntheticParams params;
  std::filesystem::path out;
};

/// Writes synthetic annotations; returns the number of frame records.
inline std::size_t cmd_gen(const GenOptions& opt) {
  auto videos = gen_synthetic(opt.params);
  auto os = open_out(opt.out);
  write_annotations(os, videos, opt.params.frame_side);
  std::size_t n = 0;
  for (const auto& v : videos) n += v.frames.size();
  return n;
}

struct RunOptions {
  std::filesystem::path annotations;
  PipelineConfig config;
  double pack_overhead = 0.02;
  std::string noise_profile = "default";
  std::uint64_t seed = 0;
  std::filesystem::path out;
  /// Defaults to `<out>.summary.json`.
  std::filesystem::path summary;
};

inline std::filesystem::path summary_path(const RunOptions& opt) {
  if (!opt.summary.empty()) return opt.summary;
  auto p = opt.out;
  p += ".summary.json";
  return p;
}

inline nlohmann::json config_json(const RunOptions& opt) {
  return {{"mode", to_string(opt.config.mode)},
          {"anchor_interval", opt.config.anchor_interval},
          {"tau", opt.config.tau},
          {"full_size", opt.config.full.side},
          {"reduced_size", opt.config.reduced.side},
          {"pack_overhead", opt.pack_overhead},
          {"noise_profile", opt.noise_profile},
          {"seed", opt.seed}};
}

inline DatasetRun cmd_run(const RunOptions& opt) {
  opt.config.validate();
  const auto noise = noise_profile(opt.noise_profile, opt.seed);
  const auto cost = CostParams::quadratic(opt.config.full.side, opt.config.reduced.side, opt.pack_overhead);
  const auto videos = load_annotations(opt.annotations, opt.config.full.side);
  if (videos.empty()) throw std::invalid_argument("annotation file has no frames");

  DatasetRun run = run_dataset(videos, opt.config, noise, cost);

  auto os = open_out(opt.out);
  for (std::size_t v = 0; v < videos.size(); ++v) {
    for (std::size_t i = 0; i < videos[v].frames.size(); ++i) {
      os << result_json(videos[v].name, videos[v].frames[i], run.videos[v].frames[i], opt.config.full.side).dump()
         << '\n';
    }
  }
  nlohmann::json summary{{"config", config_json(opt)},
                         {"videos", videos.size()},
                         {"cost", cost_json(run.cost)},
                         {"eval", eval_json(run.eval)}};
  auto ss = open_out(summary_path(opt));
  ss << summary.dump(2) << '\n';
  return run;
}

struct StatsOptions {
  std::filesystem::path annotations;
  double full_size = 300.0;
  std::size_t bins = 20;
  /// Output directory for occupancy.csv, temporal_iou.csv and summary.json.
  std::filesystem::path out;
};

inline DatasetStats cmd_stats(const StatsOptions& opt) {
  const FrameSpec frame(opt.full_size);
  const auto videos = load_annotations(opt.annotations, frame.side);
  if (videos.empty()) throw std::invalid_argument("annotation file has no frames");
  DatasetStats s = dataset_stats(videos, frame);

  const auto occ = histogram(s.occupancy, opt.bins, 0.0, 1.0);
  const auto tiou = histogram(s.temporal_iou, opt.bins, 0.0, 1.0);
  {
    auto os = open_out(opt.out / "occupancy.csv");
    write_histogram_csv(os, occ);
  }
  {
    auto os = open_out(opt.out / "temporal_iou.csv");
    write_histogram_csv(os, tiou);
  }
  nlohmann::json summary{{"videos", videos.size()},
                         {"frames", s.occupancy.size()},
                         {"frame_pairs", s.temporal_iou.size()},
                         {"mean_occupancy", s.mean_occupancy},
                         {"mean_temporal_iou", s.mean_temporal_iou}};
  auto os = open_out(opt.out / "summary.json");
  os << summary.dump(2) << '\n';
  return s;
}

}  // namespace pad::cli
