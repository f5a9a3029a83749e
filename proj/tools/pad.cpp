// pad: synthetic data generation, pipeline runs and dataset statistics.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pad/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pack-and-detect video detection pipeline"};
  app.require_subcommand(1);

  pad::cli::GenOptions gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic annotation videos");
  gen_cmd->add_option("--videos", gen.params.videos, "Number of videos")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--frames", gen.params.frames_per_video, "Frames per video")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--occupancy", gen.params.occupancy_target, "Mean object occupancy ratio")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--occupancy-shape", gen.params.occupancy_shape, "Skew of per-video occupancy (1 = exponential)")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--min-objects", gen.params.min_objects, "Fewest objects per video");
  gen_cmd->add_option("--max-objects", gen.params.max_objects, "Most objects per video");
  gen_cmd->add_option("--classes", gen.params.num_classes, "Number of object classes");
  gen_cmd->add_option("--max-speed", gen.params.max_speed, "Per-axis speed bound, pixels per frame");
  gen_cmd->add_option("--full-size", gen.params.frame_side, "Frame side used for sizing, pixels");
  gen_cmd->add_option("--seed", gen.params.seed, "Random seed");
  gen_cmd->add_option("--out", gen_out, "Output annotation file (JSON Lines)")->required();

  pad::cli::RunOptions run;
  std::string run_in, run_out, run_summary, mode = "pad";
  double full_size = 300.0, reduced_size = 150.0;
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline over an annotation file");
  run_cmd->add_option("annotations", run_in, "Annotation file (JSON Lines)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--anchor-interval", run.config.anchor_interval, "Frames between anchor frames")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--tau", run.config.tau, "ROI confidence threshold")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--full-size", full_size, "Full frame side, pixels")->check(CLI::PositiveNumber);
  run_cmd->add_option("--reduced-size", reduced_size, "Reduced frame side, pixels")->check(CLI::PositiveNumber);
  run_cmd->add_option("--mode", mode, "Processing mode")->check(CLI::IsMember({"pad", "naive", "baseline"}));
  run_cmd->add_option("--pack-overhead", run.pack_overhead, "Packing attempt cost, fraction of a full pass")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--noise-profile", run.noise_profile, "Simulated detector noise")
      ->check(CLI::IsMember({"default", "none"}));
  run_cmd->add_option("--seed", run.seed, "Detector noise seed");
  run_cmd->add_option("--out", run_out, "Per-frame result file (JSON Lines)")->required();
  run_cmd->add_option("--summary", run_summary, "Summary JSON (default: <out>.summary.json)");

  pad::cli::StatsOptions stats;
  std::string stats_in, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Occupancy and temporal IoU statistics");
  stats_cmd->add_option("annotations", stats_in, "Annotation file (JSON Lines)")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--full-size", stats.full_size, "Full frame side, pixels")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--bins", stats.bins, "Histogram bins")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--out", stats_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      gen.out = gen_out;
      const auto n = pad::cli::cmd_gen(gen);
      std::cout << "wrote " << n << " frame records to " << gen_out << '\n';
    } else if (*run_cmd) {
      run.annotations = run_in;
      run.out = run_out;
      run.summary = run_summary;
      run.config.mode = pad::cli::parse_mode(mode);
      run.config.full = pad::FrameSpec(full_size);
      run.config.reduced = pad::FrameSpec(reduced_size);
      const auto result = pad::cli::cmd_run(run);
      std::printf("frames %zu  reduction %.4f  speedup %.4f  mAP %.4f\n", result.cost.frames(),
                  result.cost.reduction, result.cost.speedup, result.eval.map);
    } else if (*stats_cmd) {
      stats.annotations = stats_in;
      stats.out = stats_out;
      const auto s = pad::cli::cmd_stats(stats);
      std::printf("frames %zu  mean occupancy %.4f  mean temporal IoU %.4f\n", s.occupancy.size(),
                  s.mean_occupancy, s.mean_temporal_iou);
    }
  } catch (const std::exception& e) {
    std::cerr << "pad: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
