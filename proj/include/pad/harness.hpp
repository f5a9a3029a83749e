#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pad/costmodel.hpp"
#include "pad/eval.hpp"
#include "pad/pipeline.hpp"
#include "pad/simdet.hpp"

namespace pad {

/// Pipeline output for a whole dataset, scored against its ground truth.
struct DatasetRun {
  std::vector<VideoRun> videos;  ///< same order as the input videos
  CostReport cost;               ///< over every frame of every video
  EvalReport eval;
};

inline DatasetRun run_dataset(std::span<const Video> videos, const PipelineConfig& config,
                              const NoiseModel& noise, const CostParams& cost) {
  DatasetRun out;
  std::vector<DecisionKind> kinds;
  std::vector<FrameDetection> dets;
  std::vector<FrameObject> gts;
  std::size_t frame_base = 0;
  for (const Video& v : videos) {
    check_frame_order(v);
    SimulatedDetector detector(v, config.full, noise);
    VideoRun run = run_video(v.frames.size(), config, detector, cost);
    for (std::size_t i = 0; i < run.frames.size(); ++i) {
      kinds.push_back(kind(run.frames[i].decision));
      for (const auto& d : run.frames[i].detections) dets.push_back({frame_base + i, d});
      for (const auto& o : v.frames[i].objects) gts.push_back({frame_base + i, o});
    }
    frame_base += v.frames.size();
    out.videos.push_back(std::move(run));
  }
  if (!kinds.empty()) out.cost = aggregate(std::span<const DecisionKind>(kinds), cost);
  if (!gts.empty()) out.eval = evaluate(dets, gts);
  return out;
}

}  // namespace pad
