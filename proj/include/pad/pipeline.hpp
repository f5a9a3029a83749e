#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pad/costmodel.hpp"
#include "pad/decision.hpp"
#include "pad/detection.hpp"
#include "pad/geometry.hpp"
#include "pad/packing.hpp"

namespace pad {

enum class Mode { Pad, Naive, Baseline };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::Pad: return "pad";
    case Mode::Naive: return "naive";
    case Mode::Baseline: return "baseline";
  }
  return "?";
}

struct PipelineConfig {
  int anchor_interval = 5;
  double tau = 0.2;
  FrameSpec full{300.0};
  FrameSpec reduced{150.0};
  Mode mode = Mode::Pad;

  void validate() const {
    if (anchor_interval < 1) throw std::invalid_argument("anchor interval must be >= 1");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
    if (reduced.side > full.side) throw std::invalid_argument("reduced size must not exceed full size");
  }
};

/// What the detector is asked to look at: the full frame, or the reduced
/// frame composed from a plan.
struct FullView {
  FrameSpec frame;
};
struct ReducedView {
  const PackPlan* plan = nullptr;
};
using View = std::variant<FullView, ReducedView>;

/// A detector maps (frame index within the video, view) to detections in
/// the view's coordinates. Reduced-view detections lie inside the dest frame.
template <class D>
concept Detector = requires(D& d, std::size_t frame_index, const View& view) {
  { d.detect(frame_index, view) } -> std::convertible_to<std::vector<Detection>>;
};

inline std::vector<Rect> rois_from_detections(std::span<const Detection> dets, double tau) {
  std::vector<Rect> rois;
  for (const Detection& d : dets) {
    if (d.confidence >= tau) rois.push_back(d.rect);
  }
  return rois;
}

/// Moves reduced-frame detections back to full-frame coordinates. Each
/// detection goes to the slot whose dst it overlaps most and is clipped to
/// that slot's src; detections touching no slot are dropped.
inline std::vector<Detection> map_back(std::span<const Detection> dets, const PackPlan& plan) {
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (const Detection& d : dets) {
    const PackSlot* best = nullptr;
    double best_overlap = 0.0;
    for (const PackSlot& s : plan.slots) {
      auto inter = intersection(d.rect, s.dst);
      if (inter && area(*inter) > best_overlap) {
        best_overlap = area(*inter);
        best = &s;
      }
    }
    if (!best) continue;
    auto mapped = clip(to_source(*best, d.rect), best->src);
    if (!mapped) continue;
    out.push_back(Detection{*mapped, d.class_id, d.confidence});
  }
  return out;
}

struct StepResult {
  FrameDecision decision;
  std::vector<Detection> detections;  ///< full-frame coordinates
};

/// Processes one frame given the previous frame's detections.
template <Detector D>
StepResult step(std::span<const Detection> prev_dets, std::size_t frame_index,
                const PipelineConfig& config, D& detector) {
  const FullView full{config.full};
  if (config.mode == Mode::Baseline ||
      frame_index % static_cast<std::size_t>(config.anchor_interval) == 0) {
    return {Anchor{}, detector.detect(frame_index, View{full})};
  }

  std::vector<Rect> rois;
  for (const Rect& r : rois_from_detections(prev_dets, config.tau)) {
    if (auto c = clip(r, config.full.bounds())) rois.push_back(*c);
  }
  if (rois.empty()) return {Skipped{}, {}};

  std::optional<PackPlan> plan = config.mode == Mode::Naive
                                     ? pack_naive(rois, config.full, config.reduced)
                                     : pack(rois, config.full, config.reduced);
  if (!plan) return {FallbackFull{}, detector.detect(frame_index, View{full})};

  auto raw = detector.detect(frame_index, View{ReducedView{&*plan}});
  auto mapped = map_back(raw, *plan);
  return {Packed{std::move(*plan)}, std::move(mapped)};
}

struct FrameResult {
  std::size_t frame_index = 0;
  FrameDecision decision;
  std::vector<Detection> detections;
};

struct VideoRun {
  std::vector<FrameResult> frames;
  CostReport cost;  ///< empty (zero frames) when the video is empty
};

/// Runs the pipeline over `frame_count` frames, threading each frame's
/// detections into the next, and bills every decision with `cost`.
template <Detector D>
VideoRun run_video(std::size_t frame_count, const PipelineConfig& config, D& detector,
                   const CostParams& cost) {
  config.validate();
  VideoRun run;
  run.frames.reserve(frame_count);
  std::vector<Detection> prev;
  std::vector<DecisionKind> kinds;
  for (std::size_t i = 0; i < frame_count; ++i) {
    auto r = step(prev, i, config, detector);
    prev = r.detections;
    kinds.push_back(kind(r.decision));
    run.frames.push_back(FrameResult{i, std::move(r.decision), std::move(r.detections)});
  }
  if (!kinds.empty()) run.cost = aggregate(std::span<const DecisionKind>(kinds), cost);
  return run;
}

template <Detector D>
VideoRun run_video(std::size_t frame_count, const PipelineConfig& config, D& detector) {
  return run_video(frame_count, config, detector,
                   CostParams::quadratic(config.full.side, config.reduced.side));
}

}  // namespace pad
