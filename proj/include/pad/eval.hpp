#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pad/detection.hpp"
#include "pad/geometry.hpp"

namespace pad {

/// A detection tagged with the (dataset-wide) index of its frame.
struct FrameDetection {
  std::size_t frame = 0;
  Detection det;
};

struct FrameObject {
  std::size_t frame = 0;
  GroundTruthObject object;
};

/// Average precision for one class, all-points interpolation.
///
/// Detections are ranked by confidence (ties by frame, then input order) and
/// each is matched to the unmatched ground truth of its class and frame with
/// the highest IoU, provided that IoU reaches iou_thr. Absent when the class
/// has no ground truth.
inline std::optional<double> match_and_ap(std::span<const FrameDetection> dets,
                                          std::span<const FrameObject> gts, int class_id,
                                          double iou_thr = 0.5) {
  std::map<std::size_t, std::vector<Rect>> gt_by_frame;
  std::size_t n_gt = 0;
  for (const auto& g : gts) {
    if (g.object.class_id != class_id) continue;
    gt_by_frame[g.frame].push_back(g.object.rect);
    ++n_gt;
  }
  if (n_gt == 0) return std::nullopt;

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (dets[i].det.class_id == class_id) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].det.confidence != dets[b].det.confidence) return dets[a].det.confidence > dets[b].det.confidence;
    return dets[a].frame < dets[b].frame;
  });

  std::map<std::size_t, std::vector<bool>> used;
  for (const auto& [frame, rs] : gt_by_frame) used[frame].assign(rs.size(), false);

  std::vector<double> precision;
  std::vector<double> recall;
  std::size_t tp = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const FrameDetection& d = dets[order[rank]];
    auto it = gt_by_frame.find(d.frame);
    if (it != gt_by_frame.end()) {
      auto& taken = used[d.frame];
      double best = -1.0;
      std::optional<std::size_t> match;
      for (std::size_t g = 0; g < it->second.size(); ++g) {
        if (taken[g]) continue;
        const double o = iou(d.det.rect, it->second[g]);
        if (o >= iou_thr && o > best) {
          best = o;
          match = g;
        }
      }
      if (match) {
        taken[*match] = true;
        ++tp;
      }
    }
    precision.push_back(static_cast<double>(tp) / static_cast<double>(rank + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }

  // Monotone precision envelope, then sum over recall steps.
  for (std::size_t i = precision.size(); i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < precision.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

inline double mean_ap(std::span<const double> class_aps) {
  if (class_aps.empty()) throw std::invalid_argument("mAP undefined: no class has ground truth");
  return std::accumulate(class_aps.begin(), class_aps.end(), 0.0) / static_cast<double>(class_aps.size());
}

struct ClassResult {
  int class_id = 0;
  double ap = 0.0;
  std::size_t ground_truth = 0;
  std::size_t detections = 0;
};

struct EvalReport {
  std::vector<ClassResult> classes;  ///< classes with ground truth, ascending id
  double map = 0.0;
  std::size_t ground_truth = 0;
  std::size_t detections = 0;
};

inline EvalReport evaluate(std::span<const FrameDetection> dets, std::span<const FrameObject> gts,
                           double iou_thr = 0.5) {
  std::map<int, ClassResult> by_class;
  for (const auto& g : gts) {
    auto& c = by_class[g.object.class_id];
    c.class_id = g.object.class_id;
    ++c.ground_truth;
  }
  for (const auto& d : dets) {
    auto it = by_class.find(d.det.class_id);
    if (it != by_class.end()) ++it->second.detections;
  }
  EvalReport r;
  std::vector<double> aps;
  for (auto& [id, c] : by_class) {
    c.ap = *match_and_ap(dets, gts, id, iou_thr);
    aps.push_back(c.ap);
    r.classes.push_back(c);
  }
  r.map = mean_ap(aps);
  r.ground_truth = gts.size();
  r.detections = dets.size();
  return r;
}

}  // namespace pad
