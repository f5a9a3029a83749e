#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pad/detection.hpp"
#include "pad/geometry.hpp"

namespace pad {

inline std::vector<Rect> object_rects(const GroundTruthFrame& f) {
  std::vector<Rect> rs;
  rs.reserve(f.objects.size());
  for (const auto& o : f.objects) rs.push_back(o.rect);
  return rs;
}

/// Fraction of the frame covered by the union of its object boxes.
inline double occupancy_ratio(const GroundTruthFrame& f, const FrameSpec& frame) {
  auto rs = object_rects(f);
  return std::min(1.0, union_area(rs) / frame.area());
}

/// IoU between the regions covered by the objects of two frames. Two empty
/// frames agree perfectly and score 1.
inline double temporal_region_iou(const GroundTruthFrame& a, const GroundTruthFrame& b) {
  auto ra = object_rects(a);
  auto rb = object_rects(b);
  std::vector<Rect> overlaps;
  for (const Rect& x : ra) {
    for (const Rect& y : rb) {
      if (auto i = intersection(x, y)) overlaps.push_back(*i);
    }
  }
  std::vector<Rect> both = ra;
  both.insert(both.end(), rb.begin(), rb.end());
  const double uni = union_area(both);
  if (uni == 0.0) return 1.0;
  return std::clamp(union_area(overlaps) / uni, 0.0, 1.0);
}

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::size_t> counts;
  std::size_t rejected = 0;  ///< values outside [lo, hi]

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double bin_left(std::size_t i) const { return lo + bin_width() * static_cast<double>(i); }
  double bin_right(std::size_t i) const { return i + 1 == counts.size() ? hi : bin_left(i + 1); }
};

/// Bins are [left, right) except the last, which also holds `hi`.
inline Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi)) throw std::invalid_argument("histogram range must be non-empty");
  Histogram h{lo, hi, std::vector<std::size_t>(bins, 0), 0};
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      ++h.rejected;
      continue;
    }
    auto i = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(bins)));
    ++h.counts[std::min(i, bins - 1)];
  }
  return h;
}

struct DatasetStats {
  std::vector<double> occupancy;     ///< one value per frame
  std::vector<double> temporal_iou;  ///< one value per consecutive pair within a video
  double mean_occupancy = 0.0;
  double mean_temporal_iou = 0.0;
};

inline DatasetStats dataset_stats(std::span<const Video> videos, const FrameSpec& frame) {
  DatasetStats s;
  for (const Video& v : videos) {
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
      s.occupancy.push_back(occupancy_ratio(v.frames[i], frame));
      if (i > 0) s.temporal_iou.push_back(temporal_region_iou(v.frames[i - 1], v.frames[i]));
    }
  }
  if (s.occupancy.empty()) throw std::invalid_argument("dataset has no frames");
  auto mean = [](const std::vector<double>& xs) {
    double t = 0.0;
    for (double x : xs) t += x;
    return xs.empty() ? 0.0 : t / static_cast<double>(xs.size());
  };
  s.mean_occupancy = mean(s.occupancy);
  s.mean_temporal_iou = s.temporal_iou.empty() ? 1.0 : mean(s.temporal_iou);
  return s;
}

}  // namespace pad
