#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pad/geometry.hpp"

namespace pad {

struct Detection {
  Rect rect;  ///< in the coordinates of the view that produced it
  int class_id = 0;
  double confidence = 0.0;

  bool valid() const { return rect.valid() && class_id >= 0 && confidence >= 0.0 && confidence <= 1.0; }
  bool operator==(const Detection&) const = default;
};

/// One annotated object of a ground-truth frame.
struct GroundTruthObject {
  int class_id = 0;
  Rect rect;  ///< full-size frame coordinates
  bool operator==(const GroundTruthObject&) const = default;
};

struct GroundTruthFrame {
  long frame_id = 0;
  std::vector<GroundTruthObject> objects;
  bool operator==(const GroundTruthFrame&) const = default;
};

/// Frames of one video, frame ids strictly increasing.
struct Video {
  std::string name;
  std::vector<GroundTruthFrame> frames;
  bool operator==(const Video&) const = default;
};

inline void check_frame_order(const Video& v) {
  for (std::size_t i = 1; i < v.frames.size(); ++i) {
    if (v.frames[i].frame_id <= v.frames[i - 1].frame_id) {
      throw std::invalid_argument("video '" + v.name + "': frame ids must be strictly increasing");
    }
  }
}

}  // namespace pad
