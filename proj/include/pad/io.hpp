#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pad/costmodel.hpp"
#include "pad/detection.hpp"
#include "pad/eval.hpp"
#include "pad/pipeline.hpp"
#include "pad/stats.hpp"

namespace pad {

// Annotation stream: JSON Lines, one frame per line,
//   {"video": str, "frame": int, "objects": [{"class": int, "x0": f, "y0": f, "x1": f, "y1": f}]}
// with coordinates normalized to [0, 1] and scaled by the full frame side on ingest.

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline nlohmann::json rect_json(const Rect& r, double side) {
  return {{"x0", r.x_min / side}, {"y0", r.y_min / side}, {"x1", r.x_max / side}, {"y1", r.y_max / side}};
}

inline nlohmann::json frame_json(const std::string& video, const GroundTruthFrame& f, double side) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : f.objects) {
    auto j = rect_json(o.rect, side);
    j["class"] = o.class_id;
    objects.push_back(std::move(j));
  }
  return {{"video", video}, {"frame", f.frame_id}, {"objects", std::move(objects)}};
}

inline void write_annotations(std::ostream& os, const std::vector<Video>& videos, double side) {
  for (const Video& v : videos) {
    for (const auto& f : v.frames) os << frame_json(v.name, f, side).dump() << '\n';
  }
}

/// Parses an annotation stream into videos sorted by name, frames in file
/// order. Throws FormatError naming the offending line.
inline std::vector<Video> read_annotations(std::istream& is, double side) {
  std::map<std::string, Video> videos;
  std::string text;
  std::size_t line = 0;
  while (std::getline(is, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(line, std::string("invalid JSON: ") + e.what());
    }
    try {
      GroundTruthFrame f;
      const std::string name = j.at("video").get<std::string>();
      f.frame_id = j.at("frame").get<long>();
      for (const auto& o : j.at("objects")) {
        auto coord = [&](const char* k) {
          const double v = o.at(k).get<double>();
          if (!(v >= 0.0 && v <= 1.0)) throw FormatError(line, std::string(k) + " outside [0, 1]");
          return v * side;
        };
        Rect r{coord("x0"), coord("y0"), coord("x1"), coord("y1")};
        if (!r.valid()) throw FormatError(line, "object box has no area");
        const int cls = o.at("class").get<int>();
        if (cls < 0) throw FormatError(line, "negative class id");
        f.objects.push_back({cls, r});
      }
      Video& v = videos[name];
      v.name = name;
      if (!v.frames.empty() && f.frame_id <= v.frames.back().frame_id) {
        throw FormatError(line, "frame ids must increase within video '" + name + "'");
      }
      v.frames.push_back(std::move(f));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line, e.what());
    }
  }
  std::vector<Video> out;
  out.reserve(videos.size());
  for (auto& [name, v] : videos) out.push_back(std::move(v));
  return out;
}

inline nlohmann::json plan_json(const PackPlan& plan) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : plan.slots) {
    slots.push_back({{"src", {s.src.x_min, s.src.y_min, s.src.x_max, s.src.y_max}},
                     {"dst", {s.dst.x_min, s.dst.y_min, s.dst.x_max, s.dst.y_max}},
                     {"scale_x", s.scale_x},
                     {"scale_y", s.scale_y}});
  }
  nlohmann::json j{{"method", to_string(plan.method)}, {"dest_side", plan.dest.side}, {"slots", slots}};
  if (plan.layout) j["primary_axis"] = to_string(plan.layout->primary_axis);
  return j;
}

/// Result record: the annotation record plus the decision, the detections
/// in normalized coordinates and, for packed frames, the plan in pixels.
inline nlohmann::json result_json(const std::string& video, const GroundTruthFrame& f, const FrameResult& r,
                                  double side) {
  auto j = frame_json(video, f, side);
  j["decision"] = to_string(kind(r.decision));
  nlohmann::json dets = nlohmann::json::array();
  for (const auto& d : r.detections) {
    auto dj = rect_json(d.rect, side);
    dj["class"] = d.class_id;
    dj["conf"] = d.confidence;
    dets.push_back(std::move(dj));
  }
  j["detections"] = std::move(dets);
  if (const auto* p = std::get_if<Packed>(&r.decision)) j["plan"] = plan_json(p->plan);
  return j;
}

inline nlohmann::json cost_json(const CostReport& c) {
  nlohmann::json counts;
  nlohmann::json fractions;
  for (std::size_t k = 0; k < kDecisionKinds; ++k) {
    const char* name = to_string(static_cast<DecisionKind>(k));
    counts[name] = c.counts[k];
    fractions[name] = c.fractions[k];
  }
  return {{"frames", c.frames()},  {"total", c.total},
          {"baseline", c.baseline}, {"overhead_total", c.overhead_total},
          {"reduction", c.reduction}, {"speedup", c.speedup},
          {"overhead_share", c.overhead_share}, {"counts", counts},
          {"fractions", fractions}};
}

inline nlohmann::json eval_json(const EvalReport& e) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : e.classes) {
    classes.push_back(
        {{"class", c.class_id}, {"ap", c.ap}, {"ground_truth", c.ground_truth}, {"detections", c.detections}});
  }
  return {{"map", e.map}, {"ground_truth", e.ground_truth}, {"detections", e.detections}, {"classes", classes}};
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    os << format_number(h.bin_left(i)) << ',' << format_number(h.bin_right(i)) << ',' << h.counts[i] << '\n';
  }
}

}  // namespace pad
