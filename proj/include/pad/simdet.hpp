#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pad/detection.hpp"
#include "pad/geometry.hpp"
#include "pad/packing.hpp"
#include "pad/pipeline.hpp"
#include "pad/random.hpp"

namespace pad {

/// Degradation knobs of the simulated detector.
struct NoiseModel {
  std::uint64_t seed = 0;
  /// Localization jitter, in pixels of the processed view.
  double loc_sigma = 1.0;
  /// Base confidence rises linearly from conf_floor to conf_ceiling as the
  /// object's area fraction of the full frame goes from 0 to conf_saturation.
  double conf_floor = 0.5;
  double conf_ceiling = 0.95;
  double conf_saturation = 0.05;
  /// Objects with less than margin_threshold view pixels of context on some
  /// side of their slot are dropped with probability miss_probability.
  /// Slot sides lying on the frame border do not count.
  double margin_threshold = 8.0;
  double miss_probability = 0.5;
  /// Confidence multiplier: 1 - scale_penalty * max(|scale_x - 1|, |scale_y - 1|).
  double scale_penalty = 0.6;

  static NoiseModel disabled(std::uint64_t seed = 0) {
    NoiseModel n;
    n.seed = seed;
    n.loc_sigma = 0.0;
    n.miss_probability = 0.0;
    n.scale_penalty = 0.0;
    return n;
  }

  void validate() const {
    if (loc_sigma < 0 || margin_threshold < 0 || scale_penalty < 0) {
      throw std::invalid_argument("noise parameters must be non-negative");
    }
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(miss_probability) || !unit(conf_floor) || !unit(conf_ceiling)) {
      throw std::invalid_argument("probabilities and confidences must lie in [0, 1]");
    }
    if (!(conf_saturation > 0)) throw std::invalid_argument("conf_saturation must be positive");
  }

  double base_conf(double area_fraction) const {
    const double t = std::clamp(area_fraction / conf_saturation, 0.0, 1.0);
    return std::clamp(conf_floor + (conf_ceiling - conf_floor) * t, 0.0, 1.0);
  }

  double scale_multiplier(double scale_x, double scale_y) const {
    const double dev = std::max(std::abs(scale_x - 1.0), std::abs(scale_y - 1.0));
    return std::clamp(1.0 - scale_penalty * dev, 0.0, 1.0);
  }
};

namespace detail {

enum : std::uint64_t { kJitterStream = 1, kMissStream = 2 };

// Jitters center and size by sigma (view pixels), keeps a width/height of at
// least one pixel and clips to `bounds`.
inline std::optional<Rect> jitter(const Rect& r, double sigma, CounterRng& rng, const Rect& bounds) {
  const double dx = rng.normal(), dy = rng.normal(), dw = rng.normal(), dh = rng.normal();
  if (sigma == 0.0) return clip(r, bounds);
  const double w = std::max(1.0, r.width() + sigma * dw);
  const double h = std::max(1.0, r.height() + sigma * dh);
  const double cx = r.center_x() + sigma * dx;
  const double cy = r.center_y() + sigma * dy;
  return clip(Rect{cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h}, bounds);
}

// Smallest context margin, in view pixels, that the slot leaves around the
// object. Slot sides on the frame border are ignored.
inline double context_margin(const PackSlot& s, const Rect& obj, const FrameSpec& source) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double m = inf;
  if (s.src.x_min > 0.0) m = std::min(m, (obj.x_min - s.src.x_min) * s.scale_x);
  if (s.src.y_min > 0.0) m = std::min(m, (obj.y_min - s.src.y_min) * s.scale_y);
  if (s.src.x_max < source.side) m = std::min(m, (s.src.x_max - obj.x_max) * s.scale_x);
  if (s.src.y_max < source.side) m = std::min(m, (s.src.y_max - obj.y_max) * s.scale_y);
  return m;
}

inline bool center_inside(const Rect& obj, const Rect& region) {
  const double cx = obj.center_x();
  const double cy = obj.center_y();
  return region.x_min <= cx && cx < region.x_max && region.y_min <= cy && cy < region.y_max;
}

}  // namespace detail

/// Simulated detector output for one ground-truth frame.
///
/// Full view: every object, jittered, with confidence base_conf(area).
/// Reduced view: an object is seen through each slot whose src holds its
/// center; the visible part is moved into dst coordinates, jittered in view
/// pixels, penalized for rescaling and possibly missed for lack of context.
/// `stream` separates videos that share frame ids.
inline std::vector<Detection> oracle_detect(const View& view, const GroundTruthFrame& gt,
                                            const FrameSpec& source, const NoiseModel& noise,
                                            std::uint64_t stream = 0) {
  std::vector<Detection> out;
  const double frame_area = source.area();

  if (std::holds_alternative<FullView>(view)) {
    const Rect bounds = std::get<FullView>(view).frame.bounds();
    for (std::size_t j = 0; j < gt.objects.size(); ++j) {
      const auto& obj = gt.objects[j];
      CounterRng rng(make_key(noise.seed, stream, gt.frame_id, j, detail::kJitterStream, 0));
      auto r = detail::jitter(obj.rect, noise.loc_sigma, rng, bounds);
      if (!r) continue;
      out.push_back(Detection{*r, obj.class_id, noise.base_conf(area(obj.rect) / frame_area)});
    }
    return out;
  }

  const PackPlan* plan = std::get<ReducedView>(view).plan;
  if (!plan) throw std::invalid_argument("reduced view without a plan");
  for (std::size_t j = 0; j < gt.objects.size(); ++j) {
    const auto& obj = gt.objects[j];
    std::size_t occurrence = 0;
    for (const PackSlot& slot : plan->slots) {
      if (!detail::center_inside(obj.rect, slot.src)) continue;
      const std::size_t k = occurrence++;

      CounterRng miss(make_key(noise.seed, stream, gt.frame_id, j, detail::kMissStream, k));
      if (detail::context_margin(slot, obj.rect, source) < noise.margin_threshold &&
          miss.uniform() < noise.miss_probability) {
        continue;
      }
      auto visible = intersection(obj.rect, slot.src);
      if (!visible) continue;
      CounterRng rng(make_key(noise.seed, stream, gt.frame_id, j, detail::kJitterStream, k));
      auto r = detail::jitter(to_dest(slot, *visible), noise.loc_sigma, rng, slot.dst);
      if (!r) continue;
      const double conf =
          noise.base_conf(area(obj.rect) / frame_area) * noise.scale_multiplier(slot.scale_x, slot.scale_y);
      out.push_back(Detection{*r, obj.class_id, conf});
    }
  }
  return out;
}

/// Detector over one ground-truth video.
class SimulatedDetector {
 public:
  SimulatedDetector(const Video& video, FrameSpec source, NoiseModel noise)
      : video_(&video), source_(source), noise_(noise), stream_(hash_string(video.name)) {
    noise_.validate();
  }

  std::vector<Detection> detect(std::size_t frame_index, const View& view) const {
    if (frame_index >= video_->frames.size()) throw std::out_of_range("frame index past end of video");
    return oracle_detect(view, video_->frames[frame_index], source_, noise_, stream_);
  }

 private:
  const Video* video_;
  FrameSpec source_;
  NoiseModel noise_;
  std::uint64_t stream_;
};

struct SyntheticParams {
  std::size_t videos = 10;
  std::size_t frames_per_video = 100;
  double frame_side = 300.0;
  int min_objects = 1;
  int max_objects = 3;
  int num_classes = 5;
  /// Mean union occupancy. Per-video targets follow a Weibull distribution
  /// with this mean (many sparse scenes, a few crowded ones), read off at
  /// equidistributed quantiles so the dataset mean stays close to the target.
  double occupancy_target = 0.227;
  /// Weibull shape; 1 is exponential, smaller values skew towards sparse scenes.
  double occupancy_shape = 0.7;
  /// Width/height ratio range, sampled log-uniformly.
  double aspect_min = 0.5;
  double aspect_max = 2.0;
  /// Per-axis speed in pixels per frame, uniform in [-max_speed, max_speed].
  double max_speed = 1.0;
  /// Per-frame positional jitter (pixels).
  double jitter_sigma = 0.25;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(occupancy_target > 0.0 && occupancy_target < 1.0)) {
      throw std::invalid_argument("occupancy target must lie in (0, 1)");
    }
    if (!(occupancy_shape > 0.0)) throw std::invalid_argument("occupancy shape must be positive");
    if (min_objects < 1 || max_objects < min_objects) throw std::invalid_argument("bad object count range");
    if (num_classes < 1) throw std::invalid_argument("need at least one class");
    if (!(aspect_min > 0.0) || aspect_max < aspect_min) throw std::invalid_argument("bad aspect range");
    if (max_speed < 0.0 || jitter_sigma < 0.0) throw std::invalid_argument("speeds must be non-negative");
    if (!(frame_side > 0.0)) throw std::invalid_argument("frame side must be positive");
  }
};

namespace detail {

struct MovingBox {
  int class_id = 0;
  double cx = 0, cy = 0, w = 0, h = 0, vx = 0, vy = 0;

  Rect rect(double side) const {
    return Rect{std::max(0.0, cx - 0.5 * w), std::max(0.0, cy - 0.5 * h), std::min(side, cx + 0.5 * w),
                std::min(side, cy + 0.5 * h)};
  }

  void keep_inside(double side) {
    w = std::min(w, side);
    h = std::min(h, side);
    cx = std::clamp(cx, 0.5 * w, side - 0.5 * w);
    cy = std::clamp(cy, 0.5 * h, side - 0.5 * h);
  }
};

// Position reflected off the [lo, hi] walls; flips the velocity on contact.
inline void reflect(double& pos, double& vel, double lo, double hi) {
  if (pos < lo) {
    pos = 2 * lo - pos;
    vel = std::abs(vel);
  } else if (pos > hi) {
    pos = 2 * hi - pos;
    vel = -std::abs(vel);
  }
  pos = std::clamp(pos, lo, hi);
}

inline double occupancy_of(const std::vector<MovingBox>& boxes, double side) {
  std::vector<Rect> rs;
  for (const auto& b : boxes) rs.push_back(b.rect(side));
  return union_area(rs) / (side * side);
}

}  // namespace detail

/// Synthetic ground-truth videos: boxes sized so their union covers the
/// video's occupancy target on the first frame, then moved at constant
/// velocity plus jitter and reflected at the frame border.
inline std::vector<Video> gen_synthetic(const SyntheticParams& p) {
  p.validate();
  const double side = p.frame_side;
  std::vector<Video> out;
  out.reserve(p.videos);
  const double phase = CounterRng(make_key(p.seed, ~std::uint64_t{0})).uniform();
  auto target_at = [&](double scale, double q) {
    return std::clamp(scale * std::pow(-std::log1p(-q), 1.0 / p.occupancy_shape), 1e-3, 0.9);
  };
  // Fit the scale so the mean survives the clamp at the crowded end.
  double scale = p.occupancy_target / std::tgamma(1.0 + 1.0 / p.occupancy_shape);
  for (int iter = 0; iter < 30; ++iter) {
    double mean = 0.0;
    for (int i = 0; i < 4096; ++i) mean += target_at(scale, (i + 0.5) / 4096.0);
    scale *= p.occupancy_target / (mean / 4096.0);
  }
  for (std::size_t v = 0; v < p.videos; ++v) {
    CounterRng rng(make_key(p.seed, v));
    const int n = static_cast<int>(rng.integer(p.min_objects, p.max_objects));
    const double q = std::fmod(phase + 0.6180339887498949 * static_cast<double>(v), 1.0);
    const double target = target_at(scale, q);

    std::vector<detail::MovingBox> boxes(n);
    std::vector<double> weight(n);
    double weight_sum = 0.0;
    for (int j = 0; j < n; ++j) {
      weight[j] = rng.uniform(0.5, 1.5);
      weight_sum += weight[j];
    }
    const double log_lo = std::log(p.aspect_min);
    const double log_hi = std::log(p.aspect_max);
    for (int j = 0; j < n; ++j) {
      auto& b = boxes[j];
      b.class_id = static_cast<int>(rng.integer(0, p.num_classes - 1));
      const double a = std::exp(rng.uniform(log_lo, log_hi));
      const double box_area = target * side * side * weight[j] / weight_sum;
      b.w = std::min(side, std::sqrt(box_area * a));
      b.h = std::min(side, std::sqrt(box_area / a));
      // Prefer a position clear of the boxes placed so far.
      for (int attempt = 0; attempt < 50; ++attempt) {
        b.cx = rng.uniform(0.5 * b.w, side - 0.5 * b.w);
        b.cy = rng.uniform(0.5 * b.h, side - 0.5 * b.h);
        bool clear = true;
        for (int k = 0; k < j && clear; ++k) clear = !intersects(b.rect(side), boxes[k].rect(side));
        if (clear) break;
      }
      b.vx = rng.uniform(-p.max_speed, p.max_speed);
      b.vy = rng.uniform(-p.max_speed, p.max_speed);
    }
    for (int iter = 0; iter < 40; ++iter) {
      const double occ = detail::occupancy_of(boxes, side);
      if (std::abs(occ - target) < 1e-6 || occ <= 0.0) break;
      const double f = std::sqrt(target / occ);
      for (auto& b : boxes) {
        b.w *= f;
        b.h *= f;
        b.keep_inside(side);
      }
    }

    Video video;
    video.name = "vid" + std::string(4 - std::min<std::size_t>(4, std::to_string(v).size()), '0') +
                 std::to_string(v);
    video.frames.reserve(p.frames_per_video);
    for (std::size_t t = 0; t < p.frames_per_video; ++t) {
      GroundTruthFrame f;
      f.frame_id = static_cast<long>(t);
      for (const auto& b : boxes) f.objects.push_back({b.class_id, b.rect(side)});
      video.frames.push_back(std::move(f));
      for (auto& b : boxes) {
        b.cx += b.vx + p.jitter_sigma * rng.normal();
        b.cy += b.vy + p.jitter_sigma * rng.normal();
        detail::reflect(b.cx, b.vx, 0.5 * b.w, side - 0.5 * b.w);
        detail::reflect(b.cy, b.vy, 0.5 * b.h, side - 0.5 * b.h);
      }
    }
    out.push_back(std::move(video));
  }
  return out;
}

}  // namespace pad
