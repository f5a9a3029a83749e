#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pad {

/// Axis-aligned rectangle in pixel units of a working frame.
/// Origin is top-left, x grows rightward and y downward.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  bool valid() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min < x_max && y_min < y_max;
  }

  bool contains(const Rect& o) const {
    return x_min <= o.x_min && y_min <= o.y_min && o.x_max <= x_max && o.y_max <= y_max;
  }

  bool operator==(const Rect&) const = default;
};

inline Rect make_rect(double x_min, double y_min, double x_max, double y_max) {
  Rect r{x_min, y_min, x_max, y_max};
  if (!r.valid()) {
    throw std::invalid_argument("rect must be finite with positive width and height");
  }
  return r;
}

/// Square working frame.
struct FrameSpec {
  double side = 0.0;

  explicit FrameSpec(double s = 300.0) : side(s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("frame side must be positive");
    }
  }

  Rect bounds() const { return Rect{0.0, 0.0, side, side}; }
  double area() const { return side * side; }

  bool operator==(const FrameSpec&) const = default;
};

inline double area(const Rect& r) { return r.width() * r.height(); }

// Zero-area contact (shared edge or corner) is not an intersection.
inline std::optional<Rect> intersection(const Rect& a, const Rect& b) {
  Rect r{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min),
         std::min(a.x_max, b.x_max), std::min(a.y_max, b.y_max)};
  if (r.x_min < r.x_max && r.y_min < r.y_max) return r;
  return std::nullopt;
}

inline bool intersects(const Rect& a, const Rect& b) {
  return std::max(a.x_min, b.x_min) < std::min(a.x_max, b.x_max) &&
         std::max(a.y_min, b.y_min) < std::min(a.y_max, b.y_max);
}

inline double iou(const Rect& a, const Rect& b) {
  auto inter = intersection(a, b);
  if (!inter) return 0.0;
  double i = area(*inter);
  double u = area(a) + area(b) - i;
  return std::clamp(i / u, 0.0, 1.0);
}

inline Rect enclosing(std::span<const Rect> rs) {
  if (rs.empty()) throw std::invalid_argument("enclosing() of an empty rect list");
  Rect out = rs.front();
  for (const Rect& r : rs.subspan(1)) {
    out.x_min = std::min(out.x_min, r.x_min);
    out.y_min = std::min(out.y_min, r.y_min);
    out.x_max = std::max(out.x_max, r.x_max);
    out.y_max = std::max(out.y_max, r.y_max);
  }
  return out;
}

/// Clips r to bounds; absent when nothing of positive area remains.
inline std::optional<Rect> clip(const Rect& r, const Rect& bounds) { return intersection(r, bounds); }

/// Exact area of the union of rs.
///
/// Sweeps the compressed x-coordinates; for every slab between two
/// consecutive x events the covered y-length is found by merging the
/// y-intervals of the rects that span the slab.
inline double union_area(std::span<const Rect> rs) {
  if (rs.empty()) return 0.0;

  std::vector<double> xs;
  xs.reserve(rs.size() * 2);
  for (const Rect& r : rs) {
    xs.push_back(r.x_min);
    xs.push_back(r.x_max);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<std::pair<double, double>> spans;
  spans.reserve(rs.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double x0 = xs[i];
    const double x1 = xs[i + 1];
    spans.clear();
    for (const Rect& r : rs) {
      if (r.x_min <= x0 && x1 <= r.x_max) spans.emplace_back(r.y_min, r.y_max);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = spans.front().first;
    double hi = spans.front().second;
    for (const auto& [a, b] : spans) {
      if (a > hi) {
        covered += hi - lo;
        lo = a;
        hi = b;
      } else {
        hi = std::max(hi, b);
      }
    }
    covered += hi - lo;
    total += covered * (x1 - x0);
  }
  return total;
}

inline double union_area(std::initializer_list<Rect> rs) {
  return union_area(std::span<const Rect>(rs.begin(), rs.size()));
}

}  // namespace pad
