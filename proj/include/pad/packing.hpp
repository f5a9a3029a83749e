#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pad/geometry.hpp"
#include "pad/union_find.hpp"

namespace pad {

enum class Axis { Horizontal, Vertical };
enum class PackMethod { Greedy, Naive };

inline const char* to_string(Axis a) { return a == Axis::Horizontal ? "horizontal" : "vertical"; }
inline const char* to_string(PackMethod m) { return m == PackMethod::Greedy ? "greedy" : "naive"; }

/// Position of a box in the packed frame: `line` is the column (or row, for
/// a vertical layout) and `order` the position inside that line, counted
/// from the top (or the left).
struct GridCell {
  std::size_t line = 0;
  std::size_t order = 0;
  bool operator==(const GridCell&) const = default;
};

struct Layout {
  std::size_t slot_count = 0;
  /// Horizontal: boxes sit in columns and are widened first.
  /// Vertical: boxes sit in rows and are heightened first.
  Axis primary_axis = Axis::Horizontal;
  /// assignment[i] is the cell of input box i.
  std::vector<GridCell> assignment;

  /// Box indices grouped per line, each line ordered by `order`.
  std::vector<std::vector<std::size_t>> lines() const {
    std::size_t n_lines = 0;
    for (const GridCell& c : assignment) n_lines = std::max(n_lines, c.line + 1);
    std::vector<std::vector<std::size_t>> out(n_lines);
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i].line].push_back(i);
    for (auto& line : out) {
      std::sort(line.begin(), line.end(), [&](std::size_t a, std::size_t b) {
        return assignment[a].order < assignment[b].order;
      });
    }
    return out;
  }

  bool operator==(const Layout&) const = default;
};

struct PackSlot {
  Rect src;  ///< region of the full-size frame
  Rect dst;  ///< region of the reduced frame
  double scale_x = 1.0;
  double scale_y = 1.0;

  bool operator==(const PackSlot&) const = default;
};

struct PackPlan {
  std::vector<PackSlot> slots;
  FrameSpec dest;
  PackMethod method = PackMethod::Greedy;
  /// Set for greedy plans; expansion needs the line structure.
  std::optional<Layout> layout;

  bool operator==(const PackPlan&) const = default;
};

/// Full-frame coordinates -> reduced-frame coordinates.
inline Rect to_dest(const PackSlot& s, const Rect& r) {
  return Rect{s.dst.x_min + (r.x_min - s.src.x_min) * s.scale_x,
              s.dst.y_min + (r.y_min - s.src.y_min) * s.scale_y,
              s.dst.x_min + (r.x_max - s.src.x_min) * s.scale_x,
              s.dst.y_min + (r.y_max - s.src.y_min) * s.scale_y};
}

/// Reduced-frame coordinates -> full-frame coordinates.
inline Rect to_source(const PackSlot& s, const Rect& r) {
  return Rect{s.src.x_min + (r.x_min - s.dst.x_min) / s.scale_x,
              s.src.y_min + (r.y_min - s.dst.y_min) / s.scale_y,
              s.src.x_min + (r.x_max - s.dst.x_min) / s.scale_x,
              s.src.y_min + (r.y_max - s.dst.y_min) / s.scale_y};
}

namespace detail {

inline double lo(const Rect& r, int axis) { return axis == 0 ? r.x_min : r.y_min; }
inline double hi(const Rect& r, int axis) { return axis == 0 ? r.x_max : r.y_max; }
inline double extent(const Rect& r, int axis) { return hi(r, axis) - lo(r, axis); }
inline void set_lo(Rect& r, int axis, double v) { (axis == 0 ? r.x_min : r.y_min) = v; }
inline void set_hi(Rect& r, int axis, double v) { (axis == 0 ? r.x_max : r.y_max) = v; }

// Axis along which lines are laid out (x for columns) and the axis along
// which members of a line are stacked.
inline int across_axis(Axis a) { return a == Axis::Horizontal ? 0 : 1; }
inline int along_axis(Axis a) { return a == Axis::Horizontal ? 1 : 0; }

// Flush placement at scale 1: lines from the origin outward, members of a
// line stacked from the origin. Returns the dst rect of every box.
inline std::vector<Rect> place_flush(std::span<const Rect> boxes, const Layout& layout) {
  const int across = across_axis(layout.primary_axis);
  const int along = along_axis(layout.primary_axis);
  std::vector<Rect> dst(boxes.size());
  double line_start = 0.0;
  for (const auto& line : layout.lines()) {
    double line_extent = 0.0;
    for (std::size_t i : line) line_extent = std::max(line_extent, extent(boxes[i], across));
    double stack = 0.0;
    for (std::size_t i : line) {
      Rect d;
      set_lo(d, across, line_start);
      set_hi(d, across, line_start + extent(boxes[i], across));
      set_lo(d, along, stack);
      set_hi(d, along, stack + extent(boxes[i], along));
      stack = hi(d, along);
      dst[i] = d;
    }
    line_start += line_extent;
  }
  return dst;
}

inline std::vector<PackSlot> unit_slots(std::span<const Rect> src, std::span<const Rect> dst) {
  std::vector<PackSlot> slots;
  slots.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) slots.push_back(PackSlot{src[i], dst[i], 1.0, 1.0});
  return slots;
}

}  // namespace detail

/// Connected components of the "boxes intersect" graph. Each component
/// lists indices ascending; components are ordered by their first index.
inline std::vector<std::vector<std::size_t>> connected_components(std::span<const Rect> rs) {
  UnionFind uf(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (intersects(rs[i], rs[j])) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of_root(rs.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    std::size_t root = uf.find(i);
    if (group_of_root[root] == rs.size()) {
      group_of_root[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[root]].push_back(i);
  }
  return groups;
}

/// Replaces every connected component by its enclosing box, repeating until
/// no two boxes intersect.
inline std::vector<Rect> merge_overlaps(std::span<const Rect> rs) {
  std::vector<Rect> current(rs.begin(), rs.end());
  while (true) {
    auto groups = connected_components(current);
    if (groups.size() == current.size()) return current;
    std::vector<Rect> next;
    next.reserve(groups.size());
    std::vector<Rect> members;
    for (const auto& g : groups) {
      members.clear();
      for (std::size_t i : g) members.push_back(current[i]);
      next.push_back(enclosing(members));
    }
    current = std::move(next);
  }
}

/// Decides the line structure for 1-4 disjoint boxes.
///
/// When the largest dimension over all boxes is a height, boxes go into
/// columns ranked by height: the tallest alone in the first column for
/// three boxes, or the 1st and 3rd tallest in the first column and the 2nd
/// and 4th in the second for four. Otherwise the same cases are mirrored
/// into rows ranked by width. Ties keep input order.
inline Layout choose_layout(std::span<const Rect> boxes) {
  const std::size_t n = boxes.size();
  if (n == 0 || n > 4) throw std::invalid_argument("choose_layout() needs 1 to 4 boxes");

  double max_w = 0.0;
  double max_h = 0.0;
  for (const Rect& b : boxes) {
    max_w = std::max(max_w, b.width());
    max_h = std::max(max_h, b.height());
  }
  Layout layout;
  layout.slot_count = n;
  layout.primary_axis = max_h >= max_w ? Axis::Horizontal : Axis::Vertical;
  const int along = detail::along_axis(layout.primary_axis);

  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return detail::extent(boxes[a], along) > detail::extent(boxes[b], along);
  });

  static constexpr std::array<std::array<GridCell, 4>, 4> kCells{{
      {{{0, 0}}},
      {{{0, 0}, {1, 0}}},
      {{{0, 0}, {1, 0}, {1, 1}}},
      {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}},
  }};
  layout.assignment.resize(n);
  for (std::size_t r = 0; r < n; ++r) layout.assignment[rank[r]] = kCells[n - 1][r];
  return layout;
}

/// Places boxes at scale 1 in the layout; absent when they do not fit in a
/// dest frame of side s2.
inline std::optional<PackPlan> place_and_fit(std::span<const Rect> boxes, const Layout& layout,
                                             const FrameSpec& dest) {
  if (boxes.size() != layout.slot_count || layout.assignment.size() != boxes.size()) {
    throw std::invalid_argument("layout does not match box count");
  }
  const int across = detail::across_axis(layout.primary_axis);
  const int along = detail::along_axis(layout.primary_axis);
  double used_across = 0.0;
  for (const auto& line : layout.lines()) {
    double line_extent = 0.0;
    double stacked = 0.0;
    for (std::size_t i : line) {
      line_extent = std::max(line_extent, detail::extent(boxes[i], across));
      stacked += detail::extent(boxes[i], along);
    }
    if (stacked > dest.side) return std::nullopt;
    used_across += line_extent;
  }
  if (used_across > dest.side) return std::nullopt;

  auto dst = detail::place_flush(boxes, layout);
  return PackPlan{detail::unit_slots(boxes, dst), dest, PackMethod::Greedy, layout};
}

namespace detail {

inline constexpr double kMinGrowth = 1e-9;

// Room left for slot i to grow along `axis` before the dest frame is full.
inline double dest_headroom(std::span<const Rect> src, const Layout& layout,
                            const std::vector<std::vector<std::size_t>>& lines, std::size_t i,
                            int axis, double dest_side) {
  const int across = across_axis(layout.primary_axis);
  const std::size_t my_line = layout.assignment[i].line;
  if (axis == across) {
    double total = 0.0;
    double mine = 0.0;
    for (std::size_t l = 0; l < lines.size(); ++l) {
      double e = 0.0;
      for (std::size_t j : lines[l]) e = std::max(e, extent(src[j], axis));
      total += e;
      if (l == my_line) mine = e;
    }
    return (dest_side - total) + (mine - extent(src[i], axis));
  }
  double stacked = 0.0;
  for (std::size_t j : lines[my_line]) stacked += extent(src[j], axis);
  return dest_side - stacked;
}

// Grows src[i] by up to `amount` along `axis`, half on each side. A side
// blocked by the frame edge or by another slot passes its share to the
// opposite side. Returns the growth actually applied.
inline double grow_symmetric(std::vector<Rect>& src, std::size_t i, int axis, double amount,
                             double frame_side) {
  const int perp = 1 - axis;
  Rect& me = src[i];
  double lo_limit = 0.0;
  double hi_limit = frame_side;
  for (std::size_t j = 0; j < src.size(); ++j) {
    if (j == i) continue;
    const Rect& o = src[j];
    const bool perp_overlap = std::max(lo(o, perp), lo(me, perp)) < std::min(hi(o, perp), hi(me, perp));
    if (!perp_overlap) continue;
    if (hi(o, axis) <= lo(me, axis)) {
      lo_limit = std::max(lo_limit, hi(o, axis));
    } else if (lo(o, axis) >= hi(me, axis)) {
      hi_limit = std::min(hi_limit, lo(o, axis));
    }
  }
  const double lo_gap = std::max(0.0, lo(me, axis) - lo_limit);
  const double hi_gap = std::max(0.0, hi_limit - hi(me, axis));

  double take_lo = std::min(0.5 * amount, lo_gap);
  const double take_hi = std::min(amount - take_lo, hi_gap);
  take_lo = std::min(amount - take_hi, lo_gap);

  if (take_lo > 0.0) {
    set_lo(me, axis, take_lo == lo_gap ? lo_limit : std::max(lo_limit, lo(me, axis) - take_lo));
  }
  if (take_hi > 0.0) {
    set_hi(me, axis, take_hi == hi_gap ? hi_limit : std::min(hi_limit, hi(me, axis) + take_hi));
  }
  return take_lo + take_hi;
}

}  // namespace detail

/// Grows every slot's source region to give the detector background
/// context: first along the layout's primary axis, then the other, all
/// slots advancing in 1-unit steps per round. A slot stops in an axis once
/// the dest frame is full in that axis for its line, it would run into
/// another slot's source region, or both frame edges block it.
inline PackPlan expand_greedy(const PackPlan& plan, const FrameSpec& source, double step = 1.0) {
  if (!plan.layout) throw std::invalid_argument("expand_greedy() needs a plan with a layout");
  const Layout& layout = *plan.layout;
  const auto lines = layout.lines();
  const double dest_side = plan.dest.side;

  std::vector<Rect> src;
  src.reserve(plan.slots.size());
  for (const PackSlot& s : plan.slots) src.push_back(s.src);

  for (int axis : {detail::across_axis(layout.primary_axis), detail::along_axis(layout.primary_axis)}) {
    std::vector<bool> frozen(src.size(), false);
    std::size_t active = src.size();
    while (active > 0) {
      for (std::size_t i = 0; i < src.size(); ++i) {
        if (frozen[i]) continue;
        double room = detail::dest_headroom(src, layout, lines, i, axis, dest_side);
        double grown = 0.0;
        if (room > detail::kMinGrowth) {
          grown = detail::grow_symmetric(src, i, axis, std::min(step, room), source.side);
        }
        if (grown <= detail::kMinGrowth) {
          frozen[i] = true;
          --active;
        }
      }
    }
  }

  auto dst = detail::place_flush(src, layout);
  PackPlan out = plan;
  out.slots = detail::unit_slots(src, dst);
  return out;
}

/// Greedy ROI packing into a dest frame; absent when the ROIs cannot be
/// packed and the frame must be processed at full size.
inline std::optional<PackPlan> pack(std::span<const Rect> rois, const FrameSpec& source,
                                    const FrameSpec& dest) {
  if (dest.side > source.side) throw std::invalid_argument("reduced frame larger than full frame");
  if (rois.empty()) return std::nullopt;
  auto merged = merge_overlaps(rois);
  if (merged.size() > 4) return std::nullopt;
  auto layout = choose_layout(merged);
  auto plan = place_and_fit(merged, layout, dest);
  if (!plan) return std::nullopt;
  return expand_greedy(*plan, source);
}

/// Fixed-grid baseline: every ROI is enlarged 1.2x about its center and
/// rescaled into a grid cell (full frame, two columns, or quadrants).
inline std::optional<PackPlan> pack_naive(std::span<const Rect> rois, const FrameSpec& source,
                                          const FrameSpec& dest, double enlarge = 1.2) {
  const std::size_t n = rois.size();
  if (n == 0 || n > 4) return std::nullopt;
  const double s = dest.side;
  const double h = 0.5 * s;
  std::vector<Rect> cells;
  if (n == 1) {
    cells = {Rect{0, 0, s, s}};
  } else if (n == 2) {
    cells = {Rect{0, 0, h, s}, Rect{h, 0, s, s}};
  } else {
    cells = {Rect{0, 0, h, h}, Rect{h, 0, s, h}, Rect{0, h, h, s}, Rect{h, h, s, s}};
  }

  PackPlan plan{{}, dest, PackMethod::Naive, std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    const Rect& r = rois[i];
    const double hw = 0.5 * enlarge * r.width();
    const double hh = 0.5 * enlarge * r.height();
    Rect grown{r.center_x() - hw, r.center_y() - hh, r.center_x() + hw, r.center_y() + hh};
    Rect src = clip(grown, source.bounds()).value_or(r);
    const Rect& dst = cells[i];
    plan.slots.push_back(PackSlot{src, dst, dst.width() / src.width(), dst.height() / src.height()});
  }
  return plan;
}

/// Lists every violated plan invariant (empty when the plan is sound).
/// `rois` are the regions the plan was built from; pass an empty span to
/// skip the containment check. Frame containment allows `tol` of rounding.
inline std::vector<std::string> plan_violations(const PackPlan& plan, const FrameSpec& source,
                                                std::span<const Rect> rois, double tol = 1e-9) {
  std::vector<std::string> out;
  const auto& slots = plan.slots;
  if (slots.empty() || slots.size() > 4) out.push_back("slot count outside 1-4");
  const Rect dest_box{-tol, -tol, plan.dest.side + tol, plan.dest.side + tol};
  const Rect src_box{-tol, -tol, source.side + tol, source.side + tol};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const PackSlot& s = slots[i];
    const std::string tag = "slot " + std::to_string(i) + ": ";
    if (!s.src.valid() || !s.dst.valid()) out.push_back(tag + "degenerate rect");
    if (!dest_box.contains(s.dst)) out.push_back(tag + "dst outside dest frame");
    if (!src_box.contains(s.src)) out.push_back(tag + "src outside source frame");
    if (!(s.scale_x > 0.0) || !(s.scale_y > 0.0)) out.push_back(tag + "non-positive scale");
    if (std::abs(s.dst.width() - s.src.width() * s.scale_x) > tol ||
        std::abs(s.dst.height() - s.src.height() * s.scale_y) > tol) {
      out.push_back(tag + "dst size does not match src size times scale");
    }
    if (plan.method == PackMethod::Greedy && (s.scale_x != 1.0 || s.scale_y != 1.0)) {
      out.push_back(tag + "greedy slot with scale other than 1");
    }
    for (std::size_t j = i + 1; j < slots.size(); ++j) {
      if (intersects(s.dst, slots[j].dst)) out.push_back(tag + "dst overlaps slot " + std::to_string(j));
      if (plan.method == PackMethod::Greedy && intersects(s.src, slots[j].src)) {
        out.push_back(tag + "src overlaps slot " + std::to_string(j));
      }
    }
  }
  for (std::size_t r = 0; r < rois.size(); ++r) {
    std::size_t holders = 0;
    for (const PackSlot& s : slots) holders += s.src.contains(rois[r]) ? 1 : 0;
    if (holders != 1) {
      out.push_back("roi " + std::to_string(r) + " contained in " + std::to_string(holders) + " slots");
    }
  }
  return out;
}

}  // namespace pad
