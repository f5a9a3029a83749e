#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "pad/decision.hpp"

namespace pad {

/// Compute cost in FLOP units. One unit per pixel of the processed frame
/// by default, so a pass costs the square of the frame side.
struct CostParams {
  double flops_full = 300.0 * 300.0;
  double flops_reduced = 150.0 * 150.0;
  /// Cost of one packing attempt, as a fraction of flops_full.
  double pack_overhead = 0.02;
  double skip_cost = 0.0;
  /// Whether a failed packing attempt is billed on top of the full pass.
  bool charge_fallback_overhead = true;

  static CostParams quadratic(double full_side, double reduced_side, double overhead = 0.02) {
    CostParams p;
    p.flops_full = full_side * full_side;
    p.flops_reduced = reduced_side * reduced_side;
    p.pack_overhead = overhead;
    p.validate();
    return p;
  }

  void validate() const {
    if (flops_full < 0 || flops_reduced < 0 || pack_overhead < 0 || skip_cost < 0) {
      throw std::invalid_argument("cost parameters must be non-negative");
    }
    if (flops_reduced > flops_full) throw std::invalid_argument("reduced pass cannot cost more than a full pass");
  }

  double overhead_cost() const { return pack_overhead * flops_full; }
};

inline double frame_overhead(DecisionKind k, const CostParams& p) {
  switch (k) {
    case DecisionKind::Packed: return p.overhead_cost();
    case DecisionKind::FallbackFull: return p.charge_fallback_overhead ? p.overhead_cost() : 0.0;
    default: return 0.0;
  }
}

inline double frame_cost(DecisionKind k, const CostParams& p) {
  switch (k) {
    case DecisionKind::Anchor: return p.flops_full;
    case DecisionKind::Packed: return frame_overhead(k, p) + p.flops_reduced;
    case DecisionKind::FallbackFull: return frame_overhead(k, p) + p.flops_full;
    case DecisionKind::Skipped: return p.skip_cost;
  }
  return 0.0;
}

inline double frame_cost(const FrameDecision& d, const CostParams& p) { return frame_cost(kind(d), p); }

struct CostReport {
  std::vector<double> per_frame;
  double total = 0.0;
  double baseline = 0.0;  ///< every frame at full size
  double overhead_total = 0.0;
  std::array<std::size_t, kDecisionKinds> counts{};
  std::array<double, kDecisionKinds> fractions{};
  double reduction = 0.0;  ///< 1 - total / baseline
  double speedup = 1.0;    ///< baseline / total
  double overhead_share = 0.0;

  std::size_t frames() const { return per_frame.size(); }
};

inline CostReport aggregate(std::span<const DecisionKind> decisions, const CostParams& p) {
  if (decisions.empty()) throw std::invalid_argument("aggregate() needs at least one frame");
  p.validate();
  CostReport r;
  r.per_frame.reserve(decisions.size());
  for (DecisionKind k : decisions) {
    const double c = frame_cost(k, p);
    r.per_frame.push_back(c);
    r.total += c;
    r.overhead_total += frame_overhead(k, p);
    ++r.counts[static_cast<std::size_t>(k)];
  }
  const double n = static_cast<double>(decisions.size());
  for (std::size_t k = 0; k < kDecisionKinds; ++k) r.fractions[k] = static_cast<double>(r.counts[k]) / n;
  r.baseline = n * p.flops_full;
  r.reduction = r.baseline > 0 ? 1.0 - r.total / r.baseline : 0.0;
  r.speedup = r.total > 0 ? r.baseline / r.total : std::numeric_limits<double>::infinity();
  r.overhead_share = r.total > 0 ? r.overhead_total / r.total : 0.0;
  return r;
}

inline CostReport aggregate(std::span<const FrameDecision> decisions, const CostParams& p) {
  std::vector<DecisionKind> kinds;
  kinds.reserve(decisions.size());
  for (const auto& d : decisions) kinds.push_back(kind(d));
  return aggregate(std::span<const DecisionKind>(kinds), p);
}

}  // namespace pad
