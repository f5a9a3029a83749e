#pragma once

#include <cstddef>
#include <variant>

#include "pad/packing.hpp"

namespace pad {

// Frame decisions.
struct Anchor {
  bool operator==(const Anchor&) const = default;
};
struct Packed {
  PackPlan plan;
  bool operator==(const Packed&) const = default;
};
struct FallbackFull {
  bool operator==(const FallbackFull&) const = default;
};
struct Skipped {
  bool operator==(const Skipped&) const = default;
};

using FrameDecision = std::variant<Anchor, Packed, FallbackFull, Skipped>;

enum class DecisionKind { Anchor = 0, Packed = 1, FallbackFull = 2, Skipped = 3 };
inline constexpr std::size_t kDecisionKinds = 4;

inline DecisionKind kind(const FrameDecision& d) { return static_cast<DecisionKind>(d.index()); }

inline const char* to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::Anchor: return "anchor";
    case DecisionKind::Packed: return "packed";
    case DecisionKind::FallbackFull: return "fallback_full";
    case DecisionKind::Skipped: return "skipped";
  }
  return "?";
}

}  // namespace pad
