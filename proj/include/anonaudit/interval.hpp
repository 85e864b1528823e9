#pragma once

#include <cassert>
#include <cstdint>
#include <string>

namespace anonaudit {

using Value = std::int64_t;

/// Closed integer interval [lo, hi]. All domain arithmetic in the library is
/// done on closed intervals so that lengths and volumes are exact counts.
struct IntervalI {
  Value lo = 0;
  Value hi = 0;

  constexpr bool contains(Value v) const { return lo <= v && v <= hi; }
  constexpr Value length() const { return hi - lo + 1; }
  constexpr bool degenerate() const { return lo == hi; }

  friend constexpr bool operator==(const IntervalI&, const IntervalI&) = default;
  friend constexpr auto operator<=>(const IntervalI&, const IntervalI&) = default;
};

inline std::string to_string(const IntervalI& iv) {
  return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

}  // namespace anonaudit
