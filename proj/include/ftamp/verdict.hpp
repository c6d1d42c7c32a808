#pragma once

#include <cstddef>
#include <limits>
#include <optional>

namespace ftamp {

/// Outcome of a stability test. `margin` is a normalized distance to the
/// boundary: positive exactly when stable, 1 for an unloaded joint, and
/// -infinity when the load lies outside anything the joint can resist.
struct StabilityVerdict {
  bool stable = true;
  double margin = 1.0;
  std::optional<std::size_t> failing_joint;

  static StabilityVerdict from_margin(double m) { return {m > 0.0, m, std::nullopt}; }
  static StabilityVerdict unstable_sentinel() {
    return {false, -std::numeric_limits<double>::infinity(), std::nullopt};
  }
};

}  // namespace ftamp
