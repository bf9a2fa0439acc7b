#pragma once

#include "staypoint/detector.hpp"
#include "staypoint/trajectory_io.hpp"

#include <vector>

namespace staypoint {

/// Distance/time thresholds of the classic anchor-and-extend detector.
struct ThresholdConfig {
    double distance_m = 200.0;
    double time_min = 20.0;

    /// Throws std::invalid_argument unless both are positive.
    void validate() const;
};

/// Anchor-and-extend stay detection. From anchor sample a the window grows
/// while each following sample lies within `distance_m` of a. If the window
/// spans at least `time_min`, it becomes a stay (mean coordinate, confidence
/// 100) and the next anchor is the first sample after it; otherwise the
/// anchor moves to a + 1. Indices in the records are sample indices.
std::vector<StayPoint> threshold_detect(const Trajectory& trajectory, const ThresholdConfig& cfg);

} // namespace staypoint
