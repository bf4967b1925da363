#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "eagle/types.hpp"

namespace eagle {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class BoxSpace { Pixel, Normalized };

/// Corner-form box. Pixel-space boxes carry the frame size used for
/// normalization; proposals may spill past the frame and are clamped
/// after dividing by it.
struct BoundingBox {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  BoxSpace space = BoxSpace::Normalized;
  int frame_width = 0;
  int frame_height = 0;
};

/// Midpoint of the box in normalized [0,1]^2 coordinates. Throws
/// ArgumentRange on a degenerate box or a Normalized box outside [0,1].
Point2 center_point(const BoundingBox& box);

/// Piecewise-linear evaluation at time t. Exact at knots. Throws
/// EmptyTrajectory on zero points and OutOfRange when t leaves
/// [first.t, last.t].
Point2 lerp(const ObjectTrajectory& traj, double t);

/// One interpolated point per requested time inside the knot span; times
/// outside the span are omitted. `times` must be sorted ascending.
std::vector<TrajectoryPoint> subsample(const ObjectTrajectory& traj,
                                       const std::vector<double>& times);

struct RepairReport {
  std::size_t n_points = 0;
  std::size_t n_replaced = 0;
  // Maximal runs of replaced points, inclusive index pairs, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> replaced_segments;
  double max_deviation = 0.0;
};

struct RepairResult {
  ObjectTrajectory trajectory;
  RepairReport report;
};

/// Replaces predicted points that deviate from the reference by more
/// than tau (Euclidean, normalized space) with the reference value at
/// that time. Predicted times outside the reference span count as faulty
/// and take the span-clamped reference value. Idempotent.
RepairResult repair(const ObjectTrajectory& predicted,
                    const ObjectTrajectory& truth, double tau = 0.1);

}  // namespace eagle
