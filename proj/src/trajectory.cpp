#include "eagle/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "eagle/errors.hpp"
#include "eagle/numfmt.hpp"

namespace eagle {

Point2 center_point(const BoundingBox& box) {
  if (box.x1 >= box.x2 || box.y1 >= box.y2) {
    throw Error(ErrorKind::ArgumentRange, "degenerate box");
  }
  double cx = (box.x1 + box.x2) / 2.0;
  double cy = (box.y1 + box.y2) / 2.0;
  if (box.space == BoxSpace::Pixel) {
    if (box.frame_width <= 0 || box.frame_height <= 0) {
      throw Error(ErrorKind::ArgumentRange, "pixel box needs a frame size");
    }
    cx /= static_cast<double>(box.frame_width);
    cy /= static_cast<double>(box.frame_height);
    cx = std::clamp(cx, 0.0, 1.0);
    cy = std::clamp(cy, 0.0, 1.0);
  } else if (box.x1 < 0.0 || box.x2 > 1.0 || box.y1 < 0.0 || box.y2 > 1.0) {
    throw Error(ErrorKind::ArgumentRange, "normalized box outside [0,1]");
  }
  return {cx, cy};
}

Point2 lerp(const ObjectTrajectory& traj, double t) {
  if (traj.points.empty()) {
    throw Error(ErrorKind::EmptyTrajectory, "'" + traj.label + "' has no points");
  }
  const auto& pts = traj.points;
  if (t < pts.front().t || t > pts.back().t) {
    throw Error(ErrorKind::OutOfRange,
                "t=" + format_number(t) + " outside [" +
                    format_number(pts.front().t) + ", " +
                    format_number(pts.back().t) + "]");
  }
  if (t == pts.back().t) return {pts.back().x, pts.back().y};
  // First knot strictly greater than t; the segment starts one before.
  auto hi = std::upper_bound(
      pts.begin(), pts.end(), t,
      [](double value, const TrajectoryPoint& p) { return value < p.t; });
  const auto& b = *hi;
  const auto& a = *(hi - 1);
  const double alpha = (t - a.t) / (b.t - a.t);
  return {std::lerp(a.x, b.x, alpha), std::lerp(a.y, b.y, alpha)};
}

std::vector<TrajectoryPoint> subsample(const ObjectTrajectory& traj,
                                       const std::vector<double>& times) {
  std::vector<TrajectoryPoint> out;
  if (traj.points.empty()) return out;
  const double lo = traj.points.front().t;
  const double hi = traj.points.back().t;
  for (double t : times) {
    if (t < lo || t > hi) continue;
    const Point2 p = lerp(traj, t);
    out.push_back({t, p.x, p.y});
  }
  return out;
}

namespace {

// Reference value with the query clamped to the knot span, so repair is
// total over out-of-span predictions.
Point2 eval_clamped(const ObjectTrajectory& truth, double t) {
  const double lo = truth.points.front().t;
  const double hi = truth.points.back().t;
  return lerp(truth, std::clamp(t, lo, hi));
}

double distance(const Point2& a, double x, double y) {
  return std::hypot(a.x - x, a.y - y);
}

}  // namespace

RepairResult repair(const ObjectTrajectory& predicted,
                    const ObjectTrajectory& truth, double tau) {
  if (truth.points.empty()) {
    throw Error(ErrorKind::EmptyTrajectory,
                "reference '" + truth.label + "' has no points");
  }
  if (tau < 0.0) {
    throw Error(ErrorKind::ArgumentRange, "tau must be >= 0");
  }

  RepairResult result;
  result.trajectory = predicted;
  result.report.n_points = predicted.points.size();

  const double span_lo = truth.points.front().t;
  const double span_hi = truth.points.back().t;

  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t i = 0; i < predicted.points.size(); ++i) {
    auto& p = result.trajectory.points[i];
    const Point2 ref = eval_clamped(truth, p.t);
    const double dev = distance(ref, p.x, p.y);
    result.report.max_deviation = std::max(result.report.max_deviation, dev);
    const bool out_of_span = p.t < span_lo || p.t > span_hi;
    if (out_of_span || dev > tau) {
      p.x = ref.x;
      p.y = ref.y;
      ++result.report.n_replaced;
      if (!in_run) {
        run_start = i;
        in_run = true;
      }
    } else if (in_run) {
      result.report.replaced_segments.emplace_back(run_start, i - 1);
      in_run = false;
    }
  }
  if (in_run) {
    result.report.replaced_segments.emplace_back(run_start,
                                                 predicted.points.size() - 1);
  }
  return result;
}

}  // namespace eagle
