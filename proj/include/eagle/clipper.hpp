#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eagle/types.hpp"

namespace eagle {

struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;
  double length() const { return end_s - start_s; }
};

/// Consecutive non-overlapping windows covering [0, duration). The final
/// partial window is kept iff its length >= clip_len / 2.
std::vector<TimeWindow> segment(double duration_s, double clip_len = 16.0);

/// Frame sample times start_s, start_s + 1/fps, ... strictly inside
/// [start_s, end_s). Count equals ceil(length * fps).
std::vector<double> frame_times(const TimeWindow& window, double fps = 1.0);

struct Clip {
  std::string video_id;
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<double> frame_times;
  double length() const { return end_s - start_s; }
  TimeWindow window() const { return {start_s, end_s}; }
};

/// Segments one video and fills frame times; clips sorted by start_s.
std::vector<Clip> make_clips(const VideoManifest& manifest,
                             double clip_len = 16.0, double fps = 1.0);

/// Shifts a video-global interval into clip-relative coordinates,
/// clamping to [0, clip length]. Throws NoOverlap when the interval does
/// not intersect the clip.
std::pair<double, double> rebase(double start_s, double end_s,
                                 const TimeWindow& clip);

/// Temporal context for one clip. `past` and `future` keep video-global
/// intervals; `current` is rebased to clip-relative time. An action
/// intersecting the clip appears only in `current`; ties at the clip
/// boundary go to past/future.
struct ClipContext {
  Clip clip;
  double ctx_s = 30.0;
  std::vector<ActionAnnotation> past;
  std::vector<ActionAnnotation> current;
  std::vector<ActionAnnotation> future;
};

ClipContext context_window(const Clip& clip,
                           const std::vector<ActionAnnotation>& actions,
                           double ctx_s = 30.0);

}  // namespace eagle
