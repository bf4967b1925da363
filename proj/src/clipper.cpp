#include "eagle/clipper.hpp"

#include <algorithm>
#include <cmath>

#include "eagle/errors.hpp"
#include "eagle/numfmt.hpp"

namespace eagle {

std::vector<TimeWindow> segment(double duration_s, double clip_len) {
  if (duration_s <= 0.0) {
    throw Error(ErrorKind::ArgumentRange, "duration_s must be > 0");
  }
  if (clip_len <= 0.0) {
    throw Error(ErrorKind::ArgumentRange, "clip_len must be > 0");
  }
  // Boundaries computed as k * clip_len so consecutive windows share them
  // exactly.
  std::vector<TimeWindow> windows;
  long k = 0;
  while (static_cast<double>(k + 1) * clip_len <= duration_s) {
    windows.push_back({static_cast<double>(k) * clip_len,
                       static_cast<double>(k + 1) * clip_len});
    ++k;
  }
  const double tail_start = static_cast<double>(k) * clip_len;
  if (duration_s - tail_start >= clip_len / 2.0) {
    windows.push_back({tail_start, duration_s});
  }
  return windows;
}

std::vector<double> frame_times(const TimeWindow& window, double fps) {
  if (fps <= 0.0) {
    throw Error(ErrorKind::ArgumentRange, "fps must be > 0");
  }
  std::vector<double> times;
  for (long k = 0;; ++k) {
    const double t = window.start_s + static_cast<double>(k) / fps;
    if (t >= window.end_s) break;
    times.push_back(t);
  }
  return times;
}

std::vector<Clip> make_clips(const VideoManifest& manifest, double clip_len,
                             double fps) {
  std::vector<Clip> clips;
  for (const auto& w : segment(manifest.duration_s, clip_len)) {
    clips.push_back({manifest.video_id, w.start_s, w.end_s, frame_times(w, fps)});
  }
  return clips;
}

namespace {

bool intersects(const ActionAnnotation& a, const TimeWindow& clip) {
  return a.start_s < clip.end_s && a.end_s > clip.start_s;
}

void sort_by_start(std::vector<ActionAnnotation>& actions) {
  std::stable_sort(actions.begin(), actions.end(),
                   [](const ActionAnnotation& a, const ActionAnnotation& b) {
                     return a.start_s < b.start_s ||
                            (a.start_s == b.start_s && a.end_s < b.end_s);
                   });
}

}  // namespace

std::pair<double, double> rebase(double start_s, double end_s,
                                 const TimeWindow& clip) {
  if (!(start_s < clip.end_s && end_s > clip.start_s)) {
    throw Error(ErrorKind::NoOverlap,
                "[" + format_number(start_s) + ", " + format_number(end_s) +
                    "] misses clip [" + format_number(clip.start_s) + ", " +
                    format_number(clip.end_s) + ")");
  }
  return {std::max(start_s - clip.start_s, 0.0),
          std::min(end_s - clip.start_s, clip.length())};
}

ClipContext context_window(const Clip& clip,
                           const std::vector<ActionAnnotation>& actions,
                           double ctx_s) {
  ClipContext ctx;
  ctx.clip = clip;
  ctx.ctx_s = ctx_s;
  const TimeWindow window = clip.window();
  for (const auto& a : actions) {
    if (intersects(a, window)) {
      auto [s, e] = rebase(a.start_s, a.end_s, window);
      ctx.current.push_back({s, e, a.label, a.kind});
    } else if (a.end_s >= window.start_s - ctx_s && a.end_s <= window.start_s) {
      ctx.past.push_back(a);
    } else if (a.start_s >= window.end_s && a.start_s <= window.end_s + ctx_s) {
      ctx.future.push_back(a);
    }
  }
  sort_by_start(ctx.past);
  sort_by_start(ctx.current);
  sort_by_start(ctx.future);
  return ctx;
}

}  // namespace eagle
