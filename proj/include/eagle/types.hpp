#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eagle {

enum class Source { EpicKitchens, Ego4D, Pta };
enum class Split { Train, Val };
enum class ActionKind { VerbNoun, Narration, RecipeStep };

const char* to_string(Source s);
const char* to_string(Split s);
const char* to_string(ActionKind k);
Source source_from_string(std::string_view s);
Split split_from_string(std::string_view s);
ActionKind action_kind_from_string(std::string_view s);

/// A labeled temporal interval in video-global seconds.
struct ActionAnnotation {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string label;
  ActionKind kind = ActionKind::VerbNoun;
};

/// Kitchen-sourced timestamps render decimal-style ("5.0"); recipe steps
/// render bare integers ("12").
inline bool decimal_time_style(ActionKind kind) {
  return kind != ActionKind::RecipeStep;
}

struct RecipeStep {
  int index = 0;  // 1-based, contiguous
  std::string text;
};

struct StepInterval {
  int step_index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct RecipeAnnotation {
  std::string recipe_name;
  std::vector<RecipeStep> steps;
  std::vector<StepInterval> step_intervals;
};

struct TrajectoryPoint {
  double t = 0.0;  // seconds
  double x = 0.0;  // [0,1]
  double y = 0.0;  // [0,1]
};

/// Time-ordered center points of one tracked object. `decimal_times`
/// records how the source rendered timestamps so serialization can
/// round-trip both "5.0" and "12" styles.
struct ObjectTrajectory {
  std::string label;
  bool decimal_times = true;
  std::vector<TrajectoryPoint> points;
};

/// One source video plus all of its annotations. `lab_id` is set for PTA
/// recordings and drives the novel-environment split filter.
struct VideoManifest {
  std::string video_id;
  Source source = Source::EpicKitchens;
  Split split = Split::Train;
  double duration_s = 0.0;
  int frame_width = 0;
  int frame_height = 0;
  std::string lab_id;
  std::vector<ActionAnnotation> actions;
  std::vector<ObjectTrajectory> trajectories;
  std::optional<RecipeAnnotation> recipe;
};

}  // namespace eagle
