#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eagle/types.hpp"

namespace eagle {

/// Row grammars for action annotations:
///   VerbNoun:  video_id,start_s,end_s,verb,noun
///   Narration: video_id,start_s,end_s,narration  (narration may contain commas)
enum class ActionRowFormat { VerbNoun, Narration };

ActionRowFormat action_row_format_from_string(std::string_view s);

struct ActionRow {
  std::string video_id;
  ActionAnnotation action;
};

/// Parses comma-separated rows, one action per line, order preserved.
/// Throws MalformedRow(line_no) on unparseable rows and IntervalError
/// when start >= end or start < 0.
std::vector<ActionRow> parse_action_rows(ActionRowFormat format, std::string_view raw);
std::vector<ActionAnnotation> parse_actions(ActionRowFormat format, std::string_view raw);

/// Parses line-delimited trajectories, one per line, grammar
///   'LABEL': [[t, x, y], ...]
/// Points are sorted ascending in t. Throws CoordinateRange when x or y
/// leaves [0,1], NonMonotonicTime on duplicate timestamps, and
/// MalformedRow on grammar violations.
std::vector<ObjectTrajectory> parse_trajectories(std::string_view raw);
ObjectTrajectory parse_trajectory_line(std::string_view line, std::size_t line_no = 1);

struct SynthConfig {
  std::uint64_t seed = 0;
  int n_videos = 1;
  int actions_min = 2;
  int actions_max = 4;
  // Per-source sampling weights, normalized internally.
  double weight_epic = 0.57;
  double weight_ego4d = 0.31;
  double weight_pta = 0.12;
  // PTA videos from this lab are held out as the validation split.
  std::string holdout_lab = "lab_d";
};

/// Deterministic synthetic manifest collection for desk-scale runs.
/// Identical config (including seed) yields an identical collection.
std::vector<VideoManifest> synthesize_manifests(const SynthConfig& config);

/// Sets PTA splits by lab: videos from `holdout_lab` go to Val, the rest
/// to Train. Non-PTA manifests are untouched.
void assign_pta_splits(std::vector<VideoManifest>& manifests,
                       const std::string& holdout_lab);

/// Checks every VideoManifest invariant plus collection-level video_id
/// uniqueness; throws on the first violation.
void validate_collection(const std::vector<VideoManifest>& manifests);

std::string manifests_to_json(const std::vector<VideoManifest>& manifests);
std::vector<VideoManifest> manifests_from_json(std::string_view text);
void write_manifests(const std::filesystem::path& path,
                     const std::vector<VideoManifest>& manifests);
std::vector<VideoManifest> read_manifests(const std::filesystem::path& path);

}  // namespace eagle
