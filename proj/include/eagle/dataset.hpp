#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eagle/promptgen.hpp"
#include "eagle/trajectory.hpp"
#include "eagle/types.hpp"

namespace eagle {

enum class Ablation { Full, NoTime, NoObj, DescOnly };

const char* to_string(Ablation a);
Ablation ablation_from_string(std::string_view s);

struct ClipSpan {
  double start_s = 0.0;
  double end_s = 0.0;
};

/// One unified (VIDEO, INSTRUCTION, RESPONSE) record.
struct InstructionSample {
  std::string sample_id;
  Source source = Source::EpicKitchens;
  std::string video_id;
  ClipSpan clip;
  ResponseType task_type = ResponseType::Description;
  std::string instruction;
  std::string response;
  Ablation ablation = Ablation::Full;
};

// --- generated-text parsing ---------------------------------------------

struct GeneratedPair {
  std::string question;
  std::string answer;
  ResponseType task_type = ResponseType::Description;
};

struct LayoutIssue {
  std::size_t byte_offset = 0;
  std::string message;
};

struct GeneratedParse {
  std::vector<GeneratedPair> pairs;
  std::vector<LayoutIssue> warnings;
};

/// Reads "Response type:" / "Question:" / "Answer:" blocks. Malformed
/// blocks are dropped and reported in `warnings` with their byte offset;
/// well-formed blocks around them are kept. An unknown type header falls
/// back to Description with a warning.
GeneratedParse parse_generated(std::string_view text);

// --- coordinate repair ----------------------------------------------------

struct SampleRepairOutcome {
  InstructionSample sample;
  RepairReport report;       // aggregated over all repaired lists
  std::size_t n_lists = 0;   // coordinate lists found in the response
  std::size_t n_unattributed = 0;  // lists whose label has no reference
};

/// Finds embedded 'LABEL': [[t, x, y], ...] lists in the response,
/// repairs each against the same-label reference trajectory (shifted to
/// clip-relative time), and re-embeds the canonical rendering. Lists
/// with no matching reference label are left untouched and counted.
SampleRepairOutcome repair_sample(const InstructionSample& sample,
                                  const std::vector<ObjectTrajectory>& truth,
                                  double tau = 0.1);

// --- ablation variants ------------------------------------------------------

/// Removes every <a,b> time-boundary token (plus one following space).
std::string strip_time_tokens(std::string_view text);
/// Removes every [t, x, y] triple and the list brackets around runs of
/// them (plus one following space).
std::string strip_coordinate_lists(std::string_view text);

/// Token-stripping ablation over instruction and response; idempotent,
/// and NoTime/NoObj commute. DescOnly applies both.
InstructionSample apply_ablation(const InstructionSample& sample, Ablation variant);

// --- statistics ---------------------------------------------------------------

struct StatsCell {
  std::size_t n_clips = 0;
  std::size_t n_samples = 0;
  double avg_actions_per_clip = 0.0;
  double avg_samples_per_clip = 0.0;
};

struct DatasetStats {
  std::map<std::pair<Source, Split>, StatsCell> cells;
  StatsCell total;
  bool empty = true;
};

/// Per source x split counts plus a pooled total row. A clip is a
/// distinct (video_id, clip span) among samples; its action count is the
/// number of manifest actions intersecting the span. Throws
/// DanglingReference for samples whose video is not in `manifests`.
DatasetStats compute_stats(const std::vector<VideoManifest>& manifests,
                           const std::vector<InstructionSample>& samples);

std::string stats_to_json(const DatasetStats& stats);
std::string render_stats_table(const DatasetStats& stats);

// --- dataset files ------------------------------------------------------------

std::string sample_to_line(const InstructionSample& sample);
InstructionSample sample_from_line(std::string_view line, std::size_t line_no);

/// Line-delimited records, one JSON object per sample, schema_version on
/// every line. read(write(x)) == x.
void write_samples(const std::filesystem::path& path,
                   const std::vector<InstructionSample>& samples);
std::vector<InstructionSample> read_samples(const std::filesystem::path& path);

}  // namespace eagle
