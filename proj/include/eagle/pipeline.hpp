#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eagle/clipper.hpp"
#include "eagle/dataset.hpp"
#include "eagle/gateway.hpp"
#include "eagle/ingest.hpp"
#include "eagle/judge.hpp"
#include "eagle/promptgen.hpp"

namespace eagle {

/// Pipeline constants; every field has a CLI flag.
struct RunConfig {
  double clip_len = 16.0;
  double ctx_s = 30.0;
  double fps = 1.0;
  double tau = 0.1;
  int n_pairs = 11;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string model = "gpt-4";
  double gen_temperature = 0.7;
  double judge_temperature = 0.0;
  int max_tokens = 2048;
  // Activity : procedure clip ratio, applied when max_clips caps the run.
  int activity_ratio = 7;
  int max_clips = -1;  // < 0 means all clips
  Ablation gen_ablation = Ablation::Full;
  std::optional<std::size_t> sample_size_override;
  bool stratify = false;
};

/// One clip scheduled for generation: its context, ground-truth text,
/// and the exact request that will be sent.
struct GenerationUnit {
  std::string video_id;
  Source source = Source::EpicKitchens;
  ClipContext context;
  // Clip-relative trajectory points as prompted (frame-time subsamples).
  std::vector<ObjectTrajectory> trajectories;
  std::optional<StepInterval> current_step;  // PTA only, clip-relative
  std::string ground_truth;
  ChatRequest request;
};

/// Deterministic generation plan: units sorted by (video_id, clip
/// start). With max_clips set, clips are sampled per the activity :
/// procedure ratio using the run seed.
std::vector<GenerationUnit> plan_generation(const std::vector<VideoManifest>& manifests,
                                            const RunConfig& config);

/// Parses one model response into samples for the unit. Layout warnings
/// are appended to `warnings` when non-null.
std::vector<InstructionSample> samples_from_response(
    const GenerationUnit& unit, const std::string& content,
    std::vector<LayoutIssue>* warnings = nullptr);

/// Template ground truth for an existing sample, rebuilt from its
/// manifest (recipe step for PTA, timed action sentences otherwise).
std::string ground_truth_for(const InstructionSample& sample,
                             const VideoManifest& manifest, const RunConfig& config);

/// Model responses to be judged: one JSONL record per (sample, model).
struct ResponseRecord {
  std::string sample_id;
  std::string model;
  std::string response;
};

void write_responses(const std::filesystem::path& path,
                     const std::vector<ResponseRecord>& records);
std::vector<ResponseRecord> read_responses(const std::filesystem::path& path);

}  // namespace eagle
