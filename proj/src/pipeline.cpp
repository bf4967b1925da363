#include "eagle/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "eagle/errors.hpp"
#include "eagle/numfmt.hpp"
#include "eagle/rng.hpp"
#include "eagle/trajectory.hpp"

namespace eagle {
namespace {

using nlohmann::json;

// Trajectory points that fall on the clip's frame times, shifted to
// clip-relative seconds. Trajectories with no points in the clip drop out.
std::vector<ObjectTrajectory> clip_trajectories(const VideoManifest& manifest,
                                                const Clip& clip) {
  std::vector<ObjectTrajectory> out;
  for (const auto& traj : manifest.trajectories) {
    auto points = subsample(traj, clip.frame_times);
    if (points.empty()) continue;
    for (auto& p : points) p.t -= clip.start_s;
    out.push_back({traj.label, traj.decimal_times, std::move(points)});
  }
  return out;
}

// The recipe step whose interval overlaps the clip the most.
std::optional<StepInterval> current_step_for(const VideoManifest& manifest,
                                             const Clip& clip) {
  if (!manifest.recipe) return std::nullopt;
  const StepInterval* best = nullptr;
  double best_overlap = 0.0;
  for (const auto& si : manifest.recipe->step_intervals) {
    const double overlap = std::min(si.end_s, clip.end_s) -
                           std::max(si.start_s, clip.start_s);
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best = &si;
    }
  }
  if (!best) return std::nullopt;
  auto [s, e] = rebase(best->start_s, best->end_s, clip.window());
  return StepInterval{best->step_index, s, e};
}

std::string ablated_body(const std::string& body, Ablation ablation) {
  if (ablation == Ablation::NoTime || ablation == Ablation::DescOnly) {
    return strip_time_tokens(body);
  }
  return body;
}

GenerationUnit make_unit(const VideoManifest& manifest, const Clip& clip,
                         const RunConfig& config) {
  GenerationUnit unit;
  unit.video_id = manifest.video_id;
  unit.source = manifest.source;
  unit.context = context_window(clip, manifest.actions, config.ctx_s);

  std::vector<SymbolicContext> contexts;
  if (manifest.source == Source::Pta) {
    unit.current_step = current_step_for(manifest, clip);
    if (!unit.current_step) {
      throw Error(ErrorKind::UnknownStep,
                  manifest.video_id + ": no recipe step overlaps clip at " +
                      format_number(clip.start_s));
    }
    contexts.push_back(
        {ContextKind::TaskDescription,
         ablated_body(render_task_description(*manifest.recipe, *unit.current_step),
                      config.gen_ablation)});
    const auto& steps = manifest.recipe->steps;
    unit.ground_truth =
        render_gt_step(steps[static_cast<std::size_t>(unit.current_step->step_index) - 1]);
  } else {
    contexts.push_back(
        {ContextKind::TemporalHistory,
         ablated_body(render_temporal_history(unit.context), config.gen_ablation)});
    unit.ground_truth = render_gt_sentences(unit.context);
  }

  unit.trajectories = clip_trajectories(manifest, clip);
  const bool drop_trajectories = config.gen_ablation == Ablation::NoObj ||
                                 config.gen_ablation == Ablation::DescOnly;
  if (!drop_trajectories && !unit.trajectories.empty()) {
    contexts.push_back(
        {ContextKind::ObjectTrajectories, render_trajectories(unit.trajectories)});
  }

  unit.request = build_generation_request(contexts, response_types_for(manifest.source),
                                          config.n_pairs);
  unit.request.model_name = config.model;
  unit.request.temperature = config.gen_temperature;
  unit.request.max_tokens = config.max_tokens;
  return unit;
}

void sort_units(std::vector<GenerationUnit>& units) {
  std::sort(units.begin(), units.end(),
            [](const GenerationUnit& a, const GenerationUnit& b) {
              if (a.video_id != b.video_id) return a.video_id < b.video_id;
              return a.context.clip.start_s < b.context.clip.start_s;
            });
}

// Seeded subset of `units` keeping the activity : procedure ratio.
std::vector<GenerationUnit> cap_units(std::vector<GenerationUnit> units,
                                      const RunConfig& config) {
  if (config.max_clips < 0 ||
      static_cast<std::size_t>(config.max_clips) >= units.size()) {
    return units;
  }
  std::vector<GenerationUnit> activity, procedure;
  for (auto& u : units) {
    (u.source == Source::Pta ? procedure : activity).push_back(std::move(u));
  }
  const auto cap = static_cast<std::size_t>(config.max_clips);
  const double ratio = static_cast<double>(config.activity_ratio);
  auto want_activity = static_cast<std::size_t>(
      static_cast<double>(cap) * ratio / (ratio + 1.0) + 0.5);
  want_activity = std::min(want_activity, activity.size());
  std::size_t want_procedure = std::min(cap - want_activity, procedure.size());
  // Backfill from the other pool when one runs short.
  want_activity = std::min(cap - want_procedure, activity.size());

  Rng rng(config.seed);
  auto take = [&rng](std::vector<GenerationUnit>& pool, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i),
                          static_cast<std::int64_t>(pool.size()) - 1));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
  };
  take(activity, want_activity);
  take(procedure, want_procedure);

  std::vector<GenerationUnit> kept = std::move(activity);
  for (auto& u : procedure) kept.push_back(std::move(u));
  sort_units(kept);
  return kept;
}

}  // namespace

std::vector<GenerationUnit> plan_generation(const std::vector<VideoManifest>& manifests,
                                            const RunConfig& config) {
  std::vector<GenerationUnit> units;
  for (const auto& manifest : manifests) {
    for (const auto& clip : make_clips(manifest, config.clip_len, config.fps)) {
      units.push_back(make_unit(manifest, clip, config));
    }
  }
  sort_units(units);
  return cap_units(std::move(units), config);
}

std::vector<InstructionSample> samples_from_response(
    const GenerationUnit& unit, const std::string& content,
    std::vector<LayoutIssue>* warnings) {
  GeneratedParse parsed = parse_generated(content);
  if (warnings) {
    warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
  }
  const Clip& clip = unit.context.clip;
  const std::string clip_tag = unit.video_id + ":" + format_number(clip.start_s) +
                               "-" + format_number(clip.end_s);
  std::vector<InstructionSample> samples;
  std::size_t index = 0;
  for (const auto& pair : parsed.pairs) {
    if (pair.question.empty() || pair.answer.empty()) {
      if (warnings) warnings->push_back({0, clip_tag + ": empty question or answer"});
      continue;
    }
    InstructionSample sample;
    sample.sample_id = clip_tag + "#" + std::to_string(index++);
    sample.source = unit.source;
    sample.video_id = unit.video_id;
    sample.clip = {clip.start_s, clip.end_s};
    sample.task_type = pair.task_type;
    sample.instruction = pair.question;
    sample.response = pair.answer;
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::string ground_truth_for(const InstructionSample& sample,
                             const VideoManifest& manifest, const RunConfig& config) {
  Clip clip{sample.video_id, sample.clip.start_s, sample.clip.end_s, {}};
  clip.frame_times = frame_times(clip.window(), config.fps);
  if (manifest.source == Source::Pta) {
    const auto step = current_step_for(manifest, clip);
    if (!step) {
      throw Error(ErrorKind::UnknownStep,
                  sample.sample_id + ": no recipe step overlaps the clip");
    }
    return render_gt_step(
        manifest.recipe->steps[static_cast<std::size_t>(step->step_index) - 1]);
  }
  return render_gt_sentences(context_window(clip, manifest.actions, config.ctx_s));
}

void write_responses(const std::filesystem::path& path,
                     const std::vector<ResponseRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  for (const auto& r : records) {
    json j{{"sample_id", r.sample_id}, {"model", r.model}, {"response", r.response}};
    out << j.dump() << "\n";
  }
}

std::vector<ResponseRecord> read_responses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  std::vector<ResponseRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      records.push_back({j.at("sample_id").get<std::string>(),
                         j.at("model").get<std::string>(),
                         j.at("response").get<std::string>()});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::MalformedLine, line_no, e.what());
    }
  }
  return records;
}

}  // namespace eagle
