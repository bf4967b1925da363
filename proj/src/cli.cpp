#include "eagle/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eagle/dataset.hpp"
#include "eagle/errors.hpp"
#include "eagle/gateway.hpp"
#include "eagle/ingest.hpp"
#include "eagle/judge.hpp"
#include "eagle/numfmt.hpp"
#include "eagle/pipeline.hpp"

namespace eagle {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path + "'");
  }
  out << content;
}

const VideoManifest& manifest_for(const std::vector<VideoManifest>& manifests,
                                  const std::string& video_id,
                                  const std::string& context) {
  for (const auto& m : manifests) {
    if (m.video_id == video_id) return m;
  }
  throw Error(ErrorKind::DanglingReference,
              context + " references unknown video '" + video_id + "'");
}

struct GatewayFlags {
  std::string api_base;
  std::string api_key;
  std::string cache_dir;
  bool replay = false;

  GatewayConfig to_config() const {
    GatewayConfig config;
    config.api_base = api_base;
    config.api_key = api_key;
    config.cache_dir = cache_dir;
    config.replay_only = replay;
    return config;
  }
};

void add_gateway_flags(CLI::App* cmd, GatewayFlags* flags) {
  cmd->add_option("--api-base", flags->api_base,
                  "Chat-completion endpoint base, e.g. https://host/v1");
  cmd->add_option("--api-key", flags->api_key,
                  "API key (default: EAGLE_API_KEY env var)");
  cmd->add_option("--cache", flags->cache_dir, "Response cache directory");
  cmd->add_flag("--replay", flags->replay,
                "Serve responses from the cache only; fail on a miss");
}

// --- subcommand bodies -------------------------------------------------------

struct IngestArgs {
  std::string actions_path;
  std::string format = "verb-noun";
  std::string trajectories_path;
  std::string recipe_path;
  std::string video_id;
  std::string source = "epic_kitchens";
  std::string split = "train";
  std::string lab_id;
  double duration = 0.0;
  int width = 1280;
  int height = 720;
  std::string out;
};

int cmd_ingest(const IngestArgs& args) {
  VideoManifest m;
  m.source = source_from_string(args.source);
  m.split = split_from_string(args.split);
  m.frame_width = args.width;
  m.frame_height = args.height;
  m.lab_id = args.lab_id;

  auto rows = parse_action_rows(action_row_format_from_string(args.format),
                                read_file(args.actions_path));
  std::set<std::string> ids;
  for (const auto& row : rows) ids.insert(row.video_id);
  std::string video_id = args.video_id;
  if (video_id.empty()) {
    if (ids.size() != 1) {
      throw Error(ErrorKind::UsageError,
                  "action file holds " + std::to_string(ids.size()) +
                      " video ids; pass --video-id to choose one");
    }
    video_id = *ids.begin();
  }
  m.video_id = video_id;
  double max_end = 0.0;
  for (auto& row : rows) {
    if (row.video_id != video_id) continue;
    max_end = std::max(max_end, row.action.end_s);
    m.actions.push_back(std::move(row.action));
  }
  m.duration_s = args.duration > 0.0 ? args.duration : std::ceil(max_end);

  if (!args.trajectories_path.empty()) {
    m.trajectories = parse_trajectories(read_file(args.trajectories_path));
  }
  if (!args.recipe_path.empty()) {
    const json r = json::parse(read_file(args.recipe_path));
    RecipeAnnotation recipe;
    recipe.recipe_name = r.at("recipe_name").get<std::string>();
    for (const auto& s : r.at("steps")) {
      recipe.steps.push_back({s.at("index").get<int>(), s.at("text").get<std::string>()});
    }
    for (const auto& si : r.value("step_intervals", json::array())) {
      recipe.step_intervals.push_back({si.at("step_index").get<int>(),
                                       si.at("start_s").get<double>(),
                                       si.at("end_s").get<double>()});
    }
    m.recipe = std::move(recipe);
  }

  std::vector<VideoManifest> collection{std::move(m)};
  validate_collection(collection);
  write_manifests(args.out, collection);
  std::cout << "wrote 1 manifest (" << collection[0].actions.size() << " actions, "
            << collection[0].trajectories.size() << " trajectories) to " << args.out
            << "\n";
  return 0;
}

struct SynthArgs {
  SynthConfig config;
  std::string out;
};

int cmd_synth(const SynthArgs& args) {
  auto manifests = synthesize_manifests(args.config);
  validate_collection(manifests);
  write_manifests(args.out, manifests);
  std::cout << "wrote " << manifests.size() << " synthetic manifests to " << args.out
            << "\n";
  return 0;
}

struct SegmentArgs {
  std::string manifest_path;
  std::string out;
  double clip_len = 16.0;
  double fps = 1.0;
};

int cmd_segment(const SegmentArgs& args) {
  auto manifests = read_manifests(args.manifest_path);
  std::sort(manifests.begin(), manifests.end(),
            [](const VideoManifest& a, const VideoManifest& b) {
              return a.video_id < b.video_id;
            });
  std::ofstream out(args.out, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + args.out + "'");
  }
  std::size_t n = 0;
  for (const auto& m : manifests) {
    for (const auto& clip : make_clips(m, args.clip_len, args.fps)) {
      json j{{"video_id", clip.video_id},
             {"start_s", clip.start_s},
             {"end_s", clip.end_s},
             {"frame_times", clip.frame_times}};
      out << j.dump() << "\n";
      ++n;
    }
  }
  std::cout << "wrote " << n << " clip records to " << args.out << "\n";
  return 0;
}

struct GenerateArgs {
  std::string manifest_path;
  std::string out;
  GatewayFlags gateway;
  RunConfig run;
  std::string ablation = "full";
};

int cmd_generate(const GenerateArgs& args) {
  RunConfig config = args.run;
  config.gen_ablation = ablation_from_string(args.ablation);

  const auto manifests = read_manifests(args.manifest_path);
  const auto units = plan_generation(manifests, config);

  std::vector<ChatRequest> requests;
  requests.reserve(units.size());
  for (const auto& u : units) requests.push_back(u.request);

  ChatGateway gateway(args.gateway.to_config());
  const auto outcomes = gateway.batch_complete(requests, std::max(config.jobs, 1));

  std::vector<InstructionSample> samples;
  std::vector<LayoutIssue> warnings;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!outcomes[i].ok()) {
      ++failures;
      std::cerr << "clip " << units[i].video_id << ":"
                << format_number(units[i].context.clip.start_s)
                << " failed: " << outcomes[i].error << "\n";
      continue;
    }
    auto batch =
        samples_from_response(units[i], outcomes[i].response->content, &warnings);
    if (config.gen_ablation != Ablation::Full) {
      for (auto& s : batch) s.ablation = config.gen_ablation;
    }
    samples.insert(samples.end(), std::make_move_iterator(batch.begin()),
                   std::make_move_iterator(batch.end()));
  }
  for (const auto& w : warnings) {
    std::cerr << "layout warning at byte " << w.byte_offset << ": " << w.message
              << "\n";
  }
  write_samples(args.out, samples);
  std::cout << "wrote " << samples.size() << " samples from " << units.size()
            << " clips (" << failures << " failed) to " << args.out << "\n";
  return failures == 0 ? 0 : 1;
}

struct RepairArgs {
  std::string samples_path;
  std::string manifest_path;
  std::string out;
  double tau = 0.1;
};

int cmd_repair(const RepairArgs& args) {
  const auto manifests = read_manifests(args.manifest_path);
  auto samples = read_samples(args.samples_path);
  std::size_t lists = 0, replaced = 0, unattributed = 0;
  for (auto& sample : samples) {
    const auto& m = manifest_for(manifests, sample.video_id, sample.sample_id);
    auto outcome = repair_sample(sample, m.trajectories, args.tau);
    lists += outcome.n_lists;
    replaced += outcome.report.n_replaced;
    unattributed += outcome.n_unattributed;
    sample = std::move(outcome.sample);
  }
  write_samples(args.out, samples);
  std::cout << "repaired " << replaced << " points across " << lists
            << " coordinate lists (" << unattributed << " unattributed) in "
            << samples.size() << " samples; wrote " << args.out << "\n";
  return 0;
}

struct AblateArgs {
  std::string samples_path;
  std::string variant = "no_time";
  std::string out;
};

int cmd_ablate(const AblateArgs& args) {
  const Ablation variant = ablation_from_string(args.variant);
  auto samples = read_samples(args.samples_path);
  for (auto& s : samples) s = apply_ablation(s, variant);
  write_samples(args.out, samples);
  std::cout << "wrote " << samples.size() << " " << to_string(variant)
            << " samples to " << args.out << "\n";
  return 0;
}

struct StatsArgs {
  std::string manifest_path;
  std::string samples_path;
  std::string out_json;
  std::string out_text;
};

int cmd_stats(const StatsArgs& args) {
  const auto manifests = read_manifests(args.manifest_path);
  const auto samples = read_samples(args.samples_path);
  const auto stats = compute_stats(manifests, samples);
  const std::string table = render_stats_table(stats);
  if (!args.out_json.empty()) write_file(args.out_json, stats_to_json(stats));
  if (!args.out_text.empty()) {
    write_file(args.out_text, table);
  } else {
    std::cout << table;
  }
  return 0;
}

struct EvaluateArgs {
  std::string scores_path;   // aggregate-only path
  std::string samples_path;  // judge path
  std::string manifest_path;
  std::string responses_path;
  std::string out_scores;
  std::string report_path;
  std::string csv_path;
  GatewayFlags gateway;
  RunConfig run;
  std::size_t sample_size_override = 0;
  bool stratify = false;
  std::size_t second_round = 0;
  std::string judge_model = "gpt-4";
};

int write_report_files(const std::vector<ScoreRecord>& records,
                       const std::string& report_path, const std::string& csv_path) {
  const auto rows = aggregate_by_model(records);
  if (!report_path.empty()) {
    write_file(report_path, render_report(rows));
    std::cout << "wrote report for " << rows.size() << " models to " << report_path
              << "\n";
  }
  if (!csv_path.empty()) write_file(csv_path, render_report_csv(rows));
  if (report_path.empty() && csv_path.empty()) std::cout << render_report(rows);
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  if (!args.scores_path.empty()) {
    return write_report_files(read_scores(args.scores_path), args.report_path,
                              args.csv_path);
  }
  if (args.samples_path.empty() || args.manifest_path.empty() ||
      args.responses_path.empty()) {
    throw Error(ErrorKind::UsageError,
                "evaluate needs either --scores or all of --samples, --manifest, "
                "--responses");
  }

  const auto manifests = read_manifests(args.manifest_path);
  const auto samples = read_samples(args.samples_path);
  const auto responses = read_responses(args.responses_path);

  std::multimap<std::string, const ResponseRecord*> by_sample;
  for (const auto& r : responses) by_sample.insert({r.sample_id, &r});

  const std::size_t k = args.sample_size_override > 0 ? args.sample_size_override
                                                      : sample_size(samples.size());
  ChatGateway gateway(args.gateway.to_config());

  auto judge_round = [&](const std::vector<InstructionSample>& selected,
                         const std::set<std::string>& models,
                         const std::string& model_suffix,
                         std::vector<ScoreRecord>* records) {
    std::vector<ChatRequest> requests;
    std::vector<std::pair<std::string, std::string>> meta;  // sample_id, model
    for (const auto& sample : selected) {
      const auto& manifest = manifest_for(manifests, sample.video_id, sample.sample_id);
      const std::string truth = ground_truth_for(sample, manifest, args.run);
      auto [begin, end] = by_sample.equal_range(sample.sample_id);
      for (auto it = begin; it != end; ++it) {
        const ResponseRecord& r = *it->second;
        if (!models.empty() && !models.count(r.model)) continue;
        ChatRequest request =
            build_judge_request(sample.instruction, truth, r.response);
        request.model_name = args.judge_model;
        request.temperature = args.run.judge_temperature;
        requests.push_back(std::move(request));
        meta.emplace_back(sample.sample_id, r.model + model_suffix);
      }
    }
    const auto outcomes =
        gateway.batch_complete(requests, std::max(args.run.jobs, 1));
    std::size_t failures = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (!outcomes[i].ok()) {
        ++failures;
        std::cerr << "judge call for " << meta[i].first << " (" << meta[i].second
                  << ") failed: " << outcomes[i].error << "\n";
        continue;
      }
      try {
        records->push_back(
            {meta[i].first, meta[i].second, parse_scores(outcomes[i].response->content)});
      } catch (const Error& e) {
        ++failures;
        std::cerr << "judge output for " << meta[i].first << " (" << meta[i].second
                  << ") unusable: " << e.what() << "\n";
      }
    }
    return failures;
  };

  std::vector<ScoreRecord> records;
  std::size_t failures =
      judge_round(select_samples(samples, k, args.run.seed, args.stratify), {}, "",
                  &records);

  if (args.second_round > 0 && !records.empty()) {
    // Re-check the current leaders on a fresh selection.
    auto rows = aggregate_by_model(records);
    std::sort(rows.begin(), rows.end(),
              [](const ModelAggregate& a, const ModelAggregate& b) {
                return a.means.overall > b.means.overall;
              });
    std::set<std::string> top;
    for (std::size_t i = 0; i < rows.size() && i < 4; ++i) top.insert(rows[i].model);
    failures += judge_round(
        select_samples(samples, args.second_round,
                       args.run.seed ^ 0x9e3779b97f4a7c15ull, args.stratify),
        top, "_2", &records);
  }

  if (!args.out_scores.empty()) {
    write_scores(args.out_scores, records);
    std::cout << "wrote " << records.size() << " score records to "
              << args.out_scores << "\n";
  }
  if (!args.report_path.empty() || !args.csv_path.empty()) {
    write_report_files(records, args.report_path, args.csv_path);
  }
  return failures == 0 ? 0 : 1;
}

struct ReportArgs {
  std::string scores_path;
  std::string out_text;
  std::string out_csv;
};

int cmd_report(const ReportArgs& args) {
  return write_report_files(read_scores(args.scores_path), args.out_text,
                            args.out_csv);
}

void add_run_flags(CLI::App* cmd, RunConfig* run) {
  cmd->add_option("--clip-len", run->clip_len, "Clip length in seconds");
  cmd->add_option("--ctx", run->ctx_s, "Temporal context seconds before/after");
  cmd->add_option("--fps", run->fps, "Frame samples per second");
  cmd->add_option("--seed", run->seed, "Seed for all randomness");
  cmd->add_option("--jobs", run->jobs, "Max in-flight requests");
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Egocentric video instruction-data toolkit"};
  app.require_subcommand(1);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "Parse raw annotation files into a manifest");
  ingest->add_option("--actions", ingest_args.actions_path, "Action rows (CSV)")
      ->required();
  ingest->add_option("--format", ingest_args.format, "verb-noun or narration");
  ingest->add_option("--trajectories", ingest_args.trajectories_path,
                     "Trajectory lines");
  ingest->add_option("--recipe", ingest_args.recipe_path, "Recipe JSON (PTA)");
  ingest->add_option("--video-id", ingest_args.video_id, "Video to extract");
  ingest->add_option("--source", ingest_args.source,
                     "epic_kitchens, ego4d, or pta");
  ingest->add_option("--split", ingest_args.split, "train or val");
  ingest->add_option("--lab-id", ingest_args.lab_id, "Recording lab (PTA)");
  ingest->add_option("--duration", ingest_args.duration,
                     "Video duration in seconds (default: ceil of last action end)");
  ingest->add_option("--width", ingest_args.width, "Frame width");
  ingest->add_option("--height", ingest_args.height, "Frame height");
  ingest->add_option("--out", ingest_args.out, "Manifest JSON output")->required();

  SynthArgs synth_args;
  auto* synth =
      app.add_subcommand("synth", "Generate a synthetic manifest collection");
  synth->add_option("--seed", synth_args.config.seed, "Generator seed");
  synth->add_option("--videos", synth_args.config.n_videos, "Number of videos")
      ->required();
  synth->add_option("--actions-min", synth_args.config.actions_min,
                    "Min actions per kitchen video");
  synth->add_option("--actions-max", synth_args.config.actions_max,
                    "Max actions per kitchen video");
  synth->add_option("--weight-epic", synth_args.config.weight_epic,
                    "EPIC-KITCHENS share");
  synth->add_option("--weight-ego4d", synth_args.config.weight_ego4d, "Ego4D share");
  synth->add_option("--weight-pta", synth_args.config.weight_pta, "PTA share");
  synth->add_option("--holdout-lab", synth_args.config.holdout_lab,
                    "PTA lab held out as validation");
  synth->add_option("--out", synth_args.out, "Manifest JSON output")->required();

  SegmentArgs segment_args;
  auto* segment_cmd =
      app.add_subcommand("segment", "Slice videos into fixed-length clips");
  segment_cmd->add_option("--manifest", segment_args.manifest_path, "Manifest JSON")
      ->required();
  segment_cmd->add_option("--out", segment_args.out, "Clip records (JSONL)")
      ->required();
  segment_cmd->add_option("--clip-len", segment_args.clip_len, "Clip length");
  segment_cmd->add_option("--fps", segment_args.fps, "Frame samples per second");

  GenerateArgs generate_args;
  auto* generate =
      app.add_subcommand("generate", "Produce instruction samples for every clip");
  generate->add_option("--manifest", generate_args.manifest_path, "Manifest JSON")
      ->required();
  generate->add_option("--out", generate_args.out, "Samples JSONL")->required();
  generate->add_option("--model", generate_args.run.model, "Generation model name");
  generate->add_option("--n-pairs", generate_args.run.n_pairs,
                       "Question/answer pairs per clip");
  generate->add_option("--temperature", generate_args.run.gen_temperature,
                       "Generation temperature");
  generate->add_option("--max-clips", generate_args.run.max_clips,
                       "Cap on clips (activity:procedure ratio applies)");
  generate->add_option("--ratio", generate_args.run.activity_ratio,
                       "Activity clips per procedure clip under --max-clips");
  generate->add_option("--ablation", generate_args.ablation,
                       "Generation-time variant: full, no-time, no-obj, desc-only");
  add_run_flags(generate, &generate_args.run);
  add_gateway_flags(generate, &generate_args.gateway);

  RepairArgs repair_args;
  auto* repair_cmd = app.add_subcommand(
      "repair", "Replace deviating response coordinates with reference values");
  repair_cmd->add_option("--samples", repair_args.samples_path, "Samples JSONL")
      ->required();
  repair_cmd->add_option("--manifest", repair_args.manifest_path, "Manifest JSON")
      ->required();
  repair_cmd->add_option("--out", repair_args.out, "Repaired samples JSONL")
      ->required();
  repair_cmd->add_option("--tau", repair_args.tau,
                         "Fault threshold (normalized distance)");

  AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "Strip tokens for a dataset variant");
  ablate->add_option("--samples", ablate_args.samples_path, "Samples JSONL")
      ->required();
  ablate->add_option("--variant", ablate_args.variant,
                     "no-time, no-obj, or desc-only");
  ablate->add_option("--out", ablate_args.out, "Ablated samples JSONL")->required();

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Per-source dataset statistics");
  stats->add_option("--manifest", stats_args.manifest_path, "Manifest JSON")
      ->required();
  stats->add_option("--samples", stats_args.samples_path, "Samples JSONL")
      ->required();
  stats->add_option("--json", stats_args.out_json, "Stats JSON output");
  stats->add_option("--out", stats_args.out_text, "Stats table output");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Judge model responses (or aggregate existing scores)");
  evaluate->add_option("--scores", evaluate_args.scores_path,
                       "Existing scores JSONL; skips judging");
  evaluate->add_option("--samples", evaluate_args.samples_path, "Samples JSONL");
  evaluate->add_option("--manifest", evaluate_args.manifest_path, "Manifest JSON");
  evaluate->add_option("--responses", evaluate_args.responses_path,
                       "Model responses JSONL");
  evaluate->add_option("--out", evaluate_args.out_scores, "Scores JSONL output");
  evaluate->add_option("--report", evaluate_args.report_path, "Report text output");
  evaluate->add_option("--csv", evaluate_args.csv_path, "Report CSV output");
  evaluate->add_option("--judge-model", evaluate_args.judge_model, "Judge model name");
  evaluate->add_option("--sample-size", evaluate_args.sample_size_override,
                       "Override ceil(sqrt(n)) selection size");
  evaluate->add_flag("--stratify", evaluate_args.stratify,
                     "Stratify selection by source");
  evaluate->add_option("--second-round", evaluate_args.second_round,
                       "Extra samples re-judging the top four models");
  add_run_flags(evaluate, &evaluate_args.run);
  add_gateway_flags(evaluate, &evaluate_args.gateway);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Render the score table");
  report->add_option("--scores", report_args.scores_path, "Scores JSONL")->required();
  report->add_option("--out", report_args.out_text, "Report text output");
  report->add_option("--csv", report_args.out_csv, "Report CSV output");

  int rc = 0;
  ingest->callback([&] { rc = cmd_ingest(ingest_args); });
  synth->callback([&] { rc = cmd_synth(synth_args); });
  segment_cmd->callback([&] { rc = cmd_segment(segment_args); });
  generate->callback([&] { rc = cmd_generate(generate_args); });
  repair_cmd->callback([&] { rc = cmd_repair(repair_args); });
  ablate->callback([&] { rc = cmd_ablate(ablate_args); });
  stats->callback([&] { rc = cmd_stats(stats_args); });
  evaluate->callback([&] { rc = cmd_evaluate(evaluate_args); });
  report->callback([&] { rc = cmd_report(report_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::UsageError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

}  // namespace eagle
