// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "eagle/cli.hpp"
#include "eagle/clipper.hpp"
#include "eagle/dataset.hpp"
#include "eagle/gateway.hpp"
#include "eagle/ingest.hpp"
#include "eagle/judge.hpp"
#include "eagle/numfmt.hpp"
#include "eagle/pipeline.hpp"
#include "eagle/promptgen.hpp"
#include "eagle/rng.hpp"
#include "eagle/trajectory.hpp"
#include "stub_responses.hpp"
#include "test_support.hpp"

using namespace eagle;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
              detail.empty() ? "" : " - ", detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// --- criterion 1: leaderboard average reproduction ---------------------------

struct LeaderboardRow {
  const char* model;
  double metrics[5];
  double published_average;
};

const LeaderboardRow kLeaderboard[] = {
    {"video-llama", {1.00, 1.00, 1.60, 1.85, 1.43}, 1.38},
    {"lavila", {1.17, 1.15, 1.95, 4.63, 2.73}, 2.33},
    {"blip-1", {1.56, 1.48, 1.85, 4.50, 3.75}, 2.63},
    {"llava", {2.81, 2.90, 4.56, 4.12, 3.38}, 3.55},
    {"imagebind-llm", {2.96, 2.97, 5.45, 4.64, 3.71}, 3.95},
    {"instructblip", {3.81, 3.68, 5.29, 5.46, 4.81}, 4.61},
    {"shikra", {4.21, 4.52, 6.80, 4.78, 5.15}, 5.09},
    {"shikra-r2", {4.31, 4.55, 6.85, 4.20, 5.20}, 5.02},
    {"blip-2", {4.62, 4.78, 6.14, 5.51, 5.53}, 5.32},
    {"blip-2-r2", {4.43, 4.80, 6.20, 5.45, 5.38}, 5.25},
    {"eagle-pool", {7.13, 7.32, 6.52, 6.45, 6.10}, 6.70},
    {"eagle-pool-r2", {7.21, 7.40, 6.72, 6.42, 6.30}, 6.81},
    {"eagle", {7.32, 7.51, 6.90, 6.75, 6.65}, 7.03},
    {"eagle-r2", {7.28, 7.48, 6.83, 6.67, 6.77}, 7.01},
};

bool criterion_1(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  int rows_ok = 0;
  double worst = 0.0;
  for (const auto& row : kLeaderboard) {
    const double overall = overall_average(row.metrics[0], row.metrics[1],
                                           row.metrics[2], row.metrics[3],
                                           row.metrics[4]);
    const double err = std::abs(overall - row.published_average);
    worst = std::max(worst, err);
    if (err <= 0.005) {
      ++rows_ok;
    } else {
      *detail += std::string(row.model) + " off by " + format_number(err) + "; ";
    }
  }
  const double elapsed = seconds_since(start);
  *detail += std::to_string(rows_ok) + "/14 rows within 0.005 (worst " +
             std::to_string(worst) + "), " + format_number(elapsed) + " s";
  return rows_ok == 14 && elapsed < 1.0;
}

// --- criterion 2: square-root sampling ----------------------------------------

bool criterion_2(std::string* detail) {
  if (sample_size(7700) != 88) {
    *detail = "sample_size(7700) = " + std::to_string(sample_size(7700));
    return false;
  }
  Rng rng(101);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 1000000));
    const std::size_t k = sample_size(n);
    if (!((k - 1) * (k - 1) < n && n <= k * k)) {
      *detail = "violated at n=" + std::to_string(n);
      return false;
    }
  }
  for (std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{9},
                        std::size_t{999999}, std::size_t{1000000}}) {
    const std::size_t k = sample_size(n);
    if (!((k - 1) * (k - 1) < n && n <= k * k)) {
      *detail = "violated at n=" + std::to_string(n);
      return false;
    }
  }
  *detail = "sample_size(7700) = 88; 20005 draws satisfy (k-1)^2 < n <= k^2";
  return true;
}

// --- criterion 3: segmentation and frame-rate properties -----------------------

bool criterion_3(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(103);
  for (int trial = 0; trial < 1000; ++trial) {
    const double duration = static_cast<double>(rng.uniform_int(1, 480)) / 4.0;
    const auto windows = segment(duration);
    double cursor = 0.0;
    for (const auto& w : windows) {
      if (w.start_s != cursor || w.start_s >= w.end_s || w.length() > 16.0) {
        *detail = "bad tiling at duration " + format_number(duration);
        return false;
      }
      cursor = w.end_s;
      const auto expected = static_cast<std::size_t>(std::ceil(w.length()));
      if (frame_times(w).size() != expected) {
        *detail = "frame count != ceil(length) at duration " +
                  format_number(duration);
        return false;
      }
    }
    const double dropped = duration - cursor;
    if (dropped < 0.0 || dropped >= 8.0) {
      *detail = "dropped tail " + format_number(dropped) + " at duration " +
                format_number(duration);
      return false;
    }
  }
  const double elapsed = seconds_since(start);
  *detail = "1000 durations tile with sub-8 s drops; counts = ceil(len); " +
            format_number(elapsed) + " s";
  return elapsed < 5.0;
}

// --- criterion 4: interpolation oracle -----------------------------------------

bool criterion_4(std::string* detail) {
  Rng rng(107);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto traj = testsup::random_trajectory(rng, 2, 10);
    for (int q = 0; q < 10; ++q) {
      const double at =
          rng.uniform_real(traj.points.front().t, traj.points.back().t);
      const Point2 fast = lerp(traj, at);
      // Brute force: linear segment scan, direct interpolation formula.
      Point2 ref{traj.points.back().x, traj.points.back().y};
      for (std::size_t i = 0; i + 1 < traj.points.size(); ++i) {
        const auto& a = traj.points[i];
        const auto& b = traj.points[i + 1];
        if (at >= a.t && at <= b.t) {
          const double w = (at - a.t) / (b.t - a.t);
          ref = {a.x + (b.x - a.x) * w, a.y + (b.y - a.y) * w};
          break;
        }
      }
      worst = std::max({worst, std::abs(fast.x - ref.x), std::abs(fast.y - ref.y)});
    }
  }
  *detail = "1000 queries over 100 trajectories, worst |diff| = " +
            std::to_string(worst);
  return worst < 1e-9;
}

// --- criterion 5: repair guarantees ---------------------------------------------

bool criterion_5(std::string* detail) {
  Rng rng(109);
  const double tau = 0.1;
  for (int t = 0; t < 100; ++t) {
    const auto truth = testsup::random_trajectory(rng, 2, 10);
    ObjectTrajectory corrupted = truth;
    for (auto& p : corrupted.points) {
      if (rng.bernoulli(0.5)) {
        p.x = std::clamp(p.x + rng.uniform_real(-0.6, 0.6), 0.0, 1.0);
        p.y = std::clamp(p.y + rng.uniform_real(-0.6, 0.6), 0.0, 1.0);
      }
    }
    const auto once = repair(corrupted, truth, tau);
    for (const auto& p : once.trajectory.points) {
      const Point2 ref = lerp(truth, p.t);
      if (std::hypot(p.x - ref.x, p.y - ref.y) > tau + 1e-12) {
        *detail = "repaired point beyond tau in trial " + std::to_string(t);
        return false;
      }
    }
    const auto twice = repair(once.trajectory, truth, tau);
    if (twice.report.n_replaced != 0 ||
        !testsup::same_points(twice.trajectory, once.trajectory)) {
      *detail = "repair not idempotent in trial " + std::to_string(t);
      return false;
    }
    const auto identity = repair(truth, truth, tau);
    if (identity.report.n_replaced != 0 ||
        !testsup::same_points(identity.trajectory, truth)) {
      *detail = "repair(gt, gt) != gt in trial " + std::to_string(t);
      return false;
    }
  }
  *detail = "100 corrupted trajectories repaired within tau; idempotent";
  return true;
}

// --- criterion 6: round-trip serialization ---------------------------------------

bool criterion_6(std::string* detail) {
  const std::string golden =
      "'right hand': [[5.0, 0.295, 0.401], [6.0, 0.317, 0.419], "
      "[7.0, 0.294, 0.365], [8.0, 0.324, 0.406], [10.0, 0.303, 0.377], "
      "[12.0, 0.344, 0.366], [13.0, 0.336, 0.284]]";
  if (render_trajectory_line(parse_trajectory_line(golden)) != golden) {
    *detail = "golden reference line does not round-trip";
    return false;
  }
  Rng rng(113);
  for (int t = 0; t < 1000; ++t) {
    const auto traj = testsup::random_trajectory(rng);
    const std::string rendered = render_trajectory_line(traj);
    const auto parsed = parse_trajectory_line(rendered);
    if (!testsup::same_points(parsed, traj) ||
        parsed.decimal_times != traj.decimal_times ||
        render_trajectory_line(parsed) != rendered) {
      *detail = "round-trip failed in trial " + std::to_string(t);
      return false;
    }
  }
  *detail = "golden line plus 1000 generated trajectories round-trip";
  return true;
}

// --- criterion 7: ablation invariants ---------------------------------------------

std::string random_prose(Rng& rng) {
  static const char* kWords[] = {"the", "person", "opens", "a", "drawer", "then",
                                 "takes", "the", "knife", "and", "washes"};
  auto number = [&rng] {
    return format_number(static_cast<double>(rng.uniform_int(0, 64)) / 4.0);
  };
  auto triple = [&] {
    return "[" + number() + ", " + number() + ", " + number() + "]";
  };
  std::string text;
  const int n = static_cast<int>(rng.uniform_int(4, 24));
  for (int i = 0; i < n; ++i) {
    if (!text.empty()) text += " ";
    switch (rng.uniform_int(0, 9)) {
      case 0:
        text += "<" + number() + "," + number() + ">";
        break;
      case 1:
        text += triple();
        break;
      case 2: {
        std::string list = "[" + triple();
        const int k = static_cast<int>(rng.uniform_int(0, 3));
        for (int j = 0; j < k; ++j) list += ", " + triple();
        text += list + "]";
        break;
      }
      default:
        text += kWords[rng.uniform_int(0, 10)];
        break;
    }
  }
  return text;
}

bool criterion_7(std::string* detail) {
  Rng rng(127);
  for (int t = 0; t < 1000; ++t) {
    InstructionSample sample;
    sample.sample_id = "s";
    sample.video_id = "v";
    sample.instruction = random_prose(rng);
    sample.response = random_prose(rng);

    const auto no_time = apply_ablation(sample, Ablation::NoTime);
    if (strip_time_tokens(no_time.instruction) != no_time.instruction ||
        strip_time_tokens(no_time.response) != no_time.response) {
      *detail = "NoTime left a <a,b> token in trial " + std::to_string(t);
      return false;
    }
    const auto no_obj = apply_ablation(sample, Ablation::NoObj);
    if (strip_coordinate_lists(no_obj.instruction) != no_obj.instruction ||
        strip_coordinate_lists(no_obj.response) != no_obj.response) {
      *detail = "NoObj left a [t,x,y] triple in trial " + std::to_string(t);
      return false;
    }
    const auto ab = apply_ablation(no_time, Ablation::NoObj);
    const auto ba = apply_ablation(no_obj, Ablation::NoTime);
    if (ab.instruction != ba.instruction || ab.response != ba.response) {
      *detail = "NoTime and NoObj do not commute in trial " + std::to_string(t);
      return false;
    }
  }
  *detail = "1000 samples: variants strip their tokens and commute byte-for-byte";
  return true;
}

// --- criterion 8: offline end-to-end determinism -----------------------------------

struct StageOutputs {
  std::string manifests, clips, samples, repaired, scores, report, stats;
};

StageOutputs run_pipeline(const std::filesystem::path& dir,
                          const std::string& cache_dir) {
  const auto p = [&dir](const char* name) { return (dir / name).string(); };
  auto run = [](std::vector<std::string> args) {
    std::vector<const char*> argv{"eagle"};
    for (const auto& a : args) argv.push_back(a.c_str());
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
    if (rc != 0) {
      throw Error(ErrorKind::TransportError,
                  "stage '" + args[0] + "' exited " + std::to_string(rc));
    }
  };

  run({"synth", "--seed", "7", "--videos", "6", "--out", p("manifests.json")});
  run({"segment", "--manifest", p("manifests.json"), "--out", p("clips.jsonl")});
  run({"generate", "--manifest", p("manifests.json"), "--out", p("samples.jsonl"),
       "--cache", cache_dir, "--replay", "--seed", "7"});
  run({"repair", "--samples", p("samples.jsonl"), "--manifest", p("manifests.json"),
       "--out", p("repaired.jsonl")});

  // One model echoing the template ground truth back.
  const auto manifests = read_manifests(p("manifests.json"));
  const auto samples = read_samples(p("repaired.jsonl"));
  RunConfig config;
  std::vector<ResponseRecord> responses;
  for (const auto& s : samples) {
    for (const auto& m : manifests) {
      if (m.video_id == s.video_id) {
        responses.push_back({s.sample_id, "echo", ground_truth_for(s, m, config)});
        break;
      }
    }
  }
  write_responses(p("responses.jsonl"), responses);

  run({"stats", "--manifest", p("manifests.json"), "--samples", p("repaired.jsonl"),
       "--json", p("stats.json")});
  run({"evaluate", "--samples", p("repaired.jsonl"), "--manifest",
       p("manifests.json"), "--responses", p("responses.jsonl"), "--out",
       p("scores.jsonl"), "--report", p("report.txt"), "--cache", cache_dir,
       "--replay", "--seed", "7"});

  StageOutputs outputs;
  outputs.manifests = testsup::slurp(p("manifests.json"));
  outputs.clips = testsup::slurp(p("clips.jsonl"));
  outputs.samples = testsup::slurp(p("samples.jsonl"));
  outputs.repaired = testsup::slurp(p("repaired.jsonl"));
  outputs.scores = testsup::slurp(p("scores.jsonl"));
  outputs.report = testsup::slurp(p("report.txt"));
  outputs.stats = testsup::slurp(p("stats.json"));
  return outputs;
}

// Builds the replay cache the pipeline will hit: stub generation
// responses for every planned request, then stub judge verdicts for the
// requests the evaluate stage derives from the generated samples.
void seed_cache(const std::filesystem::path& scratch, const std::string& cache_dir) {
  SynthConfig synth_config;
  synth_config.seed = 7;
  synth_config.n_videos = 6;
  const auto manifests = synthesize_manifests(synth_config);

  RunConfig config;
  config.seed = 7;
  GatewayConfig gc;
  gc.cache_dir = cache_dir;
  ChatGateway gateway(gc);
  for (const auto& unit : plan_generation(manifests, config)) {
    ChatResponse response;
    response.content = testsup::stub_generation_content(unit, config.n_pairs);
    gateway.put_cached(unit.request, response);
  }

  // Dry-run generate and repair to learn the exact samples the evaluate
  // stage will select, then cache a judge verdict per request.
  std::vector<InstructionSample> samples;
  for (const auto& unit : plan_generation(manifests, config)) {
    auto batch = samples_from_response(
        unit, testsup::stub_generation_content(unit, config.n_pairs));
    for (auto& s : batch) {
      for (const auto& m : manifests) {
        if (m.video_id == s.video_id) {
          s = repair_sample(s, m.trajectories, config.tau).sample;
          break;
        }
      }
      samples.push_back(std::move(s));
    }
  }
  const std::size_t k = sample_size(samples.size());
  for (const auto& sample : select_samples(samples, k, config.seed)) {
    for (const auto& m : manifests) {
      if (m.video_id != sample.video_id) continue;
      const std::string truth = ground_truth_for(sample, m, config);
      ChatRequest request = build_judge_request(sample.instruction, truth, truth);
      request.model_name = "gpt-4";
      request.temperature = config.judge_temperature;
      ChatResponse response;
      response.content = testsup::stub_judge_content(request);
      gateway.put_cached(request, response);
      break;
    }
  }
  (void)scratch;
}

bool criterion_8(std::string* detail) {
  testsup::TempDir root("acceptance_e2e");
  const std::string cache_dir = root.str("replay_cache");
  seed_cache(root.path(), cache_dir);

  const auto dir_a = root.path() / "run_a";
  const auto dir_b = root.path() / "run_b";
  std::filesystem::create_directories(dir_a);
  std::filesystem::create_directories(dir_b);

  const StageOutputs a = run_pipeline(dir_a, cache_dir);
  const StageOutputs b = run_pipeline(dir_b, cache_dir);

  const bool identical = a.manifests == b.manifests && a.clips == b.clips &&
                         a.samples == b.samples && a.repaired == b.repaired &&
                         a.scores == b.scores && a.report == b.report &&
                         a.stats == b.stats;
  if (!identical) {
    *detail = "consecutive runs differ";
    return false;
  }

  const auto stats = nlohmann::json::parse(a.stats);
  const double density = stats.at("total").at("avg_samples_per_clip").get<double>();
  if (std::abs(density - 11.0) > 1e-9) {
    *detail = "avg_samples_per_clip = " + std::to_string(density);
    return false;
  }
  *detail = "two runs byte-identical across 7 outputs; avg_samples_per_clip = 11";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    bool (*fn)(std::string*);
  };
  const Criterion criteria[] = {
      {1, "leaderboard average reproduction", criterion_1},
      {2, "square-root sampling", criterion_2},
      {3, "segmentation and frame-rate properties", criterion_3},
      {4, "interpolation oracle agreement", criterion_4},
      {5, "repair guarantees", criterion_5},
      {6, "round-trip trajectory serialization", criterion_6},
      {7, "ablation invariants", criterion_7},
      {8, "offline end-to-end determinism", criterion_8},
  };
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(&detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    report(c.number, c.name, ok, detail);
  }
  return g_failures == 0 ? 0 : 1;
}
