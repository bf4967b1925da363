#include "eagle/dataset.hpp"

#include <doctest.h>

#include <cmath>

#include "eagle/errors.hpp"
#include "eagle/ingest.hpp"
#include "test_support.hpp"

using namespace eagle;

namespace {

InstructionSample make_sample(const std::string& instruction,
                              const std::string& response) {
  InstructionSample sample;
  sample.sample_id = "ek_0000:32-48#0";
  sample.source = Source::EpicKitchens;
  sample.video_id = "ek_0000";
  sample.clip = {32.0, 48.0};
  sample.task_type = ResponseType::Description;
  sample.instruction = instruction;
  sample.response = response;
  return sample;
}

// Random prose mixing words, <a,b> tokens, bare triples, and triple lists.
InstructionSample random_sample(Rng& rng) {
  static const char* kWords[] = {"the",   "person", "opens", "a",    "drawer",
                                 "then",  "takes",  "knife", "and",  "washes",
                                 "carrot"};
  auto number = [&rng] {
    return format_number(static_cast<double>(rng.uniform_int(0, 6400)) / 400.0);
  };
  auto triple = [&] {
    return "[" + number() + ", " + number() + ", " + number() + "]";
  };
  auto build = [&] {
    std::string text;
    const int n = static_cast<int>(rng.uniform_int(4, 20));
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
  };
  return make_sample(build(), build());
}

bool contains_time_token(const std::string& text) {
  const std::string stripped = strip_time_tokens(text);
  return stripped != text;
}

bool contains_triple(const std::string& text) {
  const std::string stripped = strip_coordinate_lists(text);
  return stripped != text;
}

}  // namespace

TEST_CASE("parse_generated reads typed question/answer blocks") {
  const auto parsed = parse_generated(
      "Response type: Description\n"
      "Question: What happens?\n"
      "Answer: A person opens a drawer.\n"
      "\n"
      "Response type: Event Localization\n"
      "Question: When does it open?\n"
      "Answer: Between [3.66, 5.0] seconds.\n");
  REQUIRE(parsed.pairs.size() == 2);
  CHECK(parsed.warnings.empty());
  CHECK(parsed.pairs[0].task_type == ResponseType::Description);
  CHECK(parsed.pairs[0].question == "What happens?");
  CHECK(parsed.pairs[0].answer == "A person opens a drawer.");
  CHECK(parsed.pairs[1].task_type == ResponseType::EventLocalization);
}

TEST_CASE("parse_generated accepts numbered type headers") {
  const auto parsed = parse_generated(
      "Response type 2: Step Verification\n"
      "Question: Is it step four?\n"
      "Answer: Yes.\n");
  REQUIRE(parsed.pairs.size() == 1);
  CHECK(parsed.pairs[0].task_type == ResponseType::StepVerification);
}

TEST_CASE("a block missing its answer is dropped, others kept") {
  const auto parsed = parse_generated(
      "Response type: Description\n"
      "Question: First without answer\n"
      "Question: Second with one\n"
      "Answer: Here.\n");
  REQUIRE(parsed.pairs.size() == 1);
  CHECK(parsed.pairs[0].question == "Second with one");
  REQUIRE(parsed.warnings.size() == 1);
  CHECK(parsed.warnings[0].byte_offset == 27);  // offset of the orphan Question
}

TEST_CASE("unknown type headers fall back to Description with a warning") {
  const auto parsed = parse_generated(
      "Response type: Interpretive Dance\n"
      "Question: Q\n"
      "Answer: A\n");
  REQUIRE(parsed.pairs.size() == 1);
  CHECK(parsed.pairs[0].task_type == ResponseType::Description);
  REQUIRE(parsed.warnings.size() == 1);
  CHECK(parsed.warnings[0].byte_offset == 0);
}

TEST_CASE("multi-line answers are joined") {
  const auto parsed = parse_generated(
      "Question: Q\n"
      "Answer: line one\n"
      "line two\n");
  REQUIRE(parsed.pairs.size() == 1);
  CHECK(parsed.pairs[0].answer == "line one\nline two");
}

TEST_CASE("NoTime strips boundary tokens and the following space") {
  CHECK(strip_time_tokens("<3.66,5.0> open drawer") == "open drawer");
  CHECK(strip_time_tokens("do <1,2> then <3.5,4> stop") == "do then stop");
  CHECK(strip_time_tokens("a < b and 1 > 0") == "a < b and 1 > 0");
}

TEST_CASE("NoObj strips triples and their list brackets") {
  CHECK(strip_coordinate_lists("at [5.0, 0.295, 0.401] now") == "at now");
  CHECK(strip_coordinate_lists("'right hand': [[5.0, 0.2, 0.4], [6.0, 0.3, 0.4]] moves") ==
        "'right hand': moves");
  // Time pairs are not triples and must survive.
  CHECK(strip_coordinate_lists("between [3.66, 5.0] seconds") ==
        "between [3.66, 5.0] seconds");
}

TEST_CASE("ablation examples from the variant definitions") {
  const auto sample = make_sample("<3.66,5.0> open drawer", "plain response");
  const auto no_time = apply_ablation(sample, Ablation::NoTime);
  CHECK(no_time.instruction == "open drawer");
  CHECK(no_time.ablation == Ablation::NoTime);

  const auto untouched = apply_ablation(sample, Ablation::NoObj);
  CHECK(untouched.instruction == sample.instruction);  // no trajectories here
  CHECK(untouched.response == sample.response);
}

TEST_CASE("ablation variants are idempotent and commute") {
  Rng rng(67);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sample = random_sample(rng);
    const auto no_time = apply_ablation(sample, Ablation::NoTime);
    const auto no_obj = apply_ablation(sample, Ablation::NoObj);
    const auto desc = apply_ablation(sample, Ablation::DescOnly);

    CHECK(!contains_time_token(no_time.instruction));
    CHECK(!contains_time_token(no_time.response));
    CHECK(!contains_triple(no_obj.instruction));
    CHECK(!contains_triple(no_obj.response));
    CHECK(!contains_time_token(desc.instruction));
    CHECK(!contains_triple(desc.instruction));

    // NoTime then NoObj == NoObj then NoTime == DescOnly, byte for byte.
    const auto ab = apply_ablation(no_time, Ablation::NoObj);
    const auto ba = apply_ablation(no_obj, Ablation::NoTime);
    CHECK(ab.instruction == ba.instruction);
    CHECK(ab.response == ba.response);
    CHECK(ab.instruction == desc.instruction);
    CHECK(ab.response == desc.response);

    // Applying a variant twice equals once.
    const auto again = apply_ablation(no_time, Ablation::NoTime);
    CHECK(again.instruction == no_time.instruction);
    CHECK(again.response == no_time.response);
  }
}

TEST_CASE("repair_sample leaves a faithful embedding unchanged") {
  // Truth in video-global time; the clip starts at 32 s.
  const auto truth = parse_trajectories(
      "'right hand': [[37.0, 0.295, 0.401], [38.0, 0.317, 0.419]]");
  const auto sample = make_sample(
      "Where is the right hand?",
      "Track 'right hand': [[5.0, 0.295, 0.401], [6.0, 0.317, 0.419]] here.");
  const auto outcome = repair_sample(sample, truth, 0.1);
  CHECK(outcome.n_lists == 1);
  CHECK(outcome.n_unattributed == 0);
  CHECK(outcome.report.n_replaced == 0);
  CHECK(outcome.sample.response == sample.response);
}

TEST_CASE("repair_sample replaces a displaced triple with the reference") {
  const auto truth = parse_trajectories(
      "'right hand': [[37.0, 0.295, 0.401], [38.0, 0.317, 0.419]]");
  const auto sample = make_sample(
      "Where?",
      "See 'right hand': [[5.0, 0.795, 0.401], [6.0, 0.317, 0.419]] move.");
  const auto outcome = repair_sample(sample, truth, 0.1);
  CHECK(outcome.report.n_replaced == 1);
  CHECK(outcome.report.max_deviation == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(outcome.sample.response ==
        "See 'right hand': [[5.0, 0.295, 0.401], [6.0, 0.317, 0.419]] move.");
}

TEST_CASE("repair_sample ignores coordinate-free responses") {
  const auto truth = parse_trajectories("'cup': [[37.0, 0.5, 0.5]]");
  const auto sample = make_sample("Q", "Nothing numeric here.");
  const auto outcome = repair_sample(sample, truth, 0.1);
  CHECK(outcome.n_lists == 0);
  CHECK(outcome.sample.response == sample.response);
}

TEST_CASE("repair_sample counts unattributable lists and leaves them be") {
  const auto truth = parse_trajectories("'cup': [[37.0, 0.5, 0.5]]");
  const auto sample =
      make_sample("Q", "Ghost 'left hand': [[5.0, 0.9, 0.9]] appears.");
  const auto outcome = repair_sample(sample, truth, 0.1);
  CHECK(outcome.n_lists == 1);
  CHECK(outcome.n_unattributed == 1);
  CHECK(outcome.sample.response == sample.response);
}

TEST_CASE("apostrophes in prose are not mistaken for labels") {
  const auto truth = parse_trajectories("'cup': [[37.0, 0.5, 0.5]]");
  const auto sample = make_sample("Q", "The person's hand; the knife's edge.");
  const auto outcome = repair_sample(sample, truth, 0.1);
  CHECK(outcome.n_lists == 0);
  CHECK(outcome.sample.response == sample.response);
}

namespace {

std::vector<VideoManifest> stats_fixture() {
  SynthConfig config;
  config.seed = 71;
  config.n_videos = 1;
  config.weight_epic = 1.0;
  config.weight_ego4d = 0.0;
  config.weight_pta = 0.0;
  auto manifests = synthesize_manifests(config);
  auto& m = manifests[0];
  m.video_id = "ek_0000";
  m.duration_s = 48.0;
  // Three clips [0,16) [16,32) [32,48) with 2, 3, 4 intersecting actions.
  m.actions.clear();
  for (int i = 0; i < 2; ++i) m.actions.push_back({1.0 + i, 2.0 + i, "a", ActionKind::VerbNoun});
  for (int i = 0; i < 3; ++i) m.actions.push_back({17.0 + i, 18.0 + i, "b", ActionKind::VerbNoun});
  for (int i = 0; i < 4; ++i) m.actions.push_back({33.0 + i, 34.0 + i, "c", ActionKind::VerbNoun});
  return manifests;
}

}  // namespace

TEST_CASE("compute_stats averages actions over distinct clips") {
  const auto manifests = stats_fixture();
  std::vector<InstructionSample> samples;
  for (int clip = 0; clip < 3; ++clip) {
    InstructionSample s = make_sample("q", "a");
    s.video_id = "ek_0000";
    s.clip = {16.0 * clip, 16.0 * (clip + 1)};
    s.sample_id = "s" + std::to_string(clip);
    samples.push_back(s);
  }
  const auto stats = compute_stats(manifests, samples);
  CHECK(!stats.empty);
  CHECK(stats.total.n_clips == 3);
  CHECK(stats.total.n_samples == 3);
  CHECK(stats.total.avg_actions_per_clip == doctest::Approx(3.0));
  CHECK(stats.total.avg_samples_per_clip == doctest::Approx(1.0));
}

TEST_CASE("compute_stats reports the target sample density") {
  const auto manifests = stats_fixture();
  std::vector<InstructionSample> samples;
  for (int i = 0; i < 11; ++i) {
    InstructionSample s = make_sample("q", "a");
    s.video_id = "ek_0000";
    s.clip = {0.0, 16.0};
    s.sample_id = "s" + std::to_string(i);
    samples.push_back(s);
  }
  const auto stats = compute_stats(manifests, samples);
  CHECK(stats.total.n_clips == 1);
  CHECK(stats.total.avg_samples_per_clip == doctest::Approx(11.0));
}

TEST_CASE("compute_stats on an empty dataset") {
  const auto stats = compute_stats(stats_fixture(), {});
  CHECK(stats.empty);
  CHECK(stats.total.n_clips == 0);
  CHECK(stats.total.avg_actions_per_clip == 0.0);
  CHECK(stats.total.avg_samples_per_clip == 0.0);
}

TEST_CASE("compute_stats rejects dangling video references") {
  auto sample = make_sample("q", "a");
  sample.video_id = "missing";
  try {
    compute_stats(stats_fixture(), {sample});
    FAIL("expected DanglingReference");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DanglingReference);
  }
}

TEST_CASE("sample files round-trip") {
  testsup::TempDir dir("dataset_io");
  Rng rng(73);
  std::vector<InstructionSample> samples;
  for (int i = 0; i < 5; ++i) {
    auto s = random_sample(rng);
    s.sample_id = "s" + std::to_string(i);
    s.task_type = i % 2 ? ResponseType::TemporalReasoning : ResponseType::Description;
    samples.push_back(s);
  }
  const auto path = dir.str("samples.jsonl");
  write_samples(path, samples);
  const auto reread = read_samples(path);
  REQUIRE(reread.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(sample_to_line(reread[i]) == sample_to_line(samples[i]));
  }
}

TEST_CASE("a corrupt line is reported by number") {
  testsup::TempDir dir("dataset_corrupt");
  const auto path = dir.str("samples.jsonl");
  const auto good = sample_to_line(make_sample("q", "a"));
  {
    std::ofstream out(path);
    out << good << "\n" << good << "\n" << "{ nope\n" << good << "\n";
  }
  try {
    read_samples(path);
    FAIL("expected MalformedLine");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedLine);
    CHECK(e.line_no() == 3);
  }
}

TEST_CASE("an empty file is an empty dataset") {
  testsup::TempDir dir("dataset_empty");
  const auto path = dir.str("samples.jsonl");
  { std::ofstream out(path); }
  CHECK(read_samples(path).empty());
}

TEST_CASE("schema version mismatches are rejected") {
  testsup::TempDir dir("dataset_schema");
  const auto path = dir.str("samples.jsonl");
  std::string line = sample_to_line(make_sample("q", "a"));
  const auto pos = line.find("\"schema_version\":1");
  REQUIRE(pos != std::string::npos);
  line.replace(pos, 18, "\"schema_version\":9");
  {
    std::ofstream out(path);
    out << line << "\n";
  }
  try {
    read_samples(path);
    FAIL("expected SchemaVersionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaVersionMismatch);
  }
}
