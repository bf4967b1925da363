#include "eagle/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eagle/errors.hpp"
#include "eagle/ingest.hpp"
#include "eagle/numfmt.hpp"

namespace eagle {
namespace {

using nlohmann::json;

constexpr int kSampleSchemaVersion = 1;

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

const char* to_string(Ablation a) {
  switch (a) {
    case Ablation::Full: return "full";
    case Ablation::NoTime: return "no_time";
    case Ablation::NoObj: return "no_obj";
    case Ablation::DescOnly: return "desc_only";
  }
  return "?";
}

Ablation ablation_from_string(std::string_view s) {
  if (s == "full") return Ablation::Full;
  if (s == "no_time" || s == "no-time") return Ablation::NoTime;
  if (s == "no_obj" || s == "no-obj") return Ablation::NoObj;
  if (s == "desc_only" || s == "desc-only") return Ablation::DescOnly;
  throw Error(ErrorKind::UsageError, "unknown ablation '" + std::string(s) + "'");
}

// --- generated-text parsing ---------------------------------------------

GeneratedParse parse_generated(std::string_view text) {
  GeneratedParse result;
  ResponseType current_type = ResponseType::Description;

  bool have_question = false;
  std::string question;
  std::size_t question_offset = 0;
  std::string* accumulating = nullptr;  // multi-line question or answer body
  std::string answer;
  bool have_answer = false;

  auto flush_pair = [&] {
    if (have_question && have_answer) {
      result.pairs.push_back({std::string(trim(question)), std::string(trim(answer)),
                              current_type});
    } else if (have_question) {
      result.warnings.push_back(
          {question_offset, "question without an Answer: line"});
    }
    question.clear();
    answer.clear();
    have_question = have_answer = false;
    accumulating = nullptr;
  };

  std::size_t offset = 0;
  while (offset <= text.size()) {
    auto nl = text.find('\n', offset);
    const std::string_view line =
        nl == std::string_view::npos ? text.substr(offset)
                                     : text.substr(offset, nl - offset);
    const std::string_view stripped = trim(line);

    if (starts_with(stripped, "Response type")) {
      flush_pair();
      // Accept "Response type: X" and the numbered "Response type 3: X".
      auto colon = stripped.find(':');
      std::string_view name =
          colon == std::string_view::npos ? "" : trim(stripped.substr(colon + 1));
      ResponseType parsed;
      if (response_type_from_display(name, &parsed)) {
        current_type = parsed;
      } else {
        current_type = ResponseType::Description;
        result.warnings.push_back(
            {offset, "unknown response type '" + std::string(name) +
                         "', falling back to Description"});
      }
    } else if (starts_with(stripped, "Question:")) {
      flush_pair();
      question = std::string(stripped.substr(9));
      question_offset = offset;
      have_question = true;
      accumulating = &question;
    } else if (starts_with(stripped, "Answer:")) {
      if (!have_question) {
        result.warnings.push_back({offset, "answer without a Question: line"});
        accumulating = nullptr;
      } else {
        answer = std::string(stripped.substr(7));
        have_answer = true;
        accumulating = &answer;
      }
    } else if (!stripped.empty() && accumulating) {
      *accumulating += "\n";
      *accumulating += std::string(stripped);
    }

    if (nl == std::string_view::npos) break;
    offset = nl + 1;
  }
  flush_pair();
  return result;
}

// --- ablation stripping -----------------------------------------------------

namespace {

// Matches an unsigned decimal at `pos`; advances past it on success.
bool scan_number(std::string_view text, std::size_t* pos) {
  std::size_t p = *pos;
  if (p < text.size() && (text[p] == '-' || text[p] == '+')) ++p;
  std::size_t digits = p;
  while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
  if (p == digits) return false;
  if (p < text.size() && text[p] == '.') {
    ++p;
    std::size_t frac = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (p == frac) return false;
  }
  *pos = p;
  return true;
}

void skip_spaces(std::string_view text, std::size_t* pos) {
  while (*pos < text.size() && text[*pos] == ' ') ++(*pos);
}

// <a,b> with canonical numbers, no interior spaces around the comma
// required but tolerated.
bool scan_time_token(std::string_view text, std::size_t start, std::size_t* end) {
  std::size_t p = start;
  if (p >= text.size() || text[p] != '<') return false;
  ++p;
  skip_spaces(text, &p);
  if (!scan_number(text, &p)) return false;
  skip_spaces(text, &p);
  if (p >= text.size() || text[p] != ',') return false;
  ++p;
  skip_spaces(text, &p);
  if (!scan_number(text, &p)) return false;
  skip_spaces(text, &p);
  if (p >= text.size() || text[p] != '>') return false;
  *end = p + 1;
  return true;
}

// [t, x, y]
bool scan_triple(std::string_view text, std::size_t start, std::size_t* end) {
  std::size_t p = start;
  if (p >= text.size() || text[p] != '[') return false;
  ++p;
  for (int i = 0; i < 3; ++i) {
    skip_spaces(text, &p);
    if (!scan_number(text, &p)) return false;
    skip_spaces(text, &p);
    if (i < 2) {
      if (p >= text.size() || text[p] != ',') return false;
      ++p;
    }
  }
  if (p >= text.size() || text[p] != ']') return false;
  *end = p + 1;
  return true;
}

// [[t, x, y], [t, x, y], ...]
bool scan_triple_list(std::string_view text, std::size_t start, std::size_t* end) {
  std::size_t p = start;
  if (p >= text.size() || text[p] != '[') return false;
  ++p;
  skip_spaces(text, &p);
  std::size_t triple_end = 0;
  if (!scan_triple(text, p, &triple_end)) return false;
  p = triple_end;
  while (true) {
    std::size_t q = p;
    skip_spaces(text, &q);
    if (q < text.size() && text[q] == ',') {
      ++q;
      skip_spaces(text, &q);
      if (!scan_triple(text, q, &triple_end)) break;
      p = triple_end;
      continue;
    }
    break;
  }
  skip_spaces(text, &p);
  if (p >= text.size() || text[p] != ']') return false;
  *end = p + 1;
  return true;
}

}  // namespace

std::string strip_time_tokens(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = 0;
    if (text[pos] == '<' && scan_time_token(text, pos, &end)) {
      pos = end;
      if (pos < text.size() && text[pos] == ' ') ++pos;
      continue;
    }
    out += text[pos++];
  }
  return out;
}

std::string strip_coordinate_lists(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = 0;
    if (text[pos] == '[' && (scan_triple_list(text, pos, &end) ||
                             scan_triple(text, pos, &end))) {
      pos = end;
      if (pos < text.size() && text[pos] == ' ') ++pos;
      continue;
    }
    out += text[pos++];
  }
  return out;
}

InstructionSample apply_ablation(const InstructionSample& sample, Ablation variant) {
  InstructionSample out = sample;
  const bool strip_time =
      variant == Ablation::NoTime || variant == Ablation::DescOnly;
  const bool strip_obj =
      variant == Ablation::NoObj || variant == Ablation::DescOnly;
  if (strip_obj) {
    out.instruction = strip_coordinate_lists(out.instruction);
    out.response = strip_coordinate_lists(out.response);
  }
  if (strip_time) {
    out.instruction = strip_time_tokens(out.instruction);
    out.response = strip_time_tokens(out.response);
  }
  out.ablation = variant;
  return out;
}

// --- coordinate repair --------------------------------------------------------

namespace {

// Lenient triple-list reader for response text: accepts out-of-range
// coordinates (they are exactly what repair fixes) and keeps point order.
bool read_embedded_list(std::string_view text, std::size_t bracket,
                        std::vector<TrajectoryPoint>* points, bool* decimal_times,
                        std::size_t* end) {
  std::size_t p = bracket;
  if (p >= text.size() || text[p] != '[') return false;
  if (!scan_triple_list(text, p, end)) return false;
  // Re-walk the validated span collecting values.
  ++p;
  bool first = true;
  while (p < *end - 1) {
    skip_spaces(text, &p);
    if (text[p] == ',') {
      ++p;
      continue;
    }
    if (text[p] != '[') break;
    ++p;
    double v[3];
    bool had_decimal = false;
    for (int i = 0; i < 3; ++i) {
      skip_spaces(text, &p);
      std::size_t num_start = p;
      scan_number(text, &p);
      bool dec = false;
      parse_number(text.substr(num_start, p - num_start), &v[i], &dec);
      if (i == 0) had_decimal = dec;
      skip_spaces(text, &p);
      if (i < 2) ++p;  // comma, validated by scan_triple_list
    }
    ++p;  // closing ']'
    if (first) {
      *decimal_times = had_decimal;
      first = false;
    }
    points->push_back({v[0], v[1], v[2]});
  }
  return !points->empty();
}

}  // namespace

SampleRepairOutcome repair_sample(const InstructionSample& sample,
                                  const std::vector<ObjectTrajectory>& truth,
                                  double tau) {
  SampleRepairOutcome outcome;
  outcome.sample = sample;

  struct Edit {
    std::size_t begin, end;
    std::string replacement;
  };
  std::vector<Edit> edits;

  const std::string& text = sample.response;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != '\'') {
      ++pos;
      continue;
    }
    // Candidate 'LABEL': [[...]] span.
    const std::size_t label_start = pos + 1;
    const std::size_t label_end = text.find('\'', label_start);
    if (label_end == std::string::npos) break;
    std::size_t p = label_end + 1;
    skip_spaces(text, &p);
    if (p >= text.size() || text[p] != ':') {
      ++pos;
      continue;
    }
    ++p;
    skip_spaces(text, &p);
    std::vector<TrajectoryPoint> points;
    bool decimal_times = true;
    std::size_t list_end = 0;
    if (!read_embedded_list(text, p, &points, &decimal_times, &list_end)) {
      ++pos;
      continue;
    }

    ++outcome.n_lists;
    const std::string label = text.substr(label_start, label_end - label_start);
    const ObjectTrajectory* reference = nullptr;
    for (const auto& t : truth) {
      if (t.label == label) {
        reference = &t;
        break;
      }
    }
    if (!reference || reference->points.empty()) {
      ++outcome.n_unattributed;
      pos = list_end;
      continue;
    }

    // Reference times are video-global; embedded lists are clip-relative.
    ObjectTrajectory shifted = *reference;
    for (auto& point : shifted.points) point.t -= sample.clip.start_s;

    ObjectTrajectory predicted{label, decimal_times, std::move(points)};
    RepairResult repaired = repair(predicted, shifted, tau);

    for (const auto& seg : repaired.report.replaced_segments) {
      outcome.report.replaced_segments.emplace_back(
          outcome.report.n_points + seg.first, outcome.report.n_points + seg.second);
    }
    outcome.report.n_points += repaired.report.n_points;
    outcome.report.n_replaced += repaired.report.n_replaced;
    outcome.report.max_deviation =
        std::max(outcome.report.max_deviation, repaired.report.max_deviation);

    edits.push_back({pos, list_end, render_trajectory_line(repaired.trajectory)});
    pos = list_end;
  }

  for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
    outcome.sample.response.replace(it->begin, it->end - it->begin, it->replacement);
  }
  return outcome;
}

// --- statistics -----------------------------------------------------------------

DatasetStats compute_stats(const std::vector<VideoManifest>& manifests,
                           const std::vector<InstructionSample>& samples) {
  std::map<std::string, const VideoManifest*> by_id;
  for (const auto& m : manifests) by_id[m.video_id] = &m;

  struct Accum {
    std::set<std::pair<std::string, std::pair<double, double>>> clips;
    std::size_t n_samples = 0;
    std::size_t action_sum = 0;
  };
  std::map<std::pair<Source, Split>, Accum> accums;
  Accum total;

  auto actions_in = [](const VideoManifest& m, const ClipSpan& span) {
    std::size_t n = 0;
    for (const auto& a : m.actions) {
      if (a.start_s < span.end_s && a.end_s > span.start_s) ++n;
    }
    return n;
  };

  for (const auto& s : samples) {
    auto it = by_id.find(s.video_id);
    if (it == by_id.end()) {
      throw Error(ErrorKind::DanglingReference,
                  "sample " + s.sample_id + " references unknown video '" +
                      s.video_id + "'");
    }
    const VideoManifest& m = *it->second;
    auto& cell = accums[{m.source, m.split}];
    const auto clip_id =
        std::make_pair(s.video_id, std::make_pair(s.clip.start_s, s.clip.end_s));
    if (cell.clips.insert(clip_id).second) {
      cell.action_sum += actions_in(m, s.clip);
    }
    ++cell.n_samples;
    if (total.clips.insert(clip_id).second) {
      total.action_sum += actions_in(m, s.clip);
    }
    ++total.n_samples;
  }

  DatasetStats stats;
  stats.empty = samples.empty();
  auto to_cell = [](const Accum& a) {
    StatsCell cell;
    cell.n_clips = a.clips.size();
    cell.n_samples = a.n_samples;
    if (!a.clips.empty()) {
      cell.avg_actions_per_clip =
          static_cast<double>(a.action_sum) / static_cast<double>(a.clips.size());
      cell.avg_samples_per_clip =
          static_cast<double>(a.n_samples) / static_cast<double>(a.clips.size());
    }
    return cell;
  };
  for (const auto& [key, accum] : accums) stats.cells[key] = to_cell(accum);
  stats.total = to_cell(total);
  return stats;
}

std::string stats_to_json(const DatasetStats& stats) {
  json cells = json::array();
  for (const auto& [key, cell] : stats.cells) {
    cells.push_back({{"source", to_string(key.first)},
                     {"split", to_string(key.second)},
                     {"n_clips", cell.n_clips},
                     {"n_samples", cell.n_samples},
                     {"avg_actions_per_clip", cell.avg_actions_per_clip},
                     {"avg_samples_per_clip", cell.avg_samples_per_clip}});
  }
  json doc{{"empty", stats.empty},
           {"cells", std::move(cells)},
           {"total",
            {{"n_clips", stats.total.n_clips},
             {"n_samples", stats.total.n_samples},
             {"avg_actions_per_clip", stats.total.avg_actions_per_clip},
             {"avg_samples_per_clip", stats.total.avg_samples_per_clip}}}};
  return doc.dump(2) + "\n";
}

std::string render_stats_table(const DatasetStats& stats) {
  std::ostringstream out;
  char row[160];
  std::snprintf(row, sizeof(row), "%-14s %-6s %8s %9s %13s %13s\n", "source",
                "split", "clips", "samples", "actions/clip", "samples/clip");
  out << row;
  auto emit = [&](const std::string& source, const std::string& split,
                  const StatsCell& cell) {
    std::snprintf(row, sizeof(row), "%-14s %-6s %8zu %9zu %13.2f %13.2f\n",
                  source.c_str(), split.c_str(), cell.n_clips, cell.n_samples,
                  cell.avg_actions_per_clip, cell.avg_samples_per_clip);
    out << row;
  };
  for (const auto& [key, cell] : stats.cells) {
    emit(to_string(key.first), to_string(key.second), cell);
  }
  emit("total", "-", stats.total);
  if (stats.empty) out << "(empty dataset)\n";
  return out.str();
}

// --- dataset files ---------------------------------------------------------------

std::string sample_to_line(const InstructionSample& sample) {
  json j{{"schema_version", kSampleSchemaVersion},
         {"sample_id", sample.sample_id},
         {"source", to_string(sample.source)},
         {"video_id", sample.video_id},
         {"clip", {{"start_s", sample.clip.start_s}, {"end_s", sample.clip.end_s}}},
         {"task_type", to_string(sample.task_type)},
         {"instruction", sample.instruction},
         {"response", sample.response},
         {"ablation", to_string(sample.ablation)}};
  return j.dump();
}

InstructionSample sample_from_line(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedLine, line_no, e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSampleSchemaVersion) {
      throw Error(ErrorKind::SchemaVersionMismatch,
                  "line " + std::to_string(line_no) + " has schema_version " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kSampleSchemaVersion));
    }
    InstructionSample sample;
    sample.sample_id = j.at("sample_id").get<std::string>();
    sample.source = source_from_string(j.at("source").get<std::string>());
    sample.video_id = j.at("video_id").get<std::string>();
    sample.clip.start_s = j.at("clip").at("start_s").get<double>();
    sample.clip.end_s = j.at("clip").at("end_s").get<double>();
    sample.task_type = response_type_from_string(j.at("task_type").get<std::string>());
    sample.instruction = j.at("instruction").get<std::string>();
    sample.response = j.at("response").get<std::string>();
    sample.ablation = ablation_from_string(j.at("ablation").get<std::string>());
    if (sample.instruction.empty() || sample.response.empty()) {
      throw Error(ErrorKind::MalformedLine, line_no,
                  "instruction and response must be non-empty");
    }
    return sample;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedLine, line_no, e.what());
  }
}

void write_samples(const std::filesystem::path& path,
                   const std::vector<InstructionSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  for (const auto& s : samples) out << sample_to_line(s) << "\n";
}

std::vector<InstructionSample> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  std::vector<InstructionSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    samples.push_back(sample_from_line(line, line_no));
  }
  return samples;
}

}  // namespace eagle
