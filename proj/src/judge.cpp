#include "eagle/judge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eagle/errors.hpp"
#include "eagle/rng.hpp"

namespace eagle {
namespace {

using nlohmann::json;

constexpr int kScoreSchemaVersion = 1;

constexpr const char* kMetricNames[5] = {"Accuracy", "Helpfulness", "Detail",
                                         "Conciseness", "Consistency"};

}  // namespace

double round2(double value) {
  // The epsilon keeps true halves (x.xx5) from rounding down when the
  // binary value sits a hair below them.
  return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

double overall_average(double accuracy, double helpfulness, double detail,
                       double conciseness, double consistency) {
  return round2((accuracy + helpfulness + detail + conciseness + consistency) / 5.0);
}

JudgeScore make_judge_score(int accuracy, int helpfulness, int detail,
                            int conciseness, int consistency) {
  const int values[5] = {accuracy, helpfulness, detail, conciseness, consistency};
  for (int i = 0; i < 5; ++i) {
    if (values[i] < 1 || values[i] > 10) {
      throw Error(ErrorKind::OutOfRange,
                  std::string(kMetricNames[i]) + " = " + std::to_string(values[i]) +
                      " outside [1,10]");
    }
  }
  JudgeScore score{accuracy, helpfulness, detail, conciseness, consistency, 0.0};
  score.mean = round2(
      (accuracy + helpfulness + detail + conciseness + consistency) / 5.0);
  return score;
}

std::size_t sample_size(std::size_t n) {
  if (n == 0) return 0;
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k >= 1 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

std::vector<InstructionSample> select_samples(
    const std::vector<InstructionSample>& samples, std::size_t k,
    std::uint64_t seed, bool stratify) {
  Rng rng(seed);
  k = std::min(k, samples.size());

  auto draw = [&rng](std::vector<std::size_t>& pool, std::size_t count) {
    // Partial Fisher-Yates; the first `count` entries are the selection.
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = static_cast<std::size_t>(
          rng.uniform_int(static_cast<std::int64_t>(i),
                          static_cast<std::int64_t>(pool.size()) - 1));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
  };

  std::vector<std::size_t> chosen;
  if (!stratify) {
    std::vector<std::size_t> pool(samples.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    draw(pool, k);
    chosen = std::move(pool);
  } else {
    const Source order[3] = {Source::EpicKitchens, Source::Ego4D, Source::Pta};
    std::vector<std::size_t> groups[3];
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (int g = 0; g < 3; ++g) {
        if (samples[i].source == order[g]) groups[g].push_back(i);
      }
    }
    // Largest-remainder allocation of k across the source groups.
    std::size_t quota[3] = {0, 0, 0};
    double remainder[3] = {0, 0, 0};
    std::size_t assigned = 0;
    for (int g = 0; g < 3; ++g) {
      const double exact = samples.empty()
                               ? 0.0
                               : static_cast<double>(k) *
                                     static_cast<double>(groups[g].size()) /
                                     static_cast<double>(samples.size());
      quota[g] = static_cast<std::size_t>(exact);
      remainder[g] = exact - static_cast<double>(quota[g]);
      assigned += quota[g];
    }
    while (assigned < k) {
      int best = -1;
      for (int g = 0; g < 3; ++g) {
        if (quota[g] >= groups[g].size()) continue;
        if (best < 0 || remainder[g] > remainder[best]) best = g;
      }
      if (best < 0) break;
      ++quota[best];
      remainder[best] = -1.0;
      ++assigned;
    }
    for (int g = 0; g < 3; ++g) {
      quota[g] = std::min(quota[g], groups[g].size());
      draw(groups[g], quota[g]);
      chosen.insert(chosen.end(), groups[g].begin(), groups[g].end());
    }
  }

  std::vector<InstructionSample> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(samples[i]);
  return out;
}

ChatRequest build_judge_request(const std::string& question,
                                const std::string& ground_truth,
                                const std::string& model_response) {
  if (question.empty() || ground_truth.empty() || model_response.empty()) {
    throw Error(ErrorKind::ArgumentRange,
                "question, ground truth, and model response must be non-empty");
  }
  ChatRequest request;
  request.temperature = 0.0;
  request.messages.push_back(
      {"system",
       "You are a strict evaluator of video-assistant answers. You compare a "
       "model's answer against the ground-truth description of the same clip "
       "and score it. Judge only from the text you are given."});

  std::string user;
  user += "Question:\n" + question + "\n\n";
  user += "Ground truth:\n" + ground_truth + "\n\n";
  user += "Model response:\n" + model_response + "\n\n";
  user +=
      "Score the model response on five metrics, each an integer from 1 to 10 "
      "(higher is better):\n"
      "Accuracy: how well the response matches what the ground truth says "
      "happens in the clip - the actions or procedure steps, the objects, and "
      "any time boundaries or coordinates the response states.\n"
      "Helpfulness: how much the response helps a reader understand the clip "
      "and its wider context, giving usable information rather than vague "
      "statements.\n"
      "Detail: how completely and specifically the response covers the "
      "essential objects and events of the clip.\n"
      "Conciseness: how clearly and briefly the response delivers the "
      "essential information, without padding or repetition.\n"
      "Consistency: how uniform and reliable the response stays across its "
      "parts, free of internal contradictions.\n\n"
      "Reply with exactly five lines, one per metric, in this form:\n"
      "Accuracy: <integer>\n"
      "Helpfulness: <integer>\n"
      "Detail: <integer>\n"
      "Conciseness: <integer>\n"
      "Consistency: <integer>\n";
  request.messages.push_back({"user", std::move(user)});
  return request;
}

JudgeScore parse_scores(std::string_view judge_text) {
  int values[5];
  bool found[5] = {false, false, false, false, false};

  std::size_t pos = 0;
  while (pos <= judge_text.size()) {
    auto nl = judge_text.find('\n', pos);
    std::string_view line = nl == std::string_view::npos
                                ? judge_text.substr(pos)
                                : judge_text.substr(pos, nl - pos);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    for (int i = 0; i < 5; ++i) {
      std::string prefix = std::string(kMetricNames[i]) + ":";
      // "Level of Detail" is accepted as an alias for the Detail line.
      if (i == 2 && line.substr(0, 16) == "Level of Detail:") {
        line = line.substr(9);
        prefix = "Detail:";
      }
      if (line.substr(0, prefix.size()) != prefix) continue;
      std::string_view rest = line.substr(prefix.size());
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      std::size_t digits = 0;
      int value = 0;
      while (digits < rest.size() &&
             std::isdigit(static_cast<unsigned char>(rest[digits]))) {
        value = value * 10 + (rest[digits] - '0');
        ++digits;
      }
      if (digits == 0) continue;
      if (value < 1 || value > 10) {
        throw Error(ErrorKind::OutOfRange,
                    std::string(kMetricNames[i]) + " = " + std::to_string(value) +
                        " outside [1,10]");
      }
      values[i] = value;
      found[i] = true;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }

  for (int i = 0; i < 5; ++i) {
    if (!found[i]) {
      throw Error(ErrorKind::MissingMetric,
                  std::string(kMetricNames[i]) + " not found in judge output");
    }
  }
  return make_judge_score(values[0], values[1], values[2], values[3], values[4]);
}

std::string render_score_lines(const JudgeScore& score) {
  std::string out;
  const int values[5] = {score.accuracy, score.helpfulness, score.detail,
                         score.conciseness, score.consistency};
  for (int i = 0; i < 5; ++i) {
    out += std::string(kMetricNames[i]) + ": " + std::to_string(values[i]) + "\n";
  }
  return out;
}

MetricMeans aggregate(const std::vector<JudgeScore>& scores) {
  if (scores.empty()) {
    throw Error(ErrorKind::EmptyInput, "no scores to aggregate");
  }
  double sums[5] = {0, 0, 0, 0, 0};
  for (const auto& s : scores) {
    sums[0] += s.accuracy;
    sums[1] += s.helpfulness;
    sums[2] += s.detail;
    sums[3] += s.conciseness;
    sums[4] += s.consistency;
  }
  const auto n = static_cast<double>(scores.size());
  MetricMeans means;
  means.accuracy = sums[0] / n;
  means.helpfulness = sums[1] / n;
  means.detail = sums[2] / n;
  means.conciseness = sums[3] / n;
  means.consistency = sums[4] / n;
  means.overall = overall_average(means.accuracy, means.helpfulness, means.detail,
                                  means.conciseness, means.consistency);
  return means;
}

namespace {

void sort_rows(std::vector<ModelAggregate>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const ModelAggregate& a, const ModelAggregate& b) {
              if (a.means.overall != b.means.overall) {
                return a.means.overall < b.means.overall;
              }
              if (a.means.accuracy != b.means.accuracy) {
                return a.means.accuracy < b.means.accuracy;
              }
              return a.model < b.model;
            });
}

}  // namespace

std::string render_report(std::vector<ModelAggregate> rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::EmptyInput, "no models to report");
  }
  sort_rows(rows);
  std::ostringstream out;
  char line[200];
  std::snprintf(line, sizeof(line), "%-24s %9s %12s %7s %12s %12s %8s\n", "Model",
                "Accuracy", "Helpfulness", "Detail", "Conciseness", "Consistency",
                "Average");
  out << line;
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%-24s %9.2f %12.2f %7.2f %12.2f %12.2f %8.2f\n",
                  row.model.c_str(), row.means.accuracy, row.means.helpfulness,
                  row.means.detail, row.means.conciseness, row.means.consistency,
                  row.means.overall);
    out << line;
  }
  return out.str();
}

std::string render_report_csv(std::vector<ModelAggregate> rows) {
  if (rows.empty()) {
    throw Error(ErrorKind::EmptyInput, "no models to report");
  }
  sort_rows(rows);
  std::ostringstream out;
  out << "model,accuracy,helpfulness,detail,conciseness,consistency,average\n";
  char line[200];
  for (const auto& row : rows) {
    std::snprintf(line, sizeof(line), "%s,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n",
                  row.model.c_str(), row.means.accuracy, row.means.helpfulness,
                  row.means.detail, row.means.conciseness, row.means.consistency,
                  row.means.overall);
    out << line;
  }
  return out.str();
}

void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  for (const auto& r : records) {
    json j{{"schema_version", kScoreSchemaVersion},
           {"sample_id", r.sample_id},
           {"model", r.model},
           {"accuracy", r.score.accuracy},
           {"helpfulness", r.score.helpfulness},
           {"detail", r.score.detail},
           {"conciseness", r.score.conciseness},
           {"consistency", r.score.consistency},
           {"mean", r.score.mean}};
    out << j.dump() << "\n";
  }
}

std::vector<ScoreRecord> read_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::MalformedLine, line_no, e.what());
    }
    try {
      const int version = j.at("schema_version").get<int>();
      if (version != kScoreSchemaVersion) {
        throw Error(ErrorKind::SchemaVersionMismatch,
                    "line " + std::to_string(line_no) + " has schema_version " +
                        std::to_string(version));
      }
      ScoreRecord r;
      r.sample_id = j.at("sample_id").get<std::string>();
      r.model = j.at("model").get<std::string>();
      r.score = make_judge_score(j.at("accuracy").get<int>(),
                                 j.at("helpfulness").get<int>(),
                                 j.at("detail").get<int>(),
                                 j.at("conciseness").get<int>(),
                                 j.at("consistency").get<int>());
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::MalformedLine, line_no, e.what());
    }
  }
  return records;
}

std::vector<ModelAggregate> aggregate_by_model(
    const std::vector<ScoreRecord>& records) {
  std::map<std::string, std::vector<JudgeScore>> by_model;
  for (const auto& r : records) by_model[r.model].push_back(r.score);
  std::vector<ModelAggregate> rows;
  rows.reserve(by_model.size());
  for (const auto& [model, scores] : by_model) {
    rows.push_back({model, aggregate(scores)});
  }
  return rows;
}

}  // namespace eagle
