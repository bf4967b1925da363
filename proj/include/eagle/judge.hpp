#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eagle/dataset.hpp"
#include "eagle/gateway.hpp"

namespace eagle {

/// Five 1-10 metric values plus their mean (2-decimal, round half up).
struct JudgeScore {
  int accuracy = 0;
  int helpfulness = 0;
  int detail = 0;
  int conciseness = 0;
  int consistency = 0;
  double mean = 0.0;
};

/// Round half up to 2 decimals.
double round2(double value);

/// Overall average from five per-metric means: their mean, 2-decimal
/// round half up.
double overall_average(double accuracy, double helpfulness, double detail,
                       double conciseness, double consistency);

JudgeScore make_judge_score(int accuracy, int helpfulness, int detail,
                            int conciseness, int consistency);

/// Square-root sampling: ceil(sqrt(n)) items from an n-item pool.
std::size_t sample_size(std::size_t n);

/// Uniform selection without replacement, deterministic in seed; size is
/// min(k, |samples|). With `stratify`, the quota splits across sources
/// proportionally (largest remainder).
std::vector<InstructionSample> select_samples(
    const std::vector<InstructionSample>& samples, std::size_t k,
    std::uint64_t seed, bool stratify = false);

/// Deterministic judging prompt holding the question, template ground
/// truth, and model response, demanding one "Metric: <integer>" line per
/// metric.
ChatRequest build_judge_request(const std::string& question,
                                const std::string& ground_truth,
                                const std::string& model_response);

/// Extracts the five metric lines. Throws MissingMetric(name) and
/// OutOfRange when a value leaves [1,10].
JudgeScore parse_scores(std::string_view judge_text);

/// Layout accepted back by parse_scores.
std::string render_score_lines(const JudgeScore& score);

struct MetricMeans {
  double accuracy = 0.0;
  double helpfulness = 0.0;
  double detail = 0.0;
  double conciseness = 0.0;
  double consistency = 0.0;
  double overall = 0.0;  // mean of the five means, 2-decimal round half up
};

/// Per-metric arithmetic means plus their overall average. Throws
/// EmptyInput on an empty list.
MetricMeans aggregate(const std::vector<JudgeScore>& scores);

struct ModelAggregate {
  std::string model;
  MetricMeans means;
};

/// Rows sorted ascending by overall average (ties: accuracy, then
/// name), fixed 2-decimal formatting.
std::string render_report(std::vector<ModelAggregate> rows);
std::string render_report_csv(std::vector<ModelAggregate> rows);

// --- scores files -----------------------------------------------------------

struct ScoreRecord {
  std::string sample_id;
  std::string model;
  JudgeScore score;
};

void write_scores(const std::filesystem::path& path,
                  const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_scores(const std::filesystem::path& path);

/// Groups records by model and aggregates each group.
std::vector<ModelAggregate> aggregate_by_model(const std::vector<ScoreRecord>& records);

}  // namespace eagle
