#include "eagle/ingest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eagle/errors.hpp"
#include "eagle/numfmt.hpp"
#include "eagle/rng.hpp"

namespace eagle {
namespace {

using nlohmann::json;

constexpr int kManifestSchemaVersion = 1;

std::vector<std::string_view> split_lines(std::string_view raw) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(raw.substr(pos));
      break;
    }
    lines.push_back(raw.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

double parse_time_field(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  if (!parse_number(field, &v)) {
    throw Error(ErrorKind::MalformedRow, line_no,
                "bad number '" + std::string(field) + "'");
  }
  return v;
}

// --- trajectory line parser ------------------------------------------------

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  void expect(char c) {
    if (eof() || peek() != c) {
      throw Error(ErrorKind::MalformedRow, line_no,
                  std::string("expected '") + c + "'");
    }
    ++pos;
  }

  bool consume(char c) {
    if (!eof() && peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::pair<double, bool> number() {
    skip_ws();
    std::size_t start = pos;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                      peek() == '.' || peek() == '-' || peek() == '+')) {
      ++pos;
    }
    double v = 0.0;
    bool had_decimal = false;
    if (pos == start ||
        !parse_number(text.substr(start, pos - start), &v, &had_decimal)) {
      throw Error(ErrorKind::MalformedRow, line_no, "expected a number");
    }
    return {v, had_decimal};
  }
};

}  // namespace

ActionRowFormat action_row_format_from_string(std::string_view s) {
  if (s == "verb-noun" || s == "verb_noun") return ActionRowFormat::VerbNoun;
  if (s == "narration") return ActionRowFormat::Narration;
  throw Error(ErrorKind::UsageError, "unknown action row format '" + std::string(s) + "'");
}

std::vector<ActionRow> parse_action_rows(ActionRowFormat format,
                                         std::string_view raw) {
  std::vector<ActionRow> rows;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(raw)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line);

    ActionRow row;
    if (format == ActionRowFormat::VerbNoun) {
      if (fields.size() != 5) {
        throw Error(ErrorKind::MalformedRow, line_no,
                    "expected video_id,start_s,end_s,verb,noun");
      }
      if (fields[3].empty() || fields[4].empty()) {
        throw Error(ErrorKind::MalformedRow, line_no, "empty verb or noun");
      }
      row.action.label = std::string(fields[3]) + " " + std::string(fields[4]);
      row.action.kind = ActionKind::VerbNoun;
    } else {
      if (fields.size() < 4) {
        throw Error(ErrorKind::MalformedRow, line_no,
                    "expected video_id,start_s,end_s,narration");
      }
      // Narration is everything after the third comma, commas included.
      std::string narration(fields[3]);
      for (std::size_t i = 4; i < fields.size(); ++i) {
        narration += ",";
        narration += fields[i];
      }
      if (narration.empty()) {
        throw Error(ErrorKind::MalformedRow, line_no, "empty narration");
      }
      row.action.label = narration;
      row.action.kind = ActionKind::Narration;
    }
    if (fields[0].empty()) {
      throw Error(ErrorKind::MalformedRow, line_no, "empty video_id");
    }
    row.video_id = std::string(fields[0]);
    row.action.start_s = parse_time_field(fields[1], line_no);
    row.action.end_s = parse_time_field(fields[2], line_no);
    if (row.action.start_s < 0.0 || row.action.start_s >= row.action.end_s) {
      throw Error(ErrorKind::IntervalError, line_no,
                  "need 0 <= start < end, got [" + format_number(row.action.start_s) +
                      ", " + format_number(row.action.end_s) + "]");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ActionAnnotation> parse_actions(ActionRowFormat format,
                                            std::string_view raw) {
  std::vector<ActionAnnotation> actions;
  for (auto& row : parse_action_rows(format, raw)) {
    actions.push_back(std::move(row.action));
  }
  return actions;
}

ObjectTrajectory parse_trajectory_line(std::string_view line, std::size_t line_no) {
  Cursor c{line, 0, line_no};
  c.skip_ws();
  c.expect('\'');
  auto label_end = line.find('\'', c.pos);
  if (label_end == std::string_view::npos) {
    throw Error(ErrorKind::MalformedRow, line_no, "unterminated label quote");
  }
  ObjectTrajectory traj;
  traj.label = std::string(line.substr(c.pos, label_end - c.pos));
  c.pos = label_end + 1;
  c.skip_ws();
  c.expect(':');
  c.skip_ws();
  c.expect('[');
  c.skip_ws();
  bool first_point = true;
  // The time style is only observable on integral timestamps ("5.0" vs
  // "12"); infer it from the first one, defaulting to decimal.
  bool style_known = false;
  while (!c.consume(']')) {
    if (!first_point) {
      c.expect(',');
      c.skip_ws();
    }
    c.expect('[');
    auto [t, t_decimal] = c.number();
    c.skip_ws();
    c.expect(',');
    auto [x, x_dec] = c.number();
    c.skip_ws();
    c.expect(',');
    auto [y, y_dec] = c.number();
    c.skip_ws();
    c.expect(']');
    c.skip_ws();
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0) {
      throw Error(ErrorKind::CoordinateRange, line_no,
                  "point (" + format_number(x) + ", " + format_number(y) +
                      ") outside [0,1]");
    }
    if (!style_known && t == std::floor(t)) {
      traj.decimal_times = t_decimal;
      style_known = true;
    }
    traj.points.push_back({t, x, y});
    first_point = false;
  }
  c.skip_ws();
  if (!c.eof()) {
    throw Error(ErrorKind::MalformedRow, line_no, "trailing content after ']'");
  }
  std::stable_sort(traj.points.begin(), traj.points.end(),
                   [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                     return a.t < b.t;
                   });
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    if (traj.points[i].t == traj.points[i - 1].t) {
      throw Error(ErrorKind::NonMonotonicTime, line_no,
                  "duplicate timestamp " + format_number(traj.points[i].t));
    }
  }
  return traj;
}

std::vector<ObjectTrajectory> parse_trajectories(std::string_view raw) {
  std::vector<ObjectTrajectory> trajectories;
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(raw)) {
    ++line_no;
    if (line.empty()) continue;
    trajectories.push_back(parse_trajectory_line(line, line_no));
  }
  return trajectories;
}

// --- synthetic collection ----------------------------------------------------

namespace {

const std::array<const char*, 8> kVerbs = {
    "open", "close", "take", "put down", "wash", "cut", "stir", "pour"};
const std::array<const char*, 10> kNouns = {
    "drawer", "fridge", "knife",  "cup",   "carrot",
    "courgette", "pan",   "cupboard", "tap", "cutting board"};
const std::array<const char*, 6> kKitchenObjects = {
    "right hand", "left hand", "drawer", "knife", "chopping board", "carrot"};
const std::array<const char*, 4> kPtaCaptions = {
    "A person is holding a knife above the cutting board.",
    "A jar is sitting near the edge of the table.",
    "A person is reaching toward a mixing bowl.",
    "A mug is standing beside the kettle."};
const std::array<const char*, 4> kLabs = {"lab_a", "lab_b", "lab_c", "lab_d"};

RecipeAnnotation make_recipe(int which) {
  RecipeAnnotation r;
  auto add = [&r](const char* text) {
    r.steps.push_back({static_cast<int>(r.steps.size()) + 1, text});
  };
  switch (which % 3) {
    case 0:
      r.recipe_name = "Pinwheels";
      add("Lay the tortilla flat on the cutting board.");
      add("Spread nut butter over the tortilla, keeping a margin at the edge.");
      add("Wipe the knife clean with a paper towel.");
      add("Spread jelly over the nut butter layer.");
      add("Wipe the knife clean again.");
      add("Roll the tortilla into a tight log.");
      add("Pin the roll with evenly spaced toothpicks.");
      add("Trim both ends of the roll and discard them.");
      add("Slide floss under the roll between two toothpicks.");
      add("Cross the floss ends and pull to slice.");
      add("Slice the rest of the roll into pinwheels.");
      add("Arrange the pinwheels on a plate.");
      break;
    case 1:
      r.recipe_name = "Mug cake";
      add("Measure flour, sugar, and cocoa into the mug.");
      add("Whisk the dry ingredients together.");
      add("Add milk and oil to the mug.");
      add("Stir the batter until smooth.");
      add("Scrape down the sides of the mug.");
      add("Microwave the mug on high power.");
      add("Let the cake cool briefly.");
      add("Top the cake and serve.");
      break;
    default:
      r.recipe_name = "Brew coffee";
      add("Fill the kettle and start it heating.");
      add("Place a paper filter in the dripper.");
      add("Grind the coffee beans.");
      add("Pour the grounds into the filter.");
      add("Wet the grounds and let them bloom.");
      add("Pour the remaining water in slow circles.");
      add("Wait for the water to drain through.");
      add("Discard the filter and serve the coffee.");
      break;
  }
  return r;
}

std::string narration_sentence(Rng& rng) {
  const char* verb = kVerbs[static_cast<std::size_t>(rng.uniform_int(0, kVerbs.size() - 1))];
  const char* noun = kNouns[static_cast<std::size_t>(rng.uniform_int(0, kNouns.size() - 1))];
  return std::string(verb) + "s the " + noun;
}

// Distinct integer timestamps in [0, t_max], sorted ascending.
std::vector<double> draw_times(Rng& rng, int count, int t_max) {
  std::set<int> chosen;
  int guard = 0;
  while (static_cast<int>(chosen.size()) < count && guard++ < 1000) {
    chosen.insert(static_cast<int>(rng.uniform_int(0, t_max)));
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace

std::vector<VideoManifest> synthesize_manifests(const SynthConfig& config) {
  if (config.n_videos < 1) {
    throw Error(ErrorKind::ArgumentRange, "n_videos must be >= 1");
  }
  if (config.actions_min < 1 || config.actions_max < config.actions_min) {
    throw Error(ErrorKind::ArgumentRange, "need 1 <= actions_min <= actions_max");
  }
  const double total_weight =
      config.weight_epic + config.weight_ego4d + config.weight_pta;
  if (total_weight <= 0.0) {
    throw Error(ErrorKind::ArgumentRange, "source weights must sum to > 0");
  }

  Rng rng(config.seed);
  std::vector<VideoManifest> manifests;
  manifests.reserve(static_cast<std::size_t>(config.n_videos));

  for (int i = 0; i < config.n_videos; ++i) {
    VideoManifest m;
    const double pick = rng.uniform_real(0.0, total_weight);
    if (pick < config.weight_epic) {
      m.source = Source::EpicKitchens;
    } else if (pick < config.weight_epic + config.weight_ego4d) {
      m.source = Source::Ego4D;
    } else {
      m.source = Source::Pta;
    }

    char id[32];
    const char* prefix = m.source == Source::EpicKitchens ? "ek"
                         : m.source == Source::Ego4D      ? "ego"
                                                          : "pta";
    std::snprintf(id, sizeof(id), "%s_%04d", prefix, i);
    m.video_id = id;

    // Quarter-second grid keeps every timestamp exact in the canonical
    // (<= 3 fractional digits) number format.
    m.duration_s = static_cast<double>(rng.uniform_int(4 * 32, 4 * 120)) / 4.0;
    const bool hd = rng.bernoulli(0.5);
    m.frame_width = hd ? 1920 : 1280;
    m.frame_height = hd ? 1080 : 720;

    if (m.source == Source::Pta) {
      m.lab_id = kLabs[static_cast<std::size_t>(rng.uniform_int(0, kLabs.size() - 1))];
      m.split = m.lab_id == config.holdout_lab ? Split::Val : Split::Train;

      RecipeAnnotation recipe = make_recipe(static_cast<int>(rng.uniform_int(0, 2)));
      const int n_steps = static_cast<int>(recipe.steps.size());
      const int n_intervals =
          static_cast<int>(rng.uniform_int(2, std::min(5, n_steps)));
      // Consecutive integer-boundary intervals covering [0, duration].
      std::set<int> cuts;
      while (static_cast<int>(cuts.size()) < n_intervals - 1) {
        cuts.insert(static_cast<int>(
            rng.uniform_int(1, static_cast<int>(m.duration_s) - 1)));
      }
      std::vector<double> bounds{0.0};
      bounds.insert(bounds.end(), cuts.begin(), cuts.end());
      bounds.push_back(m.duration_s);
      // Increasing step indices for consecutive intervals.
      std::set<int> step_ids;
      while (static_cast<int>(step_ids.size()) < n_intervals) {
        step_ids.insert(static_cast<int>(rng.uniform_int(1, n_steps)));
      }
      auto it = step_ids.begin();
      for (int k = 0; k < n_intervals; ++k, ++it) {
        StepInterval interval{*it, bounds[static_cast<std::size_t>(k)],
                              bounds[static_cast<std::size_t>(k) + 1]};
        recipe.step_intervals.push_back(interval);
        m.actions.push_back({interval.start_s, interval.end_s,
                             recipe.steps[static_cast<std::size_t>(*it - 1)].text,
                             ActionKind::RecipeStep});
      }
      m.recipe = std::move(recipe);
    } else {
      m.split = rng.bernoulli(0.8) ? Split::Train : Split::Val;
      const int n_actions =
          static_cast<int>(rng.uniform_int(config.actions_min, config.actions_max));
      for (int a = 0; a < n_actions; ++a) {
        ActionAnnotation act;
        act.start_s = static_cast<double>(rng.uniform_int(
                          0, static_cast<std::int64_t>(4.0 * (m.duration_s - 1.0)))) /
                      4.0;
        const double len = static_cast<double>(rng.uniform_int(2, 32)) / 4.0;
        act.end_s = std::min(act.start_s + len, m.duration_s);
        if (m.source == Source::EpicKitchens) {
          act.kind = ActionKind::VerbNoun;
          act.label = std::string(kVerbs[static_cast<std::size_t>(
                          rng.uniform_int(0, kVerbs.size() - 1))]) +
                      " " +
                      kNouns[static_cast<std::size_t>(
                          rng.uniform_int(0, kNouns.size() - 1))];
        } else {
          act.kind = ActionKind::Narration;
          act.label = narration_sentence(rng);
        }
        m.actions.push_back(std::move(act));
      }
      std::stable_sort(m.actions.begin(), m.actions.end(),
                       [](const ActionAnnotation& a, const ActionAnnotation& b) {
                         return a.start_s < b.start_s ||
                                (a.start_s == b.start_s && a.end_s < b.end_s);
                       });
    }

    const int n_trajs = static_cast<int>(rng.uniform_int(1, 3));
    for (int t = 0; t < n_trajs; ++t) {
      ObjectTrajectory traj;
      if (m.source == Source::Pta) {
        traj.decimal_times = false;
        traj.label = kPtaCaptions[static_cast<std::size_t>(
            rng.uniform_int(0, kPtaCaptions.size() - 1))];
      } else {
        traj.decimal_times = true;
        traj.label = kKitchenObjects[static_cast<std::size_t>(
            rng.uniform_int(0, kKitchenObjects.size() - 1))];
      }
      const int n_points = static_cast<int>(rng.uniform_int(4, 8));
      for (double time : draw_times(rng, n_points, static_cast<int>(m.duration_s))) {
        const double x = static_cast<double>(rng.uniform_int(0, 1000)) / 1000.0;
        const double y = static_cast<double>(rng.uniform_int(0, 1000)) / 1000.0;
        traj.points.push_back({time, x, y});
      }
      m.trajectories.push_back(std::move(traj));
    }

    manifests.push_back(std::move(m));
  }
  return manifests;
}

void assign_pta_splits(std::vector<VideoManifest>& manifests,
                       const std::string& holdout_lab) {
  for (auto& m : manifests) {
    if (m.source != Source::Pta) continue;
    m.split = m.lab_id == holdout_lab ? Split::Val : Split::Train;
  }
}

void validate_collection(const std::vector<VideoManifest>& manifests) {
  std::set<std::string> seen_ids;
  for (const auto& m : manifests) {
    if (!seen_ids.insert(m.video_id).second) {
      throw Error(ErrorKind::MalformedLine, "duplicate video_id '" + m.video_id + "'");
    }
    if (m.duration_s <= 0.0) {
      throw Error(ErrorKind::ArgumentRange,
                  m.video_id + ": duration_s must be > 0");
    }
    if (m.frame_width <= 0 || m.frame_height <= 0) {
      throw Error(ErrorKind::ArgumentRange, m.video_id + ": bad frame size");
    }
    if (m.recipe.has_value() != (m.source == Source::Pta)) {
      throw Error(ErrorKind::MalformedLine,
                  m.video_id + ": recipe present iff source is PTA");
    }
    for (const auto& a : m.actions) {
      if (a.start_s < 0.0 || a.start_s >= a.end_s || a.end_s > m.duration_s) {
        throw Error(ErrorKind::IntervalError,
                    m.video_id + ": action [" + format_number(a.start_s) + ", " +
                        format_number(a.end_s) + "] outside [0, " +
                        format_number(m.duration_s) + "]");
      }
    }
    for (const auto& traj : m.trajectories) {
      for (std::size_t i = 0; i < traj.points.size(); ++i) {
        const auto& p = traj.points[i];
        if (p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) {
          throw Error(ErrorKind::CoordinateRange,
                      m.video_id + ": '" + traj.label + "' point outside [0,1]");
        }
        if (i > 0 && p.t <= traj.points[i - 1].t) {
          throw Error(ErrorKind::NonMonotonicTime,
                      m.video_id + ": '" + traj.label + "' times not increasing");
        }
      }
    }
    if (m.recipe) {
      for (std::size_t i = 0; i < m.recipe->steps.size(); ++i) {
        if (m.recipe->steps[i].index != static_cast<int>(i) + 1) {
          throw Error(ErrorKind::UnknownStep,
                      m.video_id + ": step indices must be contiguous from 1");
        }
      }
      for (const auto& si : m.recipe->step_intervals) {
        if (si.step_index < 1 ||
            si.step_index > static_cast<int>(m.recipe->steps.size())) {
          throw Error(ErrorKind::UnknownStep,
                      m.video_id + ": step_interval references step " +
                          std::to_string(si.step_index));
        }
      }
    }
  }
}

// --- JSON I/O ----------------------------------------------------------------

namespace {

json trajectory_to_json(const ObjectTrajectory& traj) {
  json points = json::array();
  for (const auto& p : traj.points) points.push_back({p.t, p.x, p.y});
  return json{{"label", traj.label},
              {"t_style", traj.decimal_times ? "decimal" : "integer"},
              {"points", std::move(points)}};
}

ObjectTrajectory trajectory_from_json(const json& j) {
  ObjectTrajectory traj;
  traj.label = j.at("label").get<std::string>();
  traj.decimal_times = j.at("t_style").get<std::string>() == "decimal";
  for (const auto& p : j.at("points")) {
    traj.points.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                           p.at(2).get<double>()});
  }
  return traj;
}

json manifest_to_json(const VideoManifest& m) {
  json actions = json::array();
  for (const auto& a : m.actions) {
    actions.push_back({{"start_s", a.start_s},
                       {"end_s", a.end_s},
                       {"label", a.label},
                       {"kind", to_string(a.kind)}});
  }
  json trajectories = json::array();
  for (const auto& t : m.trajectories) trajectories.push_back(trajectory_to_json(t));

  json j{{"video_id", m.video_id},
         {"source", to_string(m.source)},
         {"split", to_string(m.split)},
         {"duration_s", m.duration_s},
         {"frame_width", m.frame_width},
         {"frame_height", m.frame_height},
         {"actions", std::move(actions)},
         {"trajectories", std::move(trajectories)}};
  if (!m.lab_id.empty()) j["lab_id"] = m.lab_id;
  if (m.recipe) {
    json steps = json::array();
    for (const auto& s : m.recipe->steps) {
      steps.push_back({{"index", s.index}, {"text", s.text}});
    }
    json intervals = json::array();
    for (const auto& si : m.recipe->step_intervals) {
      intervals.push_back({{"step_index", si.step_index},
                           {"start_s", si.start_s},
                           {"end_s", si.end_s}});
    }
    j["recipe"] = {{"recipe_name", m.recipe->recipe_name},
                   {"steps", std::move(steps)},
                   {"step_intervals", std::move(intervals)}};
  }
  return j;
}

VideoManifest manifest_from_json(const json& j) {
  VideoManifest m;
  m.video_id = j.at("video_id").get<std::string>();
  m.source = source_from_string(j.at("source").get<std::string>());
  m.split = split_from_string(j.at("split").get<std::string>());
  m.duration_s = j.at("duration_s").get<double>();
  m.frame_width = j.at("frame_width").get<int>();
  m.frame_height = j.at("frame_height").get<int>();
  if (j.contains("lab_id")) m.lab_id = j.at("lab_id").get<std::string>();
  for (const auto& a : j.at("actions")) {
    m.actions.push_back({a.at("start_s").get<double>(),
                         a.at("end_s").get<double>(),
                         a.at("label").get<std::string>(),
                         action_kind_from_string(a.at("kind").get<std::string>())});
  }
  for (const auto& t : j.at("trajectories")) {
    m.trajectories.push_back(trajectory_from_json(t));
  }
  if (j.contains("recipe") && !j.at("recipe").is_null()) {
    const auto& r = j.at("recipe");
    RecipeAnnotation recipe;
    recipe.recipe_name = r.at("recipe_name").get<std::string>();
    for (const auto& s : r.at("steps")) {
      recipe.steps.push_back({s.at("index").get<int>(), s.at("text").get<std::string>()});
    }
    for (const auto& si : r.at("step_intervals")) {
      recipe.step_intervals.push_back({si.at("step_index").get<int>(),
                                       si.at("start_s").get<double>(),
                                       si.at("end_s").get<double>()});
    }
    m.recipe = std::move(recipe);
  }
  return m;
}

}  // namespace

std::string manifests_to_json(const std::vector<VideoManifest>& manifests) {
  json videos = json::array();
  for (const auto& m : manifests) videos.push_back(manifest_to_json(m));
  json doc{{"schema_version", kManifestSchemaVersion}, {"videos", std::move(videos)}};
  return doc.dump(2) + "\n";
}

std::vector<VideoManifest> manifests_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("manifest JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kManifestSchemaVersion) {
      throw Error(ErrorKind::SchemaVersionMismatch,
                  "manifest schema_version " + doc.at("schema_version").dump() +
                      ", expected " + std::to_string(kManifestSchemaVersion));
    }
    std::vector<VideoManifest> manifests;
    for (const auto& v : doc.at("videos")) manifests.push_back(manifest_from_json(v));
    return manifests;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedLine, std::string("manifest JSON: ") + e.what());
  }
}

void write_manifests(const std::filesystem::path& path,
                     const std::vector<VideoManifest>& manifests) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  out << manifests_to_json(manifests);
}

std::vector<VideoManifest> read_manifests(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::TransportError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifests_from_json(buf.str());
}

}  // namespace eagle
