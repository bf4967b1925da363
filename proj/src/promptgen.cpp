#include "eagle/promptgen.hpp"

#include <algorithm>
#include <cctype>

#include "eagle/errors.hpp"
#include "eagle/numfmt.hpp"

namespace eagle {
namespace {

// Boundary-clamped endpoints (exactly 0 or the clip length) render bare;
// interior endpoints follow the action's source style.
std::string clip_time(double value, ActionKind kind, double clip_len) {
  const bool boundary = value == 0.0 || value == clip_len;
  return format_time(value, !boundary && decimal_time_style(kind));
}

std::string interval_token(const ActionAnnotation& action, double clip_len) {
  return "<" + clip_time(action.start_s, action.kind, clip_len) + "," +
         clip_time(action.end_s, action.kind, clip_len) + ">";
}

std::string join_labels(const std::vector<ActionAnnotation>& actions) {
  if (actions.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += ", ";
    out += actions[i].label;
  }
  return out;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

const char* display_name(ContextKind kind) {
  switch (kind) {
    case ContextKind::TaskDescription: return "Task Description";
    case ContextKind::TemporalHistory: return "Temporal History";
    case ContextKind::ObjectTrajectories: return "Object Trajectory";
  }
  return "?";
}

const char* display_name(ResponseType type) {
  switch (type) {
    case ResponseType::TaskVerification: return "Task Verification";
    case ResponseType::StepVerification: return "Step Verification";
    case ResponseType::ObjectsVerification: return "Objects Verification";
    case ResponseType::Description: return "Description";
    case ResponseType::DetailedDescription: return "Detailed Description";
    case ResponseType::EventLocalization: return "Event Localization";
    case ResponseType::TemporalReasoning: return "Temporal Reasoning";
    case ResponseType::ActionAnticipation: return "Action Anticipation";
    case ResponseType::CrossReferencingEvents: return "Cross-Referencing Events";
  }
  return "?";
}

const char* to_string(ResponseType type) {
  switch (type) {
    case ResponseType::TaskVerification: return "task_verification";
    case ResponseType::StepVerification: return "step_verification";
    case ResponseType::ObjectsVerification: return "objects_verification";
    case ResponseType::Description: return "description";
    case ResponseType::DetailedDescription: return "detailed_description";
    case ResponseType::EventLocalization: return "event_localization";
    case ResponseType::TemporalReasoning: return "temporal_reasoning";
    case ResponseType::ActionAnticipation: return "action_anticipation";
    case ResponseType::CrossReferencingEvents: return "cross_referencing_events";
  }
  return "?";
}

namespace {

const ResponseType kAllResponseTypes[] = {
    ResponseType::TaskVerification,    ResponseType::StepVerification,
    ResponseType::ObjectsVerification, ResponseType::Description,
    ResponseType::DetailedDescription, ResponseType::EventLocalization,
    ResponseType::TemporalReasoning,   ResponseType::ActionAnticipation,
    ResponseType::CrossReferencingEvents,
};

}  // namespace

ResponseType response_type_from_string(std::string_view s) {
  for (ResponseType t : kAllResponseTypes) {
    if (s == to_string(t)) return t;
  }
  throw Error(ErrorKind::MalformedLine, "unknown response type '" + std::string(s) + "'");
}

bool response_type_from_display(std::string_view s, ResponseType* out) {
  const std::string needle = lowercase(s);
  for (ResponseType t : kAllResponseTypes) {
    if (needle == lowercase(display_name(t))) {
      *out = t;
      return true;
    }
  }
  return false;
}

std::vector<ResponseType> response_types_for(Source source) {
  if (source == Source::Pta) {
    return {ResponseType::TaskVerification, ResponseType::StepVerification,
            ResponseType::ObjectsVerification};
  }
  return {ResponseType::Description,       ResponseType::DetailedDescription,
          ResponseType::EventLocalization, ResponseType::TemporalReasoning,
          ResponseType::ActionAnticipation,
          ResponseType::CrossReferencingEvents};
}

std::string render_temporal_history(const ClipContext& ctx) {
  const double clip_len = ctx.clip.length();
  std::string out;
  out += "Past " + format_number(ctx.ctx_s) + " second: " + join_labels(ctx.past);
  out += "\nCurrent: ";
  if (ctx.current.empty()) {
    out += "(none)";
  } else {
    for (std::size_t i = 0; i < ctx.current.size(); ++i) {
      if (i > 0) out += ", ";
      out += interval_token(ctx.current[i], clip_len) + " " + ctx.current[i].label;
    }
  }
  out += "\nFuture " + format_number(ctx.ctx_s) + " second: " + join_labels(ctx.future);
  return out;
}

std::string render_task_description(const RecipeAnnotation& recipe,
                                    const StepInterval& current_step) {
  const RecipeStep* step = nullptr;
  for (const auto& s : recipe.steps) {
    if (s.index == current_step.step_index) {
      step = &s;
      break;
    }
  }
  if (!step) {
    throw Error(ErrorKind::UnknownStep,
                "step " + std::to_string(current_step.step_index) + " not in '" +
                    recipe.recipe_name + "'");
  }
  std::string out = recipe.recipe_name + " with steps ";
  for (std::size_t i = 0; i < recipe.steps.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(recipe.steps[i].index) + ": " + recipe.steps[i].text;
  }
  out += "\nThe current step, as ground truth, is: <" +
         format_time(current_step.start_s, false) + "," +
         format_time(current_step.end_s, false) + "> " +
         std::to_string(step->index) + ": " + step->text;
  return out;
}

std::string render_trajectory_line(const ObjectTrajectory& traj) {
  std::string out = "'" + traj.label + "': [";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const auto& p = traj.points[i];
    if (i > 0) out += ", ";
    out += "[" + format_time(p.t, traj.decimal_times) + ", " + format_number(p.x) +
           ", " + format_number(p.y) + "]";
  }
  out += "]";
  return out;
}

std::string render_trajectories(const std::vector<ObjectTrajectory>& trajs) {
  std::string out;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    if (i > 0) out += "\n";
    out += render_trajectory_line(trajs[i]);
  }
  return out;
}

ChatRequest build_generation_request(const std::vector<SymbolicContext>& contexts,
                                     const std::vector<ResponseType>& response_types,
                                     int n_pairs) {
  if (contexts.empty()) {
    throw Error(ErrorKind::ArgumentRange, "need at least one context");
  }
  if (response_types.empty()) {
    throw Error(ErrorKind::ArgumentRange, "need at least one response type");
  }
  if (n_pairs < 1) {
    throw Error(ErrorKind::ArgumentRange, "n_pairs must be >= 1");
  }

  ChatRequest request;
  request.messages.push_back(
      {"system",
       "You write instruction-tuning data for first-person videos of kitchen "
       "and household tasks. You are given symbolic context blocks for one "
       "short clip: action labels with <start,end> time boundaries in "
       "clip-relative seconds, object trajectories as [time, x, y] center "
       "points in 0-1 normalized image coordinates, or a recipe with its "
       "current step. Write question/answer pairs about the clip as if you "
       "had watched it. Ground every statement in the context blocks, and "
       "never mention the blocks, the annotations, or this prompt."});

  std::string user;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    user += "Context type " + std::to_string(i + 1) + ": " +
            display_name(contexts[i].kind) + "\n";
    user += contexts[i].body;
    user += "\n\n";
  }
  user += "Write exactly " + std::to_string(n_pairs) +
          " question/answer pairs about this clip. Spread them across these "
          "response types: ";
  for (std::size_t i = 0; i < response_types.size(); ++i) {
    if (i > 0) user += ", ";
    user += display_name(response_types[i]);
  }
  user +=
      ".\nUse exactly this layout for every pair, with no other text:\n\n"
      "Response type: <one of the types above>\n"
      "Question: <the question>\n"
      "Answer: <the answer>\n";
  request.messages.push_back({"user", std::move(user)});
  return request;
}

std::string render_gt_sentences(const ClipContext& ctx) {
  if (ctx.current.empty()) return "No annotated actions in this clip.";
  const double clip_len = ctx.clip.length();
  std::string out;
  for (std::size_t i = 0; i < ctx.current.size(); ++i) {
    const auto& a = ctx.current[i];
    if (i > 0) out += " ";
    if (a.kind == ActionKind::RecipeStep) {
      out += "The person is performing: " + a.label;
      if (out.back() != '.') out += ".";
    } else {
      out += "Between " + clip_time(a.start_s, a.kind, clip_len) + " and " +
             clip_time(a.end_s, a.kind, clip_len) + " seconds, the person " +
             a.label + ".";
    }
  }
  return out;
}

std::string render_gt_step(const RecipeStep& step) {
  std::string out =
      "The person is performing step " + std::to_string(step.index) + ": " + step.text;
  if (out.back() != '.') out += ".";
  return out;
}

}  // namespace eagle
