#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "eagle/clipper.hpp"
#include "eagle/gateway.hpp"
#include "eagle/types.hpp"

namespace eagle {

enum class ContextKind { TaskDescription, TemporalHistory, ObjectTrajectories };

const char* display_name(ContextKind kind);

struct SymbolicContext {
  ContextKind kind;
  std::string body;
};

enum class ResponseType {
  TaskVerification,
  StepVerification,
  ObjectsVerification,
  Description,
  DetailedDescription,
  EventLocalization,
  TemporalReasoning,
  ActionAnticipation,
  CrossReferencingEvents,
};

const char* display_name(ResponseType type);
const char* to_string(ResponseType type);  // snake_case id for records
ResponseType response_type_from_string(std::string_view s);
/// Lenient match on a display name ("Step Verification", "step
/// verification"); false when unrecognized.
bool response_type_from_display(std::string_view s, ResponseType* out);

/// Recipe clips draw verification tasks; kitchen clips the six
/// activity-understanding tasks.
std::vector<ResponseType> response_types_for(Source source);

// --- renderers ---------------------------------------------------------
//
// Time boundaries render as <start,end> in the canonical number format.
// Endpoints that sit exactly on the clip boundary (0 or clip length,
// i.e. values produced by rebase clamping) render bare; interior
// kitchen timestamps keep the decimal style ("5.0"), recipe timestamps
// render bare ("12").

/// Past / Current / Future blocks. Past and future carry labels only;
/// current actions carry <start,end> tokens in clip-relative time.
/// Empty blocks render "(none)".
std::string render_temporal_history(const ClipContext& ctx);

/// Recipe name, the enumerated step list, and the ground-truth current
/// step with its clip-relative boundary. Throws UnknownStep.
std::string render_task_description(const RecipeAnnotation& recipe,
                                    const StepInterval& current_step);

/// One line per trajectory: 'LABEL': [[t, x, y], ...]. Fixed point of
/// parse_trajectories (canonical numbers, points sorted by t).
std::string render_trajectory_line(const ObjectTrajectory& traj);
std::string render_trajectories(const std::vector<ObjectTrajectory>& trajs);

/// System + user message pair asking for n_pairs question/answer pairs
/// of the given types, in the layout parse_generated reads back.
/// Byte-identical output for identical inputs.
ChatRequest build_generation_request(const std::vector<SymbolicContext>& contexts,
                                     const std::vector<ResponseType>& response_types,
                                     int n_pairs = 11);

/// Template ground truth: one sentence per current action, label
/// inserted verbatim.
std::string render_gt_sentences(const ClipContext& ctx);
std::string render_gt_step(const RecipeStep& step);

}  // namespace eagle
