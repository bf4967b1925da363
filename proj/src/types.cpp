#include "eagle/types.hpp"

#include "eagle/errors.hpp"

namespace eagle {

const char* to_string(Source s) {
  switch (s) {
    case Source::EpicKitchens: return "epic_kitchens";
    case Source::Ego4D: return "ego4d";
    case Source::Pta: return "pta";
  }
  return "?";
}

const char* to_string(Split s) {
  return s == Split::Train ? "train" : "val";
}

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::VerbNoun: return "verb_noun";
    case ActionKind::Narration: return "narration";
    case ActionKind::RecipeStep: return "recipe_step";
  }
  return "?";
}

Source source_from_string(std::string_view s) {
  if (s == "epic_kitchens") return Source::EpicKitchens;
  if (s == "ego4d") return Source::Ego4D;
  if (s == "pta") return Source::Pta;
  throw Error(ErrorKind::MalformedLine, "unknown source '" + std::string(s) + "'");
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "val") return Split::Val;
  throw Error(ErrorKind::MalformedLine, "unknown split '" + std::string(s) + "'");
}

ActionKind action_kind_from_string(std::string_view s) {
  if (s == "verb_noun") return ActionKind::VerbNoun;
  if (s == "narration") return ActionKind::Narration;
  if (s == "recipe_step") return ActionKind::RecipeStep;
  throw Error(ErrorKind::MalformedLine, "unknown action kind '" + std::string(s) + "'");
}

}  // namespace eagle
